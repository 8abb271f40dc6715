#include "grouprep/semaxes.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "grouprep/error.hpp"
#include "grouprep/io.hpp"

namespace grouprep {

namespace {

std::vector<std::string> parse_pole(std::string_view field) {
    std::vector<std::string> out;
    for (auto w : split(field, ',')) {
        w = trim(w);
        if (w.empty()) continue;
        std::string word(w);
        if (std::find(out.begin(), out.end(), word) == out.end()) out.push_back(std::move(word));
    }
    return out;
}

std::string join(const std::vector<std::string>& words, char sep) {
    std::string out;
    for (const auto& w : words) {
        if (!out.empty()) out.push_back(sep);
        out += w;
    }
    return out;
}

}  // namespace

std::vector<SemanticAxis> parse_axes(std::string_view text) {
    std::vector<SemanticAxis> axes;
    std::set<std::string, std::less<>> ids;
    std::size_t line_no = 0;
    for (auto line : split(text, '\n')) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (trim(line).empty() || trim(line).front() == '#') continue;
        const auto fields = split(line, '\t');
        if (fields.size() != 3) {
            throw Error(Errc::MalformedLine, "axes line " + std::to_string(line_no) + " needs 3 tab-separated fields");
        }
        SemanticAxis axis{std::string(trim(fields[0])), parse_pole(fields[1]), parse_pole(fields[2])};
        if (axis.axis_id.empty()) throw Error(Errc::MalformedLine, "axes line " + std::to_string(line_no) + " has no id");
        if (axis.left_pole.empty() || axis.right_pole.empty()) throw Error(Errc::EmptyPole, "axis " + axis.axis_id);
        for (const auto& w : axis.left_pole) {
            if (std::find(axis.right_pole.begin(), axis.right_pole.end(), w) != axis.right_pole.end()) {
                throw Error(Errc::OverlappingPoles, "axis " + axis.axis_id + " has '" + w + "' on both poles");
            }
        }
        if (!ids.insert(axis.axis_id).second) throw Error(Errc::DuplicateAxis, axis.axis_id);
        axes.push_back(std::move(axis));
    }
    return axes;
}

std::vector<SemanticAxis> load_axes(const std::filesystem::path& path) { return parse_axes(read_file(path)); }

std::string serialize_axes(const std::vector<SemanticAxis>& axes) {
    std::ostringstream out;
    for (const auto& a : axes) out << a.axis_id << '\t' << join(a.left_pole, ',') << '\t' << join(a.right_pole, ',') << '\n';
    return out.str();
}

std::string_view pole_name(Pole pole) { return pole == Pole::Left ? "left" : "right"; }

AxisVector axis_vector(const SemanticAxis& axis, const EmbeddingSpace& space) {
    AxisVector out;
    out.axis_id = axis.axis_id;
    out.decade = space.decade();
    MeanVector left, right;
    try {
        left = mean_vector(axis.left_pole, space, kMinPoleWords);
        right = mean_vector(axis.right_pole, space, kMinPoleWords);
    } catch (const Error& e) {
        if (e.code() != Errc::TooFewWords) throw;
        throw Error(Errc::AxisExcluded, axis.axis_id + " in " + std::to_string(space.decade()) + ": " + e.what());
    }
    out.vector.resize(space.dim());
    for (std::size_t i = 0; i < space.dim(); ++i) out.vector[i] = right.mean[i] - left.mean[i];
    out.used_left = std::move(left.used);
    out.used_right = std::move(right.used);
    out.zero = std::all_of(out.vector.begin(), out.vector.end(), [](double v) { return v == 0.0; });
    return out;
}

double project(std::span<const double> group_vector, const AxisVector& axis) {
    if (axis.zero) throw Error(Errc::ZeroNorm, "axis " + axis.axis_id + " is a zero vector");
    return cosine(group_vector, axis.vector);
}

AxisDifference axis_difference(std::span<const double> group_a, std::span<const double> group_b, const AxisVector& axis) {
    AxisDifference d;
    d.axis_id = axis.axis_id;
    d.projection_a = project(group_a, axis);
    d.projection_b = project(group_b, axis);
    d.abs_diff = std::abs(d.projection_a - d.projection_b);
    d.pole_a = d.projection_a > 0.0 ? Pole::Right : Pole::Left;
    d.pole_b = d.projection_b > 0.0 ? Pole::Right : Pole::Left;
    return d;
}

std::vector<std::string> representative_words(const AxisVector& axis, Pole pole, std::span<const double> group_vector,
                                              const EmbeddingSpace& space, std::size_t count) {
    const auto& words = pole == Pole::Left ? axis.used_left : axis.used_right;
    std::vector<std::pair<double, std::string>> scored;
    for (const auto& w : words) {
        const auto v = space.find(w);
        if (!v || norm(*v) == 0.0) continue;
        scored.emplace_back(cosine(group_vector, *v), w);
    }
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    std::vector<std::string> out;
    for (std::size_t i = 0; i < scored.size() && i < count; ++i) out.push_back(scored[i].second);
    return out;
}

DecadeAxisResults compare_axes(const std::vector<SemanticAxis>& axes, const EmbeddingSpace& space,
                               std::span<const double> group_a, std::span<const double> group_b) {
    DecadeAxisResults results;
    results.decade = space.decade();
    for (const auto& axis : axes) {
        AxisVector av;
        try {
            av = axis_vector(axis, space);
        } catch (const Error& e) {
            if (e.code() != Errc::AxisExcluded) throw;
            results.excluded.push_back(axis.axis_id);
            continue;
        }
        if (av.zero) {
            results.zero_axes.push_back(axis.axis_id);
            continue;
        }
        AxisReportRow row;
        row.decade = space.decade();
        row.diff = axis_difference(group_a, group_b, av);
        row.words_a = representative_words(av, row.diff.pole_a, group_a, space);
        row.words_b = representative_words(av, row.diff.pole_b, group_b, space);
        results.rows.push_back(std::move(row));
    }
    return results;
}

std::vector<AxisReportRow> top_axes(const DecadeAxisResults& results, std::size_t top_k) {
    if (top_k == 0) throw Error(Errc::InvalidArgument, "top_k must be at least 1");
    std::vector<AxisReportRow> rows = results.rows;
    std::sort(rows.begin(), rows.end(), [](const AxisReportRow& a, const AxisReportRow& b) {
        if (a.diff.abs_diff != b.diff.abs_diff) return a.diff.abs_diff > b.diff.abs_diff;
        return a.diff.axis_id < b.diff.axis_id;
    });
    if (rows.size() > top_k) rows.resize(top_k);
    return rows;
}

std::string axes_report_csv(const std::vector<AxisReportRow>& rows) {
    std::ostringstream out;
    out << "decade,rank,axis_id,group_a_words,group_a_pole,group_b_words,group_b_pole,projection_a,projection_b,"
           "abs_diff,same_pole\n";
    int last_decade = 0;
    int rank = 0;
    for (const auto& r : rows) {
        rank = (rank == 0 || r.decade != last_decade) ? 1 : rank + 1;
        last_decade = r.decade;
        out << r.decade << ',' << rank << ',' << csv_escape(r.diff.axis_id) << ',' << csv_escape(join(r.words_a, ' '))
            << ',' << pole_name(r.diff.pole_a) << ',' << csv_escape(join(r.words_b, ' ')) << ','
            << pole_name(r.diff.pole_b) << ',' << format_real(r.diff.projection_a) << ','
            << format_real(r.diff.projection_b) << ',' << format_real(r.diff.abs_diff) << ','
            << (r.diff.same_pole() ? "yes" : "no") << '\n';
    }
    return out.str();
}

}  // namespace grouprep
