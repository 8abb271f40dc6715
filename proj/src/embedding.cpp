#include "grouprep/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "grouprep/error.hpp"
#include "grouprep/io.hpp"

namespace grouprep {

bool EmbeddingSpace::set(std::string_view word, std::span<const double> values) {
    if (values.size() != dim_) {
        throw Error(Errc::DimensionMismatch, "vector for '" + std::string(word) + "' has " +
                                                 std::to_string(values.size()) + " values, expected " +
                                                 std::to_string(dim_));
    }
    if (const auto it = index_.find(word); it != index_.end()) {
        std::copy(values.begin(), values.end(), data_.begin() + static_cast<std::ptrdiff_t>(it->second * dim_));
        return false;
    }
    index_.emplace(std::string(word), words_.size());
    words_.emplace_back(word);
    data_.insert(data_.end(), values.begin(), values.end());
    return true;
}

std::optional<std::span<const double>> EmbeddingSpace::find(std::string_view word) const {
    const auto it = index_.find(word);
    if (it == index_.end()) return std::nullopt;
    return row(it->second);
}

EmbeddingSpace parse_space(std::string_view text, int decade) {
    std::optional<EmbeddingSpace> space;
    std::vector<double> values;
    std::size_t line_no = 0;
    bool header_checked = false;
    for (std::string_view line : split(text, '\n')) {
        ++line_no;
        const auto fields = split_whitespace(line);
        if (fields.empty()) continue;
        if (!header_checked) {
            header_checked = true;
            if (fields.size() == 2 && parse_int(fields[0]) && parse_int(fields[1])) {
                const auto dim = *parse_int(fields[1]);
                if (dim <= 0) throw Error(Errc::DimensionMismatch, "header declares non-positive dimension");
                space.emplace(decade, static_cast<std::size_t>(dim));
                continue;
            }
        }
        if (fields.size() < 2) {
            throw Error(Errc::DimensionMismatch, "line " + std::to_string(line_no) + " has no vector values");
        }
        if (!space) space.emplace(decade, fields.size() - 1);
        values.clear();
        for (std::size_t i = 1; i < fields.size(); ++i) {
            const auto v = parse_real(fields[i]);
            if (!v) throw Error(Errc::DimensionMismatch, "line " + std::to_string(line_no) + " has a non-numeric value");
            values.push_back(*v);
        }
        if (values.size() != space->dim()) {
            throw Error(Errc::DimensionMismatch, "line " + std::to_string(line_no) + " has " +
                                                     std::to_string(values.size()) + " values, expected " +
                                                     std::to_string(space->dim()));
        }
        if (!space->set(fields[0], values)) ++space->duplicate_words;
    }
    if (!space || space->size() == 0) throw Error(Errc::EmptyFile, "no vectors found");
    for (std::size_t i = 0; i < space->size(); ++i) {
        const auto r = space->row(i);
        if (std::all_of(r.begin(), r.end(), [](double x) { return x == 0.0; })) {
            space->zero_vectors.push_back(space->words()[i]);
        }
    }
    return std::move(*space);
}

EmbeddingSpace load_space(const std::filesystem::path& path, int decade) {
    try {
        return parse_space(read_file(path), decade);
    } catch (const Error& e) {
        if (e.code() == Errc::IoError) throw;
        throw Error(e.code(), path.string() + ": " + e.what());
    }
}

std::string serialize_space(const EmbeddingSpace& space) {
    std::ostringstream out;
    out << space.size() << ' ' << space.dim() << '\n';
    for (std::size_t i = 0; i < space.size(); ++i) {
        out << space.words()[i];
        for (double v : space.row(i)) out << ' ' << format_exact(v);
        out << '\n';
    }
    return out.str();
}

double dot(std::span<const double> u, std::span<const double> v) {
    if (u.size() != v.size()) throw Error(Errc::DimensionMismatch, "dot of vectors with different lengths");
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
    return s;
}

double norm(std::span<const double> u) { return std::sqrt(dot(u, u)); }

double cosine(std::span<const double> u, std::span<const double> v) {
    const double nu = norm(u);
    const double nv = norm(v);
    if (nu == 0.0 || nv == 0.0) throw Error(Errc::ZeroNorm, "cosine of a zero vector");
    const double c = dot(u, v) / (nu * nv);
    return std::clamp(c, -1.0, 1.0);
}

MeanVector mean_vector(std::span<const std::string> words, const EmbeddingSpace& space, std::size_t min_present) {
    MeanVector out;
    out.mean.assign(space.dim(), 0.0);
    for (const auto& w : words) {
        const auto v = space.find(w);
        if (!v) continue;
        for (std::size_t i = 0; i < v->size(); ++i) out.mean[i] += (*v)[i];
        out.used.push_back(w);
    }
    if (out.used.size() < min_present || out.used.empty()) {
        throw Error(Errc::TooFewWords, std::to_string(out.used.size()) + " of " + std::to_string(words.size()) +
                                           " words present, need " + std::to_string(std::max<std::size_t>(min_present, 1)));
    }
    const double n = static_cast<double>(out.used.size());
    for (double& x : out.mean) x /= n;
    return out;
}

}  // namespace grouprep
