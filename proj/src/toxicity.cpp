#include "grouprep/toxicity.hpp"

#include <algorithm>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "grouprep/error.hpp"
#include "grouprep/io.hpp"

namespace grouprep {

ToxicLexicon parse_lexicon(std::string_view text, std::string_view level, std::string version) {
    const DelimitedTable table = parse_delimited(text);
    const auto lemma_col = table.column("lemma");
    const auto category_col = table.column("category");
    const auto level_col = table.column("level");
    if (!lemma_col) throw Error(Errc::MissingColumn, "lexicon lacks column lemma");
    if (!category_col) throw Error(Errc::MissingColumn, "lexicon lacks column category");
    if (!level_col) throw Error(Errc::MissingColumn, "lexicon lacks column level");

    ToxicLexicon lex;
    lex.level = std::string(level);
    lex.version = std::move(version);
    for (const auto& row : table.rows) {
        if (trim(row[*level_col]) != level) continue;
        const std::string word = to_lower_ascii(trim(row[*lemma_col]));
        if (word.empty()) continue;
        lex.words.insert(word);
        lex.categories[word].insert(std::string(trim(row[*category_col])));
    }
    if (lex.words.empty()) throw Error(Errc::EmptyLexicon, "no lexicon entries at level '" + std::string(level) + "'");
    return lex;
}

ToxicLexicon load_lexicon(const std::filesystem::path& path, std::string_view level) {
    return parse_lexicon(read_file(path), level, path.filename().string());
}

namespace {

struct PoleMeans {
    std::string axis_id;
    Vector left;
    Vector right;
    bool usable = false;
};

PoleMeans pole_means(const SemanticAxis& axis, const EmbeddingSpace& space) {
    PoleMeans pm;
    pm.axis_id = axis.axis_id;
    try {
        pm.left = mean_vector(axis.left_pole, space, kMinPoleWords).mean;
        pm.right = mean_vector(axis.right_pole, space, kMinPoleWords).mean;
    } catch (const Error& e) {
        if (e.code() != Errc::TooFewWords) throw;
        return pm;
    }
    pm.usable = norm(pm.left) > 0.0 && norm(pm.right) > 0.0;
    return pm;
}

std::vector<std::span<const double>> lexicon_vectors(const EmbeddingSpace& space, const ToxicLexicon& lexicon) {
    std::vector<std::span<const double>> out;
    for (const auto& w : lexicon.words) {
        const auto v = space.find(w);
        if (v && norm(*v) > 0.0) out.push_back(*v);
    }
    return out;
}

double affinity(const PoleMeans& pm, const std::vector<std::span<const double>>& words) {
    double total = 0.0;
    for (const auto& w : words) total += std::max(cosine(w, pm.left), cosine(w, pm.right));
    return total / static_cast<double>(words.size());
}

std::vector<AxisAffinity> finish_ranking(std::vector<AxisAffinity> scored) {
    if (scored.empty()) throw Error(Errc::NoUsableAxes, "no axis has three words on both poles");
    std::sort(scored.begin(), scored.end(), [](const AxisAffinity& a, const AxisAffinity& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.axis_id < b.axis_id;
    });
    return scored;
}

}  // namespace

std::vector<AxisAffinity> score_axes_by_toxic_affinity_serial(const EmbeddingSpace& anchor,
                                                              const ToxicLexicon& lexicon,
                                                              const std::vector<SemanticAxis>& axes) {
    const auto words = lexicon_vectors(anchor, lexicon);
    if (words.empty()) throw Error(Errc::NoUsableAxes, "no lexicon word has a vector in the anchor space");
    std::vector<AxisAffinity> scored;
    for (const auto& axis : axes) {
        const PoleMeans pm = pole_means(axis, anchor);
        if (!pm.usable) continue;
        scored.push_back({axis.axis_id, affinity(pm, words)});
    }
    return finish_ranking(std::move(scored));
}

std::vector<AxisAffinity> score_axes_by_toxic_affinity(const EmbeddingSpace& anchor, const ToxicLexicon& lexicon,
                                                       const std::vector<SemanticAxis>& axes, int workers) {
    const auto words = lexicon_vectors(anchor, lexicon);
    if (words.empty()) throw Error(Errc::NoUsableAxes, "no lexicon word has a vector in the anchor space");
    std::vector<AxisAffinity> slots(axes.size());
    std::vector<char> usable(axes.size(), 0);
    const long n = static_cast<long>(axes.size());
#ifdef _OPENMP
    const int threads = workers > 0 ? workers : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 4) num_threads(threads)
#endif
    for (long i = 0; i < n; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        const PoleMeans pm = pole_means(axes[idx], anchor);
        if (!pm.usable) continue;
        slots[idx] = {axes[idx].axis_id, affinity(pm, words)};
        usable[idx] = 1;
    }
    (void)workers;
    std::vector<AxisAffinity> scored;
    for (std::size_t i = 0; i < axes.size(); ++i) {
        if (usable[i]) scored.push_back(std::move(slots[i]));
    }
    return finish_ranking(std::move(scored));
}

std::vector<AxisAffinity> rank_axes_by_toxic_affinity(const EmbeddingSpace& anchor, const ToxicLexicon& lexicon,
                                                      const std::vector<SemanticAxis>& axes, std::size_t top,
                                                      int workers) {
    auto ranked = score_axes_by_toxic_affinity(anchor, lexicon, axes, workers);
    if (ranked.size() > top) ranked.resize(top);
    return ranked;
}

Pole word_side(std::span<const double> word, std::span<const double> axis) {
    return cosine(word, axis) > 0.0 ? Pole::Right : Pole::Left;
}

namespace {

const SemanticAxis& find_axis(const std::vector<SemanticAxis>& axes, const std::string& id) {
    for (const auto& a : axes) {
        if (a.axis_id == id) return a;
    }
    throw Error(Errc::InvalidArgument, "unknown axis " + id);
}

}  // namespace

ToxicityAdjustment build_adjustment(const EmbeddingSpace& anchor, const ToxicLexicon& lexicon,
                                    const std::vector<SemanticAxis>& axes, std::size_t top, int workers) {
    ToxicityAdjustment adj;
    adj.anchor_decade = anchor.decade();
    std::vector<AxisVector> vectors;
    for (const auto& a : rank_axes_by_toxic_affinity(anchor, lexicon, axes, top, workers)) {
        AxisVector av = axis_vector(find_axis(axes, a.axis_id), anchor);
        if (av.zero) {
            adj.warnings.push_back("axis " + a.axis_id + " is a zero vector in the anchor decade; skipped");
            continue;
        }
        adj.top_axes.push_back(a.axis_id);
        vectors.push_back(std::move(av));
    }
    if (adj.top_axes.size() < top) {
        adj.warnings.push_back("only " + std::to_string(adj.top_axes.size()) + " usable axes for the toxicity adjustment");
    }
    for (const auto& w : lexicon.words) {
        const auto v = anchor.find(w);
        if (!v || norm(*v) == 0.0) continue;
        std::vector<Pole> sides;
        sides.reserve(vectors.size());
        for (const auto& av : vectors) sides.push_back(word_side(*v, av.vector));
        adj.reference_sides.emplace(w, std::move(sides));
    }
    return adj;
}

AdjustedLexicon adjust_lexicon(const EmbeddingSpace& decade_space, const ToxicityAdjustment& adjustment,
                               const ToxicLexicon& lexicon, const std::vector<SemanticAxis>& axes) {
    AdjustedLexicon out;
    out.decade = decade_space.decade();
    // Axes that cannot be rebuilt in this decade do not count as flips.
    std::vector<std::optional<AxisVector>> vectors;
    for (const auto& id : adjustment.top_axes) {
        try {
            AxisVector av = axis_vector(find_axis(axes, id), decade_space);
            if (av.zero) {
                vectors.emplace_back();
            } else {
                vectors.emplace_back(std::move(av));
                ++out.axes_used;
            }
        } catch (const Error& e) {
            if (e.code() != Errc::AxisExcluded) throw;
            vectors.emplace_back();
        }
    }
    for (const auto& w : lexicon.words) {
        const auto ref = adjustment.reference_sides.find(w);
        const auto v = decade_space.find(w);
        if (ref == adjustment.reference_sides.end() || !v || norm(*v) == 0.0) {
            out.retained.insert(w);
            continue;
        }
        std::size_t flips = 0;
        for (std::size_t i = 0; i < vectors.size(); ++i) {
            if (vectors[i] && word_side(*v, vectors[i]->vector) != ref->second[i]) ++flips;
        }
        if (majority_flipped(flips, adjustment.top_axes.size())) {
            out.removed.insert(w);
        } else {
            out.retained.insert(w);
        }
    }
    return out;
}

double toxicity_rate(const ContextTable& table, const std::set<std::string, std::less<>>& retained) {
    if (table.empty()) {
        throw Error(Errc::EmptyTable, "table " + std::to_string(table.decade()) + "/" + table.group() + " is empty");
    }
    std::uint64_t toxic = 0;
    if (retained.size() < table.counts().size()) {
        for (const auto& w : retained) toxic += table.count(w);
    } else {
        for (const auto& [w, c] : table.counts()) {
            if (retained.contains(w)) toxic += c;
        }
    }
    return 100.0 * static_cast<double>(toxic) / static_cast<double>(table.total_weight());
}

std::string toxicity_csv(const std::vector<ToxicityRow>& rows) {
    std::ostringstream out;
    out << "decade,group,toxicity_percent,removed_word_count\n";
    for (const auto& r : rows) {
        out << r.decade << ',' << csv_escape(r.group) << ',' << format_real(r.toxicity_percent) << ','
            << r.removed_word_count << '\n';
    }
    return out.str();
}

std::string removed_words_listing(const std::vector<AdjustedLexicon>& adjusted) {
    std::ostringstream out;
    for (const auto& a : adjusted) {
        out << a.decade << '\t';
        bool first = true;
        for (const auto& w : a.removed) {
            if (!first) out << ',';
            out << w;
            first = false;
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace grouprep
