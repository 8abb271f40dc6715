#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "grouprep/context.hpp"
#include "grouprep/embedding.hpp"
#include "grouprep/semaxes.hpp"

namespace grouprep {

struct ToxicLexicon {
    std::set<std::string, std::less<>> words;  // lowercase
    std::map<std::string, std::set<std::string>, std::less<>> categories;
    std::string level;
    std::string version;

    bool contains(std::string_view w) const { return words.contains(w); }
};

// Header with lemma, category, level columns (any order). Keeps rows whose
// level equals `level`, every category. Throws Errc::MissingColumn,
// Errc::EmptyLexicon.
ToxicLexicon parse_lexicon(std::string_view text, std::string_view level, std::string version = {});
ToxicLexicon load_lexicon(const std::filesystem::path& path, std::string_view level);

struct AxisAffinity {
    std::string axis_id;
    double score = 0.0;

    bool operator==(const AxisAffinity&) const = default;
};

inline constexpr std::size_t kToxicAxes = 10;

// Score per usable axis: mean over lexicon words in the space of the larger
// cosine to either pole mean. Descending, ties by axis_id. Throws Errc::NoUsableAxes.
std::vector<AxisAffinity> score_axes_by_toxic_affinity(const EmbeddingSpace& anchor, const ToxicLexicon& lexicon,
                                                       const std::vector<SemanticAxis>& axes, int workers = 0);
// Single-threaded reference for score_axes_by_toxic_affinity.
std::vector<AxisAffinity> score_axes_by_toxic_affinity_serial(const EmbeddingSpace& anchor,
                                                              const ToxicLexicon& lexicon,
                                                              const std::vector<SemanticAxis>& axes);

// First `top` entries of the ranking.
std::vector<AxisAffinity> rank_axes_by_toxic_affinity(const EmbeddingSpace& anchor, const ToxicLexicon& lexicon,
                                                      const std::vector<SemanticAxis>& axes,
                                                      std::size_t top = kToxicAxes, int workers = 0);

// Right when cosine(word, axis) > 0, left otherwise (an exact 0 is left).
Pole word_side(std::span<const double> word, std::span<const double> axis);

struct ToxicityAdjustment {
    int anchor_decade = 1990;
    std::vector<std::string> top_axes;
    // word -> side per top axis (same order); only words present in the anchor space.
    std::map<std::string, std::vector<Pole>, std::less<>> reference_sides;
    std::vector<std::string> warnings;
};

ToxicityAdjustment build_adjustment(const EmbeddingSpace& anchor, const ToxicLexicon& lexicon,
                                    const std::vector<SemanticAxis>& axes, std::size_t top = kToxicAxes,
                                    int workers = 0);

struct AdjustedLexicon {
    int decade = 0;
    std::set<std::string, std::less<>> retained;
    std::set<std::string, std::less<>> removed;
    std::size_t axes_used = 0;
};

// Removes a word when its side differs from the reference on a strict
// majority of the top axes. Words without a vector in the decade (or the
// anchor) are retained.
AdjustedLexicon adjust_lexicon(const EmbeddingSpace& decade_space, const ToxicityAdjustment& adjustment,
                               const ToxicLexicon& lexicon, const std::vector<SemanticAxis>& axes);

// Strict-majority rule on its own: flips * 2 > axes.
constexpr bool majority_flipped(std::size_t flips, std::size_t axes) noexcept { return flips * 2 > axes; }

// 100 * weight of retained words / total weight. Throws Errc::EmptyTable.
double toxicity_rate(const ContextTable& table, const std::set<std::string, std::less<>>& retained);

struct ToxicityRow {
    int decade = 0;
    std::string group;
    double toxicity_percent = 0.0;
    std::size_t removed_word_count = 0;
};

std::string toxicity_csv(const std::vector<ToxicityRow>& rows);
// "decade<TAB>comma-separated removed words" per decade.
std::string removed_words_listing(const std::vector<AdjustedLexicon>& adjusted);

}  // namespace grouprep
