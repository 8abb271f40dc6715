#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "grouprep/embedding.hpp"

namespace grouprep {

inline constexpr std::size_t kMinPoleWords = 3;

struct SemanticAxis {
    std::string axis_id;
    std::vector<std::string> left_pole;
    std::vector<std::string> right_pole;
};

// "axis_id<TAB>left,words<TAB>right,words" per line; '#' starts a comment.
// Throws Errc::DuplicateAxis, Errc::EmptyPole, Errc::OverlappingPoles.
std::vector<SemanticAxis> parse_axes(std::string_view text);
std::vector<SemanticAxis> load_axes(const std::filesystem::path& path);
std::string serialize_axes(const std::vector<SemanticAxis>& axes);

enum class Pole { Left, Right };
std::string_view pole_name(Pole pole);

struct AxisVector {
    std::string axis_id;
    int decade = 0;
    Vector vector;  // mean(right) - mean(left)
    std::vector<std::string> used_left;
    std::vector<std::string> used_right;
    bool zero = false;  // poles cancel exactly; excluded from ranking
};

// Throws Errc::AxisExcluded when either pole has fewer than kMinPoleWords
// words in the space.
AxisVector axis_vector(const SemanticAxis& axis, const EmbeddingSpace& space);

// Cosine of the group vector with the axis; positive means nearer the right pole.
double project(std::span<const double> group_vector, const AxisVector& axis);

struct AxisDifference {
    std::string axis_id;
    double projection_a = 0.0;
    double projection_b = 0.0;
    double abs_diff = 0.0;
    Pole pole_a = Pole::Left;
    Pole pole_b = Pole::Left;

    bool same_pole() const noexcept { return pole_a == pole_b; }
};

AxisDifference axis_difference(std::span<const double> group_a, std::span<const double> group_b, const AxisVector& axis);

struct AxisReportRow {
    int decade = 0;
    AxisDifference diff;
    std::vector<std::string> words_a;  // up to 3 nearest words of A's nearer pole
    std::vector<std::string> words_b;
};

struct DecadeAxisResults {
    int decade = 0;
    std::vector<AxisReportRow> rows;
    std::vector<std::string> excluded;  // axes below the pole-word minimum
    std::vector<std::string> zero_axes;
};

// Pole words of `pole` ranked by cosine to the group vector, ties by word.
std::vector<std::string> representative_words(const AxisVector& axis, Pole pole, std::span<const double> group_vector,
                                              const EmbeddingSpace& space, std::size_t count = 3);

DecadeAxisResults compare_axes(const std::vector<SemanticAxis>& axes, const EmbeddingSpace& space,
                               std::span<const double> group_a, std::span<const double> group_b);

// Sorted by abs_diff descending, then axis_id ascending; at most top_k rows.
std::vector<AxisReportRow> top_axes(const DecadeAxisResults& results, std::size_t top_k);

// decade,rank,axis_id,group_a_words,group_a_pole,group_b_words,group_b_pole,
// projection_a,projection_b,abs_diff,same_pole
std::string axes_report_csv(const std::vector<AxisReportRow>& rows);

}  // namespace grouprep
