#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "grouprep/embedding.hpp"

namespace grouprep {

// Sample Pearson coefficient. Throws Errc::ConstantInput, Errc::InvalidArgument.
double pearson(std::span<const double> u, std::span<const double> v);

// Row-major square matrix over `decades`.
struct CorrelationMatrix {
    std::string group;
    std::vector<int> decades;
    std::vector<double> values;
    std::vector<int> missing;  // requested decades without a vector

    std::size_t size() const noexcept { return decades.size(); }
    double at(std::size_t row, std::size_t col) const { return values[row * decades.size() + col]; }
    double& at(std::size_t row, std::size_t col) { return values[row * decades.size() + col]; }
};

// Pearson between every pair of decade vectors; the diagonal is exactly 1.
// Decades listed in `wanted` but absent from `by_decade` are recorded as
// missing. Throws Errc::TooFewDecades when fewer than two remain.
CorrelationMatrix correlation_matrix(const std::string& group, const std::map<int, Vector>& by_decade,
                                     const std::vector<int>& wanted = {});

// For columns t and t+1: |M[r][t] - M[r][t+1]| over rows r other than t and
// t+1 (the self-correlation positions); empty for a 2-decade matrix.
// Throws Errc::IntervalMissing when column t+1 does not exist.
std::vector<double> transition_samples(const CorrelationMatrix& matrix, std::size_t t);

// Concatenated transition samples of every interval except `exclude`.
// Throws Errc::TooFewTransitions when the matrix has fewer than 3 intervals.
std::vector<double> pooled_samples(const CorrelationMatrix& matrix, std::size_t exclude);

struct KsResult {
    double statistic = 0.0;
    double p_value = 1.0;
};

// Two-sided asymptotic Kolmogorov survival function
// Q(lambda) = 2 * sum_{j>=1} (-1)^(j-1) exp(-2 j^2 lambda^2), summed until a
// term drops below 1e-12 and clamped to [0, 1]; Q(0) = 1.
double kolmogorov_survival(double lambda);

// D = sup |F_a - F_b|; p = Q(D * sqrt(m n / (m + n))). Throws Errc::EmptySample.
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

struct TransitionTest {
    int from_decade = 0;
    int to_decade = 0;
    double statistic = 0.0;
    double p_value = 1.0;
    double mean_distance_interval = 0.0;
    double mean_distance_rest = 0.0;
};

std::vector<TransitionTest> transition_report(const CorrelationMatrix& matrix);

std::string matrix_csv(const CorrelationMatrix& matrix);
std::string transitions_csv(const std::vector<TransitionTest>& tests);
std::string matrix_svg(const CorrelationMatrix& matrix);

}  // namespace grouprep
