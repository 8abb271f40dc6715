#include "grouprep/diachronic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "grouprep/error.hpp"
#include "grouprep/io.hpp"

namespace grouprep {

double pearson(std::span<const double> u, std::span<const double> v) {
    if (u.size() != v.size()) throw Error(Errc::InvalidArgument, "pearson of vectors with different lengths");
    if (u.size() < 2) throw Error(Errc::InvalidArgument, "pearson needs at least two coordinates");
    const double n = static_cast<double>(u.size());
    const double mu = std::accumulate(u.begin(), u.end(), 0.0) / n;
    const double mv = std::accumulate(v.begin(), v.end(), 0.0) / n;
    double suv = 0.0, suu = 0.0, svv = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double du = u[i] - mu;
        const double dv = v[i] - mv;
        suv += du * dv;
        suu += du * du;
        svv += dv * dv;
    }
    if (suu == 0.0 || svv == 0.0) throw Error(Errc::ConstantInput, "pearson of a constant vector");
    return std::clamp(suv / std::sqrt(suu * svv), -1.0, 1.0);
}

CorrelationMatrix correlation_matrix(const std::string& group, const std::map<int, Vector>& by_decade,
                                     const std::vector<int>& wanted) {
    CorrelationMatrix m;
    m.group = group;
    if (wanted.empty()) {
        for (const auto& [d, v] : by_decade) m.decades.push_back(d);
    } else {
        for (int d : wanted) {
            if (by_decade.contains(d)) {
                m.decades.push_back(d);
            } else {
                m.missing.push_back(d);
            }
        }
    }
    if (m.decades.size() < 2) throw Error(Errc::TooFewDecades, "group " + group + " has fewer than two decades");
    const std::size_t n = m.decades.size();
    m.values.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        m.at(i, i) = 1.0;
        for (std::size_t j = i + 1; j < n; ++j) {
            const double r = pearson(by_decade.at(m.decades[i]), by_decade.at(m.decades[j]));
            m.at(i, j) = r;
            m.at(j, i) = r;
        }
    }
    return m;
}

std::vector<double> transition_samples(const CorrelationMatrix& matrix, std::size_t t) {
    const std::size_t n = matrix.size();
    if (t + 1 >= n) throw Error(Errc::IntervalMissing, "no interval starting at column " + std::to_string(t));
    std::vector<double> out;
    for (std::size_t r = 0; r < n; ++r) {
        if (r == t || r == t + 1) continue;
        out.push_back(std::abs(matrix.at(r, t) - matrix.at(r, t + 1)));
    }
    return out;
}

std::vector<double> pooled_samples(const CorrelationMatrix& matrix, std::size_t exclude) {
    const std::size_t intervals = matrix.size() < 2 ? 0 : matrix.size() - 1;
    if (intervals < 3) throw Error(Errc::TooFewTransitions, "need at least 3 transitions, have " + std::to_string(intervals));
    if (exclude >= intervals) throw Error(Errc::IntervalMissing, "no interval " + std::to_string(exclude));
    std::vector<double> out;
    for (std::size_t t = 0; t < intervals; ++t) {
        if (t == exclude) continue;
        const auto s = transition_samples(matrix, t);
        out.insert(out.end(), s.begin(), s.end());
    }
    return out;
}

double kolmogorov_survival(double lambda) {
    if (!(lambda > 0.0)) return 1.0;
    constexpr double kTermFloor = 1e-12;
    constexpr int kMaxTerms = 1'000'000;
    double sum = 0.0;
    const double a = -2.0 * lambda * lambda;
    for (int j = 1; j <= kMaxTerms; ++j) {
        const double term = std::exp(a * static_cast<double>(j) * static_cast<double>(j));
        sum += (j % 2 == 1) ? term : -term;
        if (term < kTermFloor) break;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw Error(Errc::EmptySample, "KS test needs two non-empty samples");
    std::vector<double> x(a.begin(), a.end());
    std::vector<double> y(b.begin(), b.end());
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    const double m = static_cast<double>(x.size());
    const double n = static_cast<double>(y.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    // Advance past every copy of the next value in both samples before comparing CDFs.
    while (i < x.size() || j < y.size()) {
        double v;
        if (j >= y.size() || (i < x.size() && x[i] <= y[j])) {
            v = x[i];
        } else {
            v = y[j];
        }
        while (i < x.size() && x[i] <= v) ++i;
        while (j < y.size() && y[j] <= v) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / m - static_cast<double>(j) / n));
    }
    KsResult r;
    r.statistic = d;
    r.p_value = kolmogorov_survival(d * std::sqrt(m * n / (m + n)));
    return r;
}

std::vector<TransitionTest> transition_report(const CorrelationMatrix& matrix) {
    const std::size_t intervals = matrix.size() < 2 ? 0 : matrix.size() - 1;
    if (intervals < 3) throw Error(Errc::TooFewTransitions, "need at least 3 transitions, have " + std::to_string(intervals));
    std::vector<TransitionTest> out;
    for (std::size_t t = 0; t < intervals; ++t) {
        const auto inside = transition_samples(matrix, t);
        const auto rest = pooled_samples(matrix, t);
        if (inside.empty() || rest.empty()) {
            throw Error(Errc::IntervalMissing, "interval " + std::to_string(matrix.decades[t]) + " has no samples");
        }
        const KsResult ks = ks_two_sample(inside, rest);
        TransitionTest tt;
        tt.from_decade = matrix.decades[t];
        tt.to_decade = matrix.decades[t + 1];
        tt.statistic = ks.statistic;
        tt.p_value = ks.p_value;
        tt.mean_distance_interval = std::accumulate(inside.begin(), inside.end(), 0.0) / static_cast<double>(inside.size());
        tt.mean_distance_rest = std::accumulate(rest.begin(), rest.end(), 0.0) / static_cast<double>(rest.size());
        out.push_back(tt);
    }
    return out;
}

std::string matrix_csv(const CorrelationMatrix& matrix) {
    std::ostringstream out;
    out << "decade";
    for (int d : matrix.decades) out << ',' << d;
    out << '\n';
    for (std::size_t i = 0; i < matrix.size(); ++i) {
        out << matrix.decades[i];
        for (std::size_t j = 0; j < matrix.size(); ++j) out << ',' << format_real(matrix.at(i, j));
        out << '\n';
    }
    return out.str();
}

std::string transitions_csv(const std::vector<TransitionTest>& tests) {
    std::ostringstream out;
    out << "transition_interval,test_statistic,p_value,mean_distance_interval,mean_distance_rest\n";
    for (const auto& t : tests) {
        char p[32];
        std::snprintf(p, sizeof p, "%.6g", t.p_value);
        out << t.from_decade << '-' << t.to_decade << ',' << format_real(t.statistic, 3) << ',' << p << ','
            << format_real(t.mean_distance_interval, 3) << ',' << format_real(t.mean_distance_rest, 3) << '\n';
    }
    return out.str();
}

std::string matrix_svg(const CorrelationMatrix& matrix) {
    constexpr int kCell = 28;
    constexpr int kMargin = 48;
    const int n = static_cast<int>(matrix.size());
    const int side = kMargin + n * kCell + 8;
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << side << "\" height=\"" << side
        << "\" font-family=\"sans-serif\" font-size=\"9\">\n";
    out << "<text x=\"4\" y=\"12\">" << matrix.group << "</text>\n";
    for (int i = 0; i < n; ++i) {
        out << "<text x=\"2\" y=\"" << kMargin + i * kCell + kCell / 2 + 3 << "\">" << matrix.decades[i] << "</text>\n";
        out << "<text x=\"" << kMargin + i * kCell + 2 << "\" y=\"" << kMargin - 6 << "\">" << matrix.decades[i]
            << "</text>\n";
        for (int j = 0; j < n; ++j) {
            // -1 -> blue, 0 -> white, 1 -> red
            const double v = matrix.at(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
            const int hot = static_cast<int>(std::lround(255.0 * (1.0 - std::max(0.0, v))));
            const int cold = static_cast<int>(std::lround(255.0 * (1.0 - std::max(0.0, -v))));
            const int r = std::min(255, cold);
            const int g = std::min(hot, cold);
            const int b = std::min(255, hot);
            out << "<rect x=\"" << kMargin + j * kCell << "\" y=\"" << kMargin + i * kCell << "\" width=\"" << kCell
                << "\" height=\"" << kCell << "\" fill=\"rgb(" << r << ',' << g << ',' << b << ")\"><title>"
                << format_real(v, 3) << "</title></rect>\n";
        }
    }
    out << "</svg>\n";
    return out.str();
}

}  // namespace grouprep
