// Acceptance checks: one PASS/FAIL line per criterion, exit status 1 if
// any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "../unit/helpers.hpp"
#include "grouprep/io.hpp"
#include "grouprep/pipeline.hpp"
#include "grouprep/rng.hpp"

using namespace grouprep;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            if (!detail.empty()) detail += "; ";
            detail += what;
        }
    }
};

int failures = 0;

void report(const char* id, const char* title, const std::function<Outcome()>& body, double budget_s = 0.0) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o.pass = false;
        o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    if (budget_s > 0.0 && secs >= budget_s) {
        o.require(false, "runtime " + format_real(secs, 2) + " s over the " + format_real(budget_s, 0) + " s budget");
    }
    if (!o.pass) ++failures;
    std::printf("%s %-3s %-34s %7.2fs  %s\n", o.pass ? "PASS" : "FAIL", id, title, secs, o.detail.c_str());
    std::fflush(stdout);
}

Vector random_vec(Rng& rng, std::size_t d) {
    Vector v(d);
    for (auto& x : v) x = rng.normal();
    return v;
}

RunLog quiet_log() {
    RunLog log;
    log.quiet = true;
    return log;
}

// ---- 1 ---------------------------------------------------------------------

Outcome sampler_oracle() {
    Outcome o;
    PlantSpec spec;
    spec.dim = 20;
    const auto space = gen_space(spec, 0);
    Rng rng(101);
    double worst = 0.0;
    for (int fixture = 0; fixture < 20; ++fixture) {
        ContextTable a(1970, "A"), b(1970, "B");
        for (int i = 0; i < 40; ++i) a.add(space.words()[rng.below(space.size())], 1 + rng.below(60));
        for (int i = 0; i < 40; ++i) b.add(space.words()[rng.below(space.size())], 1 + rng.below(60));
        for (auto role : {SampleRole::Positive, SampleRole::Negative}) {
            const auto d = build_distribution(a, b, space, role, 1e-5);
            const auto oracle = oracle_distribution(a, b, space, role, 1e-5);
            o.require(d.vocabulary.size() == oracle.size(), "vocabulary size differs");
            for (std::size_t i = 0; i < d.vocabulary.size(); ++i)
                worst = std::max(worst, std::abs(d.probabilities[i] - oracle.at(d.vocabulary[i])));
        }
    }
    o.require(worst <= 1e-12, "max |p - oracle| = " + std::to_string(worst));

    // E[L1] of N draws is about sqrt(2 / (pi N)) * sum sqrt(p (1 - p)), so the
    // 0.01 bound at 100k draws is only meaningful for supports of ~15 words
    // or fewer. The draw check uses a ten-word table.
    ContextTable a(1970, "A"), b(1970, "B");
    for (std::size_t i = 0; i < 10; ++i) a.add(space.words()[i], 1 + rng.below(60));
    for (std::size_t i = 5; i < 15; ++i) b.add(space.words()[i], 1 + rng.below(60));
    const auto d = build_distribution(a, b, space, SampleRole::Positive, 1e-5);
    // A single 100k run exceeds 0.01 about 0.5% of the time, so the bound is
    // applied to the mean over a fixed block of seeds.
    const std::size_t draws = 100'000;
    const int runs = 20;
    double mean_l1 = 0.0, worst_l1 = 0.0, expected = 0.0;
    for (int run = 0; run < runs; ++run) {
        std::vector<double> freq(d.vocabulary.size(), 0.0);
        for (auto i : draw_samples(d, draws, derive_seed(202, static_cast<std::uint64_t>(run))))
            freq[i] += 1.0 / static_cast<double>(draws);
        double l1 = 0.0;
        for (std::size_t i = 0; i < freq.size(); ++i) l1 += std::abs(freq[i] - d.probabilities[i]);
        mean_l1 += l1 / runs;
        worst_l1 = std::max(worst_l1, l1);
    }
    for (double p : d.probabilities) expected += std::sqrt(p * (1 - p));
    expected *= std::sqrt(2.0 / (M_PI * static_cast<double>(draws)));
    o.require(mean_l1 < 0.01, "mean L1 = " + std::to_string(mean_l1));
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "max|p-oracle|=%.2e (<=1e-12), L1(100k draws, %zu words) mean of %d=%.4f (<0.01, expected %.4f, "
                  "worst run %.4f)",
                  worst, d.vocabulary.size(), runs, mean_l1, expected, worst_l1);
    if (o.pass) o.detail = buf;
    return o;
}

// ---- 2 ---------------------------------------------------------------------

Outcome gradient_check() {
    Outcome o;
    Rng rng(303);
    const double m = 0.5, h = 1e-6;
    double worst = 0.0;
    int counted[2] = {0, 0};
    int active_neg = 0;
    for (int branch = 0; branch < 2; ++branch) {
        const int y = branch == 0 ? +1 : -1;
        while (counted[branch] < 100) {
            const auto x = random_vec(rng, 10);
            auto w = random_vec(rng, 10);
            // Half of the negative points are pulled towards x so the hinge is active.
            if (y < 0 && counted[branch] % 2 == 1)
                for (std::size_t i = 0; i < w.size(); ++i) w[i] += 2.0 * x[i];
            const double c = cosine(x, w);
            if (std::abs(c - m) < 1e-3) continue;
            if (y < 0 && c > m) ++active_neg;
            const auto g = loss_gradient(x, w, y, m);
            double diff = 0.0, ref = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) {
                Vector xp = x, xm = x;
                xp[i] += h;
                xm[i] -= h;
                const double fd = (ranking_loss(xp, w, y, m) - ranking_loss(xm, w, y, m)) / (2 * h);
                diff += (g[i] - fd) * (g[i] - fd);
                ref += fd * fd;
            }
            const double err = ref > 0.0 ? std::sqrt(diff / ref) : std::sqrt(diff);
            worst = std::max(worst, err);
            ++counted[branch];
        }
    }
    o.require(worst < 1e-4, "max rel err " + std::to_string(worst));
    o.require(active_neg > 0, "no active negative points");
    char buf[160];
    std::snprintf(buf, sizeof buf, "max rel err=%.2e (<1e-4) over 100+100 points, %d active hinge", worst, active_neg);
    if (o.pass) o.detail = buf;
    return o;
}

// ---- 3 ---------------------------------------------------------------------

Outcome training_fixed_points() {
    Outcome o;
    Rng rng(404);
    double min_pos = 1.0, max_neg = -1.0;
    // Embedding dimensions of the synthetic and the released spaces. Below
    // about ten dimensions the first step inflates |x| so much that 500
    // steps at learning rate 0.1 no longer suffice.
    const std::size_t dims[] = {20, 50, 100, 300};
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t dim = dims[trial % 4];
        EmbeddingSpace space(1900, dim);
        space.set("w", random_vec(rng, dim));
        TrainerConfig cfg;
        cfg.seed = 1000 + static_cast<std::uint64_t>(trial);
        cfg.epochs = 1;

        SampleSet pos;
        pos.vocabulary = {"w"};
        pos.positives.assign(500, 0);  // exactly 500 SGD steps
        min_pos = std::min(min_pos, cosine(train_group_vector(pos, space, cfg).vector, *space.find("w")));

        SampleSet neg;
        neg.vocabulary = {"w"};
        neg.negatives.assign(500, 0);
        cfg.epochs = 5;
        max_neg = std::max(max_neg, cosine(train_group_vector(neg, space, cfg).vector, *space.find("w")));
    }
    o.require(min_pos > 0.99, "positive-only cos " + std::to_string(min_pos));
    o.require(max_neg <= 0.51, "negative-only cos " + std::to_string(max_neg));
    char buf[160];
    std::snprintf(buf, sizeof buf, "dims 20-300: min cos after 500 positive steps=%.5f (>0.99), max negative-only cos=%.4f (<=0.51)",
                  min_pos, max_neg);
    if (o.pass) o.detail = buf;
    return o;
}

// ---- 4 ---------------------------------------------------------------------

struct PlantedRun {
    PlantSpec spec;
    AxesOutcome axes;
    ToxicityOutcome toxicity;
    CorrOutcome corr;
};

PlantedRun run_planted(const PlantSpec& spec, const fs::path& dir) {
    PlantedRun r;
    r.spec = spec;
    const auto bundle = cmd_synth(spec, dir / "bundle");
    auto config = load_config(bundle.config);
    config.output = dir / "out";
    auto log = quiet_log();
    cmd_scan(config, log);
    cmd_train(config, log);
    r.axes = analyze_axes(config, log);
    r.toxicity = analyze_toxicity(config, log);
    r.corr = analyze_corr(config, log);
    return r;
}

PlantSpec criterion4_spec() {
    PlantSpec spec;  // dim 50, bias 0.8/0.2, 10k 5-grams per group and decade, 3 decades
    spec.dim = 50;
    spec.bias_a = 0.8;
    spec.bias_b = 0.2;
    spec.ngrams_per_group_per_decade = 10'000;
    spec.decades = {1970, 1980, 1990};
    spec.toxic_multiplier_a = 4.0;
    spec.break_after = 1;  // break between the second and third decade
    return spec;
}

PlantedRun planted;  // shared by 4a/4b/4c

Outcome planted_axis() {
    Outcome o;
    const auto& spec = planted.spec;
    std::string detail;
    for (const auto& d : planted.axes.decades) {
        const auto top = top_axes(d, 1);
        if (top.empty()) {
            o.require(false, std::to_string(d.decade) + ": no rows");
            continue;
        }
        const auto& row = top[0].diff;
        const std::string dec = std::to_string(d.decade);
        o.require(row.axis_id == spec.planted_axis, dec + ": top axis " + row.axis_id);
        o.require(row.pole_a == Pole::Right, dec + ": group A not on the right pole");
        o.require(row.pole_b == Pole::Left, dec + ": group B not on the left pole");
        o.require(row.abs_diff >= 0.2, dec + ": abs_diff " + std::to_string(row.abs_diff));
        detail += (detail.empty() ? "" : ", ") + dec + " diff=" + format_real(row.abs_diff, 3);
    }
    o.require(planted.axes.decades.size() == spec.decades.size(), "missing decades");
    if (o.pass) o.detail = "top-1 " + spec.planted_axis + " A=right B=left; " + detail + " (>=0.2)";
    return o;
}

Outcome planted_toxicity() {
    Outcome o;
    const auto& spec = planted.spec;
    std::map<int, std::map<std::string, double>> rate;
    for (const auto& r : planted.toxicity.rows) rate[r.decade][r.group] = r.toxicity_percent;
    std::string detail;
    for (int d : spec.decades) {
        const double a = rate[d][spec.group_a], b = rate[d][spec.group_b];
        const double ratio = b > 0.0 ? a / b : 0.0;
        o.require(ratio >= 2.0, std::to_string(d) + ": ratio " + std::to_string(ratio));
        detail += (detail.empty() ? "" : ", ") + std::to_string(d) + " " + format_real(a, 2) + "%/" +
                  format_real(b, 2) + "%=" + format_real(ratio, 2) + "x";
    }
    if (o.pass) o.detail = detail + " (>=2x)";
    return o;
}

// KS D of every interval computed on whatever samples exist, without the
// three-interval minimum of the transition report.
std::vector<double> raw_interval_d(const CorrelationMatrix& m) {
    std::vector<double> out;
    for (std::size_t t = 0; t + 1 < m.size(); ++t) {
        const auto inside = transition_samples(m, t);
        std::vector<double> rest;
        for (std::size_t u = 0; u + 1 < m.size(); ++u) {
            if (u == t) continue;
            const auto s = transition_samples(m, u);
            rest.insert(rest.end(), s.begin(), s.end());
        }
        out.push_back(inside.empty() || rest.empty() ? NAN : ks_two_sample(inside, rest).statistic);
    }
    return out;
}

Outcome planted_break() {
    Outcome o;
    const auto& spec = planted.spec;
    for (const auto& m : planted.corr.matrices) {
        const auto it = planted.corr.transitions.find(m.group);
        if (it == planted.corr.transitions.end()) {
            const auto d = raw_interval_d(m);
            std::string ds;
            for (double x : d) ds += (ds.empty() ? "" : "/") + format_real(x, 2);
            o.require(false, m.group + ": " + std::to_string(m.size()) + " decades give " +
                                 std::to_string(m.size() - 1) + " intervals of " + std::to_string(m.size() - 2) +
                                 " sample each; the transition test needs >=3 intervals (raw 1-vs-1 D " + ds +
                                 ", no unique maximum)");
            continue;
        }
        const auto& tests = it->second;
        const auto best = std::max_element(tests.begin(), tests.end(),
                                           [](const auto& a, const auto& b) { return a.statistic < b.statistic; });
        o.require(best->from_decade == spec.decades[1] && best->to_decade == spec.decades[2],
                  m.group + ": max D at " + std::to_string(best->from_decade));
    }
    return o;
}

// Same planted break with six decades, so that the transition test is defined.
Outcome planted_break_six_decades(const fs::path& dir) {
    Outcome o;
    PlantSpec spec = criterion4_spec();
    spec.decades = {1940, 1950, 1960, 1970, 1980, 1990};
    spec.break_after = 1;
    const auto run = run_planted(spec, dir);
    std::string detail;
    for (const auto& [group, tests] : run.corr.transitions) {
        const auto best = std::max_element(tests.begin(), tests.end(),
                                           [](const auto& a, const auto& b) { return a.statistic < b.statistic; });
        const bool unique = std::count_if(tests.begin(), tests.end(), [&](const auto& t) {
                                return t.statistic == best->statistic;
                            }) == 1;
        o.require(best->from_decade == 1950 && best->to_decade == 1960,
                  group + ": max D at " + std::to_string(best->from_decade));
        detail += (detail.empty() ? "" : ", ") + group + " 1950-1960 D=" + format_real(best->statistic, 3) +
                  (unique ? "" : " (tied)");
    }
    o.require(run.corr.transitions.size() == 2, "transition reports missing");
    o.detail = detail + (o.pass ? "" : "; " + o.detail);
    return o;
}

// ---- 5 ---------------------------------------------------------------------

// Direct evaluation of the truncated series with a fixed, generous number
// of terms in extended precision.
double kolmogorov_direct(double lambda) {
    if (lambda <= 0.0) return 1.0;
    long double sum = 0.0L;
    for (int j = 1; j <= 2000; ++j) {
        const long double term = std::exp(-2.0L * j * j * static_cast<long double>(lambda) * lambda);
        if (term < 1e-12L) break;
        sum += (j % 2 ? term : -term);
    }
    return std::clamp(static_cast<double>(2.0L * sum), 0.0, 1.0);
}

double brute_force_d(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> pts = a;
    pts.insert(pts.end(), b.begin(), b.end());
    double d = 0.0;
    for (double x : pts) {
        double fa = 0.0, fb = 0.0;
        for (double v : a) fa += v <= x;
        for (double v : b) fb += v <= x;
        d = std::max(d, std::abs(fa / static_cast<double>(a.size()) - fb / static_cast<double>(b.size())));
    }
    return d;
}

Outcome ks_correctness() {
    Outcome o;
    Rng rng(505);
    double worst_p = 0.0;
    int exact = 0;
    for (int pair = 0; pair < 50; ++pair) {
        std::vector<double> a(2 + rng.below(40)), b(2 + rng.below(40));
        for (auto& x : a) x = pair % 3 == 0 ? static_cast<double>(rng.below(6)) : rng.normal();
        for (auto& x : b) x = pair % 3 == 0 ? static_cast<double>(rng.below(6)) : rng.normal() + 0.3;
        const auto r = ks_two_sample(a, b);
        exact += r.statistic == brute_force_d(a, b);
        const double m = static_cast<double>(a.size()), n = static_cast<double>(b.size());
        worst_p = std::max(worst_p, std::abs(r.p_value - kolmogorov_direct(r.statistic * std::sqrt(m * n / (m + n)))));
    }
    o.require(exact == 50, std::to_string(exact) + "/50 statistics exact");
    o.require(worst_p <= 1e-9, "max p error " + std::to_string(worst_p));
    const auto d1 = ks_two_sample(Vector{0, 0, 0}, Vector{1, 1, 1});
    const auto d0 = ks_two_sample(Vector{0.2, 0.5, 0.1}, Vector{0.2, 0.5, 0.1});
    const auto dq = ks_two_sample(Vector{1, 2, 3, 4}, Vector{1.5, 2.5, 3.5, 4.5});
    o.require(d1.statistic == 1.0, "D=1 example");
    o.require(d0.statistic == 0.0 && d0.p_value == 1.0, "D=0 example");
    o.require(dq.statistic == 0.25, "D=0.25 example");
    char buf[160];
    std::snprintf(buf, sizeof buf, "50/50 exact D, max |p - series|=%.1e (<=1e-9), examples 1/0/0.25 exact", worst_p);
    if (o.pass) o.detail = buf;
    return o;
}

// ---- 6 ---------------------------------------------------------------------

Outcome pearson_matrix() {
    Outcome o;
    const double r1 = pearson(Vector{1, 2, 3}, Vector{2, 4, 6});
    const double r2 = pearson(Vector{1, 2, 3}, Vector{3, 2, 1});
    const double r3 = pearson(Vector{1, 2, 3, 4}, Vector{1, 3, 2, 4});
    o.require(std::abs(r1 - 1.0) <= 1e-12, "1.0 case");
    o.require(std::abs(r2 + 1.0) <= 1e-12, "-1.0 case");
    o.require(std::abs(r3 - 0.8) <= 1e-12, "0.8 case");
    Rng rng(606);
    for (int trial = 0; trial < 20; ++trial) {
        std::map<int, Vector> v;
        for (int d = 1850; d <= 1990; d += 10) v[d] = random_vec(rng, 300);
        const auto m = correlation_matrix("G", v);
        for (std::size_t i = 0; i < m.size(); ++i) {
            o.require(m.at(i, i) == 1.0, "diagonal not 1");
            for (std::size_t j = 0; j < m.size(); ++j) o.require(m.at(i, j) == m.at(j, i), "asymmetric");
        }
        if (!o.pass) break;
    }
    if (o.pass) o.detail = "hand cases within 1e-12; 20 random 15x15 matrices symmetric, unit diagonal";
    return o;
}

// ---- 7 ---------------------------------------------------------------------

Outcome appendix_construction() {
    Outcome o;
    CorrelationMatrix m;
    m.group = "G";
    m.decades = {1900, 1910, 1920, 1930};
    m.values.assign(16, 0.0);
    for (std::size_t i = 0; i < 4; ++i) m.at(i, i) = 1.0;
    const double col_t[] = {0.5, 1.0, 0.7, 0.6};
    const double col_u[] = {0.4, 0.8, 1.0, 0.9};
    for (std::size_t r = 0; r < 4; ++r) {
        m.at(r, 1) = col_t[r];
        m.at(r, 2) = col_u[r];
    }
    const auto s = transition_samples(m, 1);
    // 0.1 and 0.3 are not representable; the values must equal the exact
    // double differences |0.5 - 0.4| and |0.6 - 0.9|.
    o.require(s.size() == 2, "sample count " + std::to_string(s.size()));
    if (s.size() == 2) {
        o.require(s[0] == std::abs(0.5 - 0.4) && std::abs(s[0] - 0.1) < 1e-15, "first sample");
        o.require(s[1] == std::abs(0.6 - 0.9) && std::abs(s[1] - 0.3) < 1e-15, "second sample");
    }
    for (std::size_t t = 0; t < 3; ++t) {
        const auto pooled = pooled_samples(m, t);
        o.require(pooled.size() + transition_samples(m, t).size() == 3 * 2, "pooled size for interval " + std::to_string(t));
    }
    if (o.pass) o.detail = "[0.1, 0.3] within 1e-15; pooled + interval sizes = 6 for each of 3 intervals";
    return o;
}

// ---- 8 ---------------------------------------------------------------------

Outcome rule_fidelity(const fs::path& dir) {
    Outcome o;
    // Axis exclusion boundary.
    EmbeddingSpace s(1900, 2);
    for (const char* w : {"l1", "l2", "l3", "r1", "r2", "r3"}) s.set(w, Vector{w[0] == 'l' ? -1.0 : 1.0, 0.5});
    const SemanticAxis three{"three", {"l1", "l2", "l3"}, {"r1", "r2", "r3", "gone"}};
    const SemanticAxis two{"two", {"l1", "l2", "gone"}, {"r1", "r2", "r3"}};
    o.require(!axis_vector(three, s).zero, "three present words rejected");
    bool excluded = false;
    try {
        axis_vector(two, s);
    } catch (const Error& e) {
        excluded = e.code() == Errc::AxisExcluded;
    }
    o.require(excluded, "two present words accepted");

    // Strict majority with ten axes.
    EmbeddingSpace ten(1950, 10);
    std::vector<SemanticAxis> axes;
    ToxicityAdjustment adj;
    for (std::size_t i = 0; i < 10; ++i) {
        SemanticAxis a{"ax" + std::to_string(i), {}, {}};
        for (int j = 0; j < 3; ++j) {
            Vector l(10, 0.0), r(10, 0.0);
            l[i] = -1.0;
            r[i] = 1.0;
            a.left_pole.push_back("l" + std::to_string(i) + std::to_string(j));
            a.right_pole.push_back("r" + std::to_string(i) + std::to_string(j));
            ten.set(a.left_pole.back(), l);
            ten.set(a.right_pole.back(), r);
        }
        adj.top_axes.push_back(a.axis_id);
        axes.push_back(a);
    }
    ToxicLexicon lex;
    for (int flips : {5, 6}) {
        Vector v(10, 1.0);
        for (int i = 0; i < flips; ++i) v[static_cast<std::size_t>(i)] = -1.0;
        const std::string w = "flip" + std::to_string(flips);
        ten.set(w, v);
        lex.words.insert(w);
        adj.reference_sides[w] = std::vector<Pole>(10, Pole::Right);
    }
    const auto out = adjust_lexicon(ten, adj, lex, axes);
    o.require(out.removed.contains("flip6"), "6/10 retained");
    o.require(out.retained.contains("flip5"), "5/10 removed");

    // Anchor decade against itself, on the planted bundle.
    PlantSpec spec;
    spec.ngrams_per_group_per_decade = 100;
    const auto bundle = cmd_synth(spec, dir / "rules");
    const auto anchor = load_space(bundle.vectors.at(spec.decades.back()), spec.decades.back());
    const auto alex = load_lexicon(bundle.lexicon, "conservative");
    const auto aaxes = load_axes(bundle.axes);
    const auto aadj = build_adjustment(anchor, alex, aaxes, 10, 1);
    const auto self = adjust_lexicon(anchor, aadj, alex, aaxes);
    o.require(self.removed.empty(), std::to_string(self.removed.size()) + " words removed at the anchor");
    if (o.pass) o.detail = "3 pole words kept, 2 excluded; 6/10 removed, 5/10 retained; anchor removes 0";
    return o;
}

// ---- 9 ---------------------------------------------------------------------

std::map<fs::path, std::string> csv_files(const fs::path& root) {
    std::map<fs::path, std::string> out;
    for (auto it = fs::recursive_directory_iterator(root); it != fs::recursive_directory_iterator(); ++it) {
        if (it->is_regular_file() && it->path().extension() == ".csv")
            out[fs::relative(it->path(), root)] = read_file(it->path());
    }
    return out;
}

Outcome determinism(const fs::path& dir) {
    Outcome o;
    auto log = quiet_log();
    auto fixture = load_config(testing::testdata() / "fixture" / "config.json");
    std::map<fs::path, std::string> runs[2];
    for (int i = 0; i < 2; ++i) {
        fixture.output = dir / ("fixture" + std::to_string(i));
        cmd_scan(fixture, log);
        runs[i] = csv_files(fixture.output);
    }
    o.require(!runs[0].empty() && runs[0] == runs[1], "fixture scan outputs differ");

    PlantSpec spec;
    spec.ngrams_per_group_per_decade = 2000;
    spec.train_k = 5000;
    const auto bundle = cmd_synth(spec, dir / "bundle");
    auto config = load_config(bundle.config);
    std::map<fs::path, std::string> full[2];
    for (int i = 0; i < 2; ++i) {
        config.output = dir / ("full" + std::to_string(i));
        cmd_report(config, log);
        full[i] = csv_files(config.output);
    }
    o.require(full[0].size() >= 8 && full[0] == full[1], "pipeline outputs differ");
    if (o.pass)
        o.detail = std::to_string(runs[0].size()) + " fixture CSVs and " + std::to_string(full[0].size()) +
                   " full-pipeline CSVs byte-identical across two runs";
    return o;
}

}  // namespace

int main() {
    testing::TempDir dir;
    report("1", "sampler oracle", sampler_oracle, 10.0);
    report("2", "gradient correctness", gradient_check, 5.0);
    report("3", "training fixed points", training_fixed_points, 5.0);

    const auto t0 = Clock::now();
    bool planted_ok = true;
    try {
        planted = run_planted(criterion4_spec(), dir / "planted");
    } catch (const std::exception& e) {
        planted_ok = false;
        std::printf("FAIL 4   planted pipeline run failed: %s\n", e.what());
        ++failures;
    }
    const double planted_secs = std::chrono::duration<double>(Clock::now() - t0).count();
    if (planted_ok) {
        report("4a", "planted axis recovered", planted_axis);
        report("4b", "planted toxicity ratio", planted_toxicity);
        report("4c", "planted break at max KS D", planted_break);
        const double total = std::chrono::duration<double>(Clock::now() - t0).count();
        report("4t", "planted pipeline runtime", [&] {
            Outcome o;
            o.require(total < 60.0, "over 60 s");
            o.detail = "synth+scan+train+analyze " + format_real(planted_secs, 2) + " s (<60 s)";
            return o;
        });
    }
    // Not a criterion line: the transition test on a longer planted series.
    {
        const auto t1 = Clock::now();
        Outcome o;
        try {
            o = planted_break_six_decades(dir / "six");
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = e.what();
        }
        std::printf("INFO 4c* %-33s %7.2fs  %s %s\n", "six-decade planted break",
                    std::chrono::duration<double>(Clock::now() - t1).count(), o.pass ? "max D at break:" : "not found:",
                    o.detail.c_str());
    }

    report("5", "KS correctness", ks_correctness);
    report("6", "Pearson and matrix", pearson_matrix);
    report("7", "transition sample construction", appendix_construction);
    report("8", "rule fidelity", [&] { return rule_fidelity(dir.path()); });
    report("9", "determinism", [&] { return determinism(dir / "det"); });
    std::printf("SKIP 10  full-scale reproduction        (manual runbook in README, needs the full corpus)\n");

    std::printf("%s: %d criterion line(s) failed\n", failures ? "FAILED" : "OK", failures);
    return failures ? 1 : 0;
}
