#include "grouprep/group_embedding.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "grouprep/error.hpp"
#include "grouprep/io.hpp"
#include "grouprep/rng.hpp"

namespace grouprep {

void TrainerConfig::validate() const {
    if (k == 0) throw Error(Errc::InvalidConfig, "k must be positive");
    if (!(margin > 0.0 && margin < 1.0)) throw Error(Errc::InvalidConfig, "margin must lie in (0, 1)");
    if (!(floor > 0.0)) throw Error(Errc::InvalidConfig, "floor must be positive");
    if (!(learning_rate > 0.0)) throw Error(Errc::InvalidConfig, "learning_rate must be positive");
    if (epochs <= 0) throw Error(Errc::InvalidConfig, "epochs must be positive");
    if (!(init_scale > 0.0)) throw Error(Errc::InvalidConfig, "init_scale must be positive");
}

double positive_weight(double f_self, double f_other, double floor) { return f_self / std::max(f_other, floor); }

double negative_weight(double f_self, double f_other, double floor) { return f_other / std::max(f_self, floor); }

SamplingDistribution SamplingDistribution::from_weights(std::vector<std::string> vocabulary, std::vector<double> weights) {
    if (vocabulary.size() != weights.size()) throw Error(Errc::InvalidArgument, "vocabulary/weights length mismatch");
    double total = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0) || !std::isfinite(w)) throw Error(Errc::DegenerateDistribution, "negative or non-finite weight");
        total += w;
    }
    if (vocabulary.empty() || total <= 0.0) throw Error(Errc::DegenerateDistribution, "all sampling weights are zero");
    SamplingDistribution d;
    d.vocabulary = std::move(vocabulary);
    d.weights = std::move(weights);
    d.probabilities.reserve(d.weights.size());
    d.cumulative.reserve(d.weights.size());
    double running = 0.0;
    for (double w : d.weights) {
        const double p = w / total;
        d.probabilities.push_back(p);
        running += p;
        d.cumulative.push_back(running);
    }
    return d;
}

SamplingDistribution build_distribution(const ContextTable& self, const ContextTable& other, const EmbeddingSpace& space,
                                        SampleRole role, double floor) {
    if (self.empty()) throw Error(Errc::EmptyTable, "self table " + self.group() + " is empty");
    if (other.empty()) throw Error(Errc::EmptyTable, "other table " + other.group() + " is empty");
    const ContextTable& source = role == SampleRole::Positive ? self : other;

    std::vector<std::string> vocab;
    std::size_t excluded = 0;
    double excluded_freq = 0.0;
    for (const auto& [word, count] : source.sorted_counts()) {
        const auto v = space.find(word);
        if (!v || norm(*v) == 0.0) {
            ++excluded;
            excluded_freq += static_cast<double>(count) / static_cast<double>(source.total_weight());
            continue;
        }
        vocab.push_back(word);
    }
    std::vector<double> weights;
    weights.reserve(vocab.size());
    for (const auto& word : vocab) {
        const double f_self = relative_frequency(self, word);
        const double f_other = relative_frequency(other, word);
        weights.push_back(role == SampleRole::Positive ? positive_weight(f_self, f_other, floor)
                                                       : negative_weight(f_self, f_other, floor));
    }
    SamplingDistribution d = SamplingDistribution::from_weights(std::move(vocab), std::move(weights));
    d.excluded_words = excluded;
    d.excluded_frequency = excluded_freq;
    return d;
}

std::vector<std::uint32_t> draw_samples(const SamplingDistribution& dist, std::size_t count, std::uint64_t seed) {
    if (dist.cumulative.empty()) throw Error(Errc::DegenerateDistribution, "empty distribution");
    Rng rng(seed);
    std::vector<std::uint32_t> out;
    out.reserve(count);
    const double total = dist.cumulative.back();
    for (std::size_t i = 0; i < count; ++i) {
        const double u = rng.uniform() * total;
        auto it = std::upper_bound(dist.cumulative.begin(), dist.cumulative.end(), u);
        if (it == dist.cumulative.end()) --it;
        // Skip zero-probability entries that share the boundary value.
        std::size_t idx = static_cast<std::size_t>(it - dist.cumulative.begin());
        while (dist.probabilities[idx] == 0.0 && idx + 1 < dist.probabilities.size()) ++idx;
        out.push_back(static_cast<std::uint32_t>(idx));
    }
    return out;
}

SampleSet draw_sample_set(const SamplingDistribution& positive, const SamplingDistribution& negative,
                          const TrainerConfig& config, std::uint64_t seed) {
    const auto pos = draw_samples(positive, config.k, derive_seed(seed, 1));
    const auto neg = draw_samples(negative, config.k * config.n, derive_seed(seed, 2));

    SampleSet set;
    std::set_union(positive.vocabulary.begin(), positive.vocabulary.end(), negative.vocabulary.begin(),
                   negative.vocabulary.end(), std::back_inserter(set.vocabulary));
    auto remap = [&](const SamplingDistribution& d) {
        std::vector<std::uint32_t> map(d.vocabulary.size());
        for (std::size_t i = 0; i < d.vocabulary.size(); ++i) {
            const auto it = std::lower_bound(set.vocabulary.begin(), set.vocabulary.end(), d.vocabulary[i]);
            map[i] = static_cast<std::uint32_t>(it - set.vocabulary.begin());
        }
        return map;
    };
    const auto pos_map = remap(positive);
    const auto neg_map = remap(negative);
    set.positives.reserve(pos.size());
    for (auto i : pos) set.positives.push_back(pos_map[i]);
    set.negatives.reserve(neg.size());
    for (auto i : neg) set.negatives.push_back(neg_map[i]);
    return set;
}

double ranking_loss(std::span<const double> x, std::span<const double> w, int y, double margin) {
    const double c = cosine(x, w);
    if (y > 0) return 1.0 - c;
    return std::max(0.0, c - margin);
}

Vector loss_gradient(std::span<const double> x, std::span<const double> w, int y, double margin) {
    const double nx = norm(x);
    const double nw = norm(w);
    if (nx == 0.0 || nw == 0.0) throw Error(Errc::ZeroNorm, "gradient at a zero vector");
    const double c = dot(x, w) / (nx * nw);
    Vector g(x.size(), 0.0);
    double sign = 0.0;
    if (y > 0) {
        sign = -1.0;
    } else if (c > margin) {
        sign = 1.0;
    }
    if (sign == 0.0) return g;
    // d cos / dx = w / (|x||w|) - cos * x / |x|^2
    const double a = 1.0 / (nx * nw);
    const double b = c / (nx * nx);
    for (std::size_t i = 0; i < x.size(); ++i) g[i] = sign * (a * w[i] - b * x[i]);
    return g;
}

GroupVector train_group_vector(const SampleSet& samples, const EmbeddingSpace& space, const TrainerConfig& config) {
    config.validate();
    const std::size_t dim = space.dim();
    const std::size_t vocab = samples.vocabulary.size();

    std::vector<double> rows(vocab * dim);
    std::vector<double> row_norm(vocab);
    for (std::size_t i = 0; i < vocab; ++i) {
        const auto v = space.find(samples.vocabulary[i]);
        if (!v) throw Error(Errc::InvalidArgument, "sample word '" + samples.vocabulary[i] + "' has no vector");
        std::copy(v->begin(), v->end(), rows.begin() + static_cast<std::ptrdiff_t>(i * dim));
        row_norm[i] = norm(*v);
        if (row_norm[i] == 0.0) throw Error(Errc::ZeroNorm, "sample word '" + samples.vocabulary[i] + "' is a zero vector");
    }

    // Positive items are stored as the word index, negatives with the top bit set.
    constexpr std::uint32_t kNegBit = 0x80000000u;
    std::vector<std::uint32_t> order;
    order.reserve(samples.size());
    order.insert(order.end(), samples.positives.begin(), samples.positives.end());
    for (auto i : samples.negatives) order.push_back(i | kNegBit);

    Rng init_rng(derive_seed(config.seed, 11));
    Vector x(dim);
    for (double& v : x) v = init_rng.uniform(-1.0, 1.0) * config.init_scale;

    Rng shuffle_rng(derive_seed(config.seed, 12));
    const double lr = config.learning_rate;
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        shuffle_rng.shuffle(order);
        for (const std::uint32_t item : order) {
            const bool negative = (item & kNegBit) != 0;
            const std::size_t idx = item & ~kNegBit;
            const double* w = rows.data() + idx * dim;
            double xw = 0.0;
            double xx = 0.0;
            for (std::size_t j = 0; j < dim; ++j) {
                xw += x[j] * w[j];
                xx += x[j] * x[j];
            }
            const double nx = std::sqrt(xx);
            if (nx == 0.0) throw Error(Errc::NonFiniteLoss, "group vector collapsed to zero");
            const double c = xw / (nx * row_norm[idx]);
            double sign;
            if (!negative) {
                sign = -1.0;
            } else if (c > config.margin) {
                sign = 1.0;
            } else {
                continue;
            }
            const double a = lr * sign / (nx * row_norm[idx]);
            const double b = lr * sign * c / xx;
            for (std::size_t j = 0; j < dim; ++j) x[j] -= a * w[j] - b * x[j];
        }
        for (double v : x) {
            if (!std::isfinite(v)) {
                throw Error(Errc::NonFiniteLoss, "non-finite group vector after epoch " + std::to_string(epoch + 1));
            }
        }
    }

    double loss = 0.0;
    for (const auto i : samples.positives) loss += ranking_loss(x, {rows.data() + i * dim, dim}, +1, config.margin);
    for (const auto i : samples.negatives) loss += ranking_loss(x, {rows.data() + i * dim, dim}, -1, config.margin);
    if (samples.size() > 0) loss /= static_cast<double>(samples.size());
    if (!std::isfinite(loss)) throw Error(Errc::NonFiniteLoss, "final loss is not finite");

    GroupVector out;
    out.decade = space.decade();
    out.vector = std::move(x);
    out.config = config;
    out.final_loss = loss;
    out.seed = config.seed;
    out.positives = samples.positives.size();
    out.negatives = samples.negatives.size();
    return out;
}

namespace {

GroupVector train_one(const SamplingDistribution& pos, const SamplingDistribution& neg, const EmbeddingSpace& space,
                      const TrainerConfig& config, std::uint64_t decade_seed, const std::string& group) {
    const SampleSet samples = draw_sample_set(pos, neg, config, derive_seed(decade_seed, 1));
    TrainerConfig run = config;
    run.seed = derive_seed(decade_seed, 2);
    GroupVector gv = train_group_vector(samples, space, run);
    gv.group = group;
    gv.config.seed = config.seed;
    return gv;
}

}  // namespace

DecadeTraining train_decade(const ContextTable& table_a, const ContextTable& table_b, const EmbeddingSpace& space,
                            const TrainerConfig& config) {
    config.validate();
    const std::uint64_t decade_seed = derive_seed(config.seed, static_cast<std::uint64_t>(space.decade()));
    DecadeTraining out;
    out.positive_a = build_distribution(table_a, table_b, space, SampleRole::Positive, config.floor);
    out.negative_a = build_distribution(table_a, table_b, space, SampleRole::Negative, config.floor);
    out.positive_b = build_distribution(table_b, table_a, space, SampleRole::Positive, config.floor);
    out.negative_b = build_distribution(table_b, table_a, space, SampleRole::Negative, config.floor);
    out.a = train_one(out.positive_a, out.negative_a, space, config, decade_seed, table_a.group());
    out.b = train_one(out.positive_b, out.negative_b, space, config, decade_seed, table_b.group());
    return out;
}

std::vector<DecadeTraining> train_decades_serial(const std::vector<DecadeJob>& jobs, const SpaceLoader& load,
                                                 const TrainerConfig& config) {
    std::vector<DecadeTraining> out;
    out.reserve(jobs.size());
    for (const auto& job : jobs) {
        const EmbeddingSpace space = load(job.decade);
        out.push_back(train_decade(*job.table_a, *job.table_b, space, config));
    }
    return out;
}

std::vector<DecadeTraining> train_decades(const std::vector<DecadeJob>& jobs, const SpaceLoader& load,
                                          const TrainerConfig& config, int workers) {
    std::vector<DecadeTraining> out(jobs.size());
    std::vector<std::string> errors(jobs.size());
    std::vector<Errc> codes(jobs.size(), Errc::InvalidArgument);
    const long n = static_cast<long>(jobs.size());
#ifdef _OPENMP
    const int threads = workers > 0 ? workers : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
#endif
    for (long i = 0; i < n; ++i) {
        const auto& job = jobs[static_cast<std::size_t>(i)];
        try {
            const EmbeddingSpace space = load(job.decade);
            out[static_cast<std::size_t>(i)] = train_decade(*job.table_a, *job.table_b, space, config);
        } catch (const Error& e) {
            codes[static_cast<std::size_t>(i)] = e.code();
            errors[static_cast<std::size_t>(i)] = e.what();
        }
    }
    (void)workers;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        if (!errors[i].empty()) throw Error(codes[i], "decade " + std::to_string(jobs[i].decade) + ": " + errors[i]);
    }
    return out;
}

std::string serialize_group_vectors(const std::vector<GroupVector>& vectors) {
    std::ostringstream out;
    for (const auto& gv : vectors) {
        out << gv.decade << ' ' << gv.group;
        for (double v : gv.vector) out << ' ' << format_exact(v);
        out << '\n';
    }
    return out.str();
}

std::vector<GroupVector> parse_group_vectors(std::string_view text) {
    std::vector<GroupVector> out;
    for (auto line : split(text, '\n')) {
        const auto fields = split_whitespace(line);
        if (fields.empty()) continue;
        if (fields.size() < 3) throw Error(Errc::MalformedLine, "group vector line too short");
        GroupVector gv;
        const auto decade = parse_int(fields[0]);
        if (!decade) throw Error(Errc::MalformedLine, "bad decade in group vector line");
        gv.decade = static_cast<int>(*decade);
        gv.group = std::string(fields[1]);
        for (std::size_t i = 2; i < fields.size(); ++i) {
            const auto v = parse_real(fields[i]);
            if (!v) throw Error(Errc::MalformedLine, "bad value in group vector line");
            gv.vector.push_back(*v);
        }
        if (!out.empty() && out.front().vector.size() != gv.vector.size()) {
            throw Error(Errc::DimensionMismatch, "group vectors differ in dimension");
        }
        out.push_back(std::move(gv));
    }
    return out;
}

}  // namespace grouprep
