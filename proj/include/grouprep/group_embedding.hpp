#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "grouprep/context.hpp"
#include "grouprep/embedding.hpp"

namespace grouprep {

struct TrainerConfig {
    std::uint64_t k = 500'000;  // positive samples
    std::uint64_t n = 4;        // negatives per positive
    double margin = 0.5;
    double floor = 1e-5;  // lower bound on the denominator frequency
    double learning_rate = 0.1;
    int epochs = 5;
    double init_scale = 0.01;
    std::uint64_t seed = 1;

    void validate() const;
};

// f_self / max(f_other, floor): words common in the other group are unlikely positives.
double positive_weight(double f_self, double f_other, double floor);
// f_other / max(f_self, floor): words common in the other group are likely negatives.
double negative_weight(double f_self, double f_other, double floor);

enum class SampleRole { Positive, Negative };

// Categorical distribution over words; cumulative[i] = sum of probabilities[0..i].
struct SamplingDistribution {
    std::vector<std::string> vocabulary;  // ascending
    std::vector<double> weights;
    std::vector<double> probabilities;
    std::vector<double> cumulative;
    std::size_t excluded_words = 0;  // source words without a usable vector
    double excluded_frequency = 0.0;  // their summed relative frequency

    // Normalises `weights`. Throws Errc::DegenerateDistribution when empty or all zero.
    static SamplingDistribution from_weights(std::vector<std::string> vocabulary, std::vector<double> weights);
};

// Positive role samples from self's words, negative role from other's words.
// Words lacking a non-zero vector in `space` are excluded before normalising.
SamplingDistribution build_distribution(const ContextTable& self, const ContextTable& other, const EmbeddingSpace& space,
                                        SampleRole role, double floor);

// i.i.d. draws with replacement, as indices into dist.vocabulary.
std::vector<std::uint32_t> draw_samples(const SamplingDistribution& dist, std::size_t count, std::uint64_t seed);

struct SampleSet {
    std::vector<std::string> vocabulary;
    std::vector<std::uint32_t> positives;  // label +1, indices into vocabulary
    std::vector<std::uint32_t> negatives;  // label -1

    std::size_t size() const noexcept { return positives.size() + negatives.size(); }
};

// Draws k positives and n*k negatives.
SampleSet draw_sample_set(const SamplingDistribution& positive, const SamplingDistribution& negative,
                          const TrainerConfig& config, std::uint64_t seed);

// y = +1: 1 - cos(x, w); y = -1: max(0, cos(x, w) - margin). Throws Errc::ZeroNorm.
double ranking_loss(std::span<const double> x, std::span<const double> w, int y, double margin);
// Gradient of ranking_loss with respect to x; zero on the flat side of the
// hinge and at the kink cos == margin.
Vector loss_gradient(std::span<const double> x, std::span<const double> w, int y, double margin);

struct GroupVector {
    int decade = 0;
    std::string group;
    Vector vector;
    TrainerConfig config;
    double final_loss = 0.0;
    std::uint64_t seed = 0;  // seed the training actually used
    std::size_t positives = 0;
    std::size_t negatives = 0;
};

// Plain SGD over the shuffled samples for config.epochs passes, starting
// from small uniform noise. Seeded from config.seed. Throws Errc::NonFiniteLoss.
GroupVector train_group_vector(const SampleSet& samples, const EmbeddingSpace& space, const TrainerConfig& config);

struct DecadeTraining {
    GroupVector a;
    GroupVector b;
    SamplingDistribution positive_a, negative_a, positive_b, negative_b;
};

// Trains both groups of one decade independently. Both trainings derive
// their seeds from (config.seed, decade) only, so swapping the tables swaps
// the outputs.
DecadeTraining train_decade(const ContextTable& table_a, const ContextTable& table_b, const EmbeddingSpace& space,
                            const TrainerConfig& config);

using SpaceLoader = std::function<EmbeddingSpace(int decade)>;

struct DecadeJob {
    int decade = 0;
    const ContextTable* table_a = nullptr;
    const ContextTable* table_b = nullptr;
};

// Runs train_decade for every job; jobs run on OpenMP workers.
std::vector<DecadeTraining> train_decades(const std::vector<DecadeJob>& jobs, const SpaceLoader& load,
                                          const TrainerConfig& config, int workers = 0);
// Single-threaded reference for train_decades.
std::vector<DecadeTraining> train_decades_serial(const std::vector<DecadeJob>& jobs, const SpaceLoader& load,
                                                 const TrainerConfig& config);

// "decade group v1 ... vd" lines.
std::string serialize_group_vectors(const std::vector<GroupVector>& vectors);
std::vector<GroupVector> parse_group_vectors(std::string_view text);

}  // namespace grouprep
