#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "grouprep/context.hpp"
#include "grouprep/embedding.hpp"
#include "grouprep/group_embedding.hpp"
#include "grouprep/semaxes.hpp"

namespace grouprep {

// Parameters of a synthetic bundle with known, planted structure.
struct PlantSpec {
    std::size_t dim = 50;
    std::vector<int> decades = {1970, 1980, 1990};
    std::string group_a = "GRP_A";
    std::string group_b = "GRP_B";

    std::size_t pole_words = 6;        // per pole of the planted and toxic axes
    std::size_t decoy_axes = 10;       // axes built from random words
    std::size_t decoy_pole_words = 5;  // per decoy pole
    std::size_t theme_words = 8;       // per theme era
    std::size_t toxic_words = 12;
    std::size_t filler_words = 100;  // vocabulary never used as context
    std::size_t persons_per_group = 20;
    std::size_t ngrams_per_group_per_decade = 10'000;
    std::size_t shards = 3;
    bool gzip_shards = false;

    // Probability that a pole slot draws from the right pole, per group.
    double bias_a = 0.8;
    double bias_b = 0.2;
    double theme_share = 0.3;
    double toxic_rate_b = 0.02;
    double toxic_multiplier_a = 4.0;  // group A's toxic rate = toxic_rate_b * this

    double noise = 0.15;          // placement noise, expected norm
    double decade_drift = 0.03;   // per-decade perturbation, expected norm
    int break_after = -1;         // theme switches after this decade index; -1: never

    double pareto_alpha = 1.5;  // match counts: Pareto tail, capped
    std::uint64_t max_match_count = 50;

    // Trainer settings written into the bundle's run config.
    std::uint64_t train_k = 20'000;
    std::uint64_t train_n = 4;

    std::uint64_t seed = 7;

    std::string planted_axis = "planted.a.01";
    std::string toxic_axis = "abnormal.a.01";

    void validate() const;
    double toxic_rate_a() const { return toxic_rate_b * toxic_multiplier_a; }
};

// Word inventory derived deterministically from the spec.
struct PlantedWords {
    std::vector<std::string> planted_left, planted_right;
    std::vector<std::string> toxic_left, toxic_right;  // poles of the toxic axis
    std::vector<std::string> toxic;                     // lexicon words
    std::vector<std::vector<std::string>> themes;       // [era][word]
    std::vector<std::vector<std::string>> decoy_left, decoy_right;
    std::vector<std::string> filler;
};

PlantedWords planted_words(const PlantSpec& spec);
std::vector<SemanticAxis> gen_axes(const PlantSpec& spec);

// Space of decade index `decade_index`: planted geometry plus per-decade drift.
EmbeddingSpace gen_space(const PlantSpec& spec, std::size_t decade_index);

struct SynthPerson {
    std::string first, last;
    std::string group;
    std::string ethnic_label;
    int birth_year = 0;
};

std::vector<SynthPerson> gen_roster(const PlantSpec& spec);

// Category a generated context word was drawn from.
enum class SlotKind { Toxic, Theme, PoleRight, PoleLeft };

struct CorpusLine {
    std::string text;
    std::string group;
    std::size_t decade_index = 0;
    std::vector<SlotKind> slots;
};

// Lines of form "First Last w w w<TAB>year,match,volume...", grouped by
// decade then group.
std::vector<CorpusLine> gen_corpus(const PlantSpec& spec, const std::vector<SynthPerson>& roster);

struct BundlePaths {
    std::filesystem::path root;
    std::vector<std::filesystem::path> shards;
    std::filesystem::path roster, group_map, axes, lexicon, manifest, config;
    std::map<int, std::filesystem::path> vectors;
};

// Writes shards, roster export, group map, per-decade vectors, axes,
// lexicon, a ground-truth manifest and a run config that points at them.
BundlePaths write_bundle(const PlantSpec& spec, const std::filesystem::path& dir);

// Brute-force sampling distribution: enumerates the space's whole vocabulary
// and evaluates the weight formulas directly. Throws Errc::DegenerateDistribution.
std::map<std::string, double> oracle_distribution(const ContextTable& self, const ContextTable& other,
                                                  const EmbeddingSpace& space, SampleRole role, double floor);

}  // namespace grouprep
