#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "grouprep/group_embedding.hpp"
#include "grouprep/ngram.hpp"

namespace grouprep {

struct SweepGrid {
    std::vector<std::uint64_t> k = {500'000, 1'000'000};
    std::vector<std::uint64_t> n = {1, 4, 10, 20};
};

struct FetchSettings {
    std::string endpoint;  // empty: offline, fixture only
    std::filesystem::path query;
    std::filesystem::path fixture;
    int timeout_seconds = 60;
};

// Everything one pipeline run needs. Relative paths in the file are
// resolved against the directory holding the config file.
struct RunConfig {
    std::filesystem::path base_dir;

    std::uint64_t seed = 1;
    int workers = 0;  // <= 0: OpenMP default
    DecadeRange decades{1850, 1990};
    std::vector<std::string> groups;  // exactly two

    std::vector<std::filesystem::path> shards;
    std::filesystem::path roster;
    std::filesystem::path group_map;
    std::filesystem::path overrides;  // optional
    std::filesystem::path stopwords;  // optional, replaces the bundled list
    std::map<int, std::filesystem::path> vectors;
    std::filesystem::path axes;
    std::filesystem::path lexicon;
    std::filesystem::path output = "out";

    TrainerConfig trainer;
    std::string lexicon_level = "conservative";
    int anchor_decade = 1990;
    std::size_t top_axes = 2;
    std::size_t toxic_axes = 10;
    SweepGrid sweep;
    bool plots = false;
    FetchSettings fetch;

    // Checks values that do not depend on the subcommand.
    void validate() const;
    // Canonical JSON of the result-affecting settings.
    std::string canonical_json() const;
    std::string hash() const;
};

RunConfig parse_config(std::string_view json_text, const std::filesystem::path& base_dir);
RunConfig load_config(const std::filesystem::path& path);

// Throws Errc::InvalidConfig when `path` is unset or does not exist.
void require_path(const std::filesystem::path& path, std::string_view what);

}  // namespace grouprep
