#pragma once

#include <cstdint>
#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "grouprep/context.hpp"
#include "grouprep/ngram.hpp"
#include "grouprep/roster.hpp"

namespace grouprep {

struct ScanOptions {
    CleaningRules rules = CleaningRules::defaults();
    DecadeRange decades;
};

struct ScanStats {
    std::uint64_t lines_read = 0;
    std::uint64_t malformed_lines = 0;
    std::uint64_t matched_records = 0;       // records with at least one roster match
    std::uint64_t gate_rejected_entries = 0;  // year entries before the person turned ten
    std::uint64_t out_of_range_entries = 0;   // year entries outside the decade range
    std::uint64_t unknown_birth_entries = 0;  // accepted without a birth year
    std::set<std::string> matched_persons;    // person ids with any accepted entry
    std::vector<std::string> shard_errors;    // "path: message", in shard order

    void merge_from(const ScanStats& other);
    friend bool operator==(const ScanStats&, const ScanStats&) = default;
};

struct ScanResult {
    ContextTableSet tables;
    ScanStats stats;

    friend bool operator==(const ScanResult&, const ScanResult&) = default;
};

// Folds one raw corpus line into `out`. Malformed lines are counted.
void scan_line(std::string_view line, const Roster& roster, const ScanOptions& options, ScanResult& out);

ScanResult scan_lines(const std::vector<std::string>& lines, const Roster& roster, const ScanOptions& options);
ScanResult scan_shard(const std::filesystem::path& shard, const Roster& roster, const ScanOptions& options);

// Shards are processed by OpenMP workers (workers <= 0: runtime default) and
// the partial results merged in shard order.
ScanResult scan_corpus(const std::vector<std::filesystem::path>& shards, const Roster& roster,
                       const ScanOptions& options, int workers = 0);

// Single-threaded reference for scan_corpus.
ScanResult scan_corpus_serial(const std::vector<std::filesystem::path>& shards, const Roster& roster,
                              const ScanOptions& options);

// CSV: decade,group,matched_ngrams,matched_persons,total_context_weight
std::string scan_stats_csv(const ContextTableSet& tables);
// Per-group count of roster persons and of persons with matches.
std::string matched_persons_csv(const Roster& roster, const ScanStats& stats);

}  // namespace grouprep
