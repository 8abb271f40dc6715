#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "grouprep/roster.hpp"

namespace grouprep {

struct TableKey {
    int decade = 0;
    std::string group;

    friend auto operator<=>(const TableKey&, const TableKey&) = default;
};

// Weighted context counts of one group in one decade.
class ContextTable {
public:
    ContextTable() = default;
    ContextTable(int decade, std::string group) : decade_(decade), group_(std::move(group)) {}

    int decade() const noexcept { return decade_; }
    const std::string& group() const noexcept { return group_; }
    TableKey key() const { return {decade_, group_}; }

    void add(std::string_view word, std::uint64_t weight);
    void add_person(const std::string& person_id) { persons_seen_.insert(person_id); }
    void add_ngrams(std::uint64_t n) { ngrams_matched_ += n; }

    // Throws Errc::KeyMismatch when decade or group differ.
    void merge_from(const ContextTable& other);

    std::uint64_t count(std::string_view word) const;
    std::uint64_t total_weight() const noexcept { return total_weight_; }
    std::uint64_t ngrams_matched() const noexcept { return ngrams_matched_; }
    const std::set<std::string>& persons_seen() const noexcept { return persons_seen_; }
    const std::unordered_map<std::string, std::uint64_t, StringHash, std::equal_to<>>& counts() const noexcept {
        return counts_;
    }
    bool empty() const noexcept { return total_weight_ == 0; }

    // Word/count pairs in ascending word order.
    std::vector<std::pair<std::string, std::uint64_t>> sorted_counts() const;

    friend bool operator==(const ContextTable& a, const ContextTable& b);

private:
    int decade_ = 0;
    std::string group_;
    std::unordered_map<std::string, std::uint64_t, StringHash, std::equal_to<>> counts_;
    std::uint64_t total_weight_ = 0;
    std::set<std::string> persons_seen_;
    std::uint64_t ngrams_matched_ = 0;
};

ContextTable merge(const ContextTable& a, const ContextTable& b);

using ContextTableSet = std::map<TableKey, ContextTable>;

// Adds every table of `from` into `into`, creating missing keys.
void merge_into(ContextTableSet& into, const ContextTableSet& from);

// count / total_weight, 0 for absent words. Throws Errc::EmptyTable.
double relative_frequency(const ContextTable& table, std::string_view word);

struct ContextStatsRow {
    int decade = 0;
    std::string group;
    std::uint64_t matched_ngrams = 0;
    std::uint64_t matched_persons = 0;
    std::uint64_t total_weight = 0;
    std::optional<double> avg_context_words_per_person;  // nullopt = NA
    std::optional<double> avg_context_length_per_ngram;
};

std::vector<ContextStatsRow> compute_stats(const ContextTableSet& tables);
std::string stats_csv(const std::vector<ContextStatsRow>& rows);

// Serialisation: one file per (decade, group) named "<decade>_<group>.tsv".
// Line 1: "#decade=D<TAB>group=G<TAB>total_weight=W<TAB>persons=P<TAB>ngrams=N"
// Line 2: "#persons<TAB>id1,id2,..." followed by "word<TAB>count" lines.
std::string serialize_table(const ContextTable& table);
ContextTable parse_table(std::string_view text);
void write_tables(const ContextTableSet& tables, const std::filesystem::path& dir);
ContextTableSet read_tables(const std::filesystem::path& dir);

}  // namespace grouprep
