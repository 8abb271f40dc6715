#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace grouprep {

inline constexpr std::string_view kOtherGroup = "OTHER";

struct Person {
    std::string person_id;
    std::string full_name;  // whitespace-normalised, >= 2 tokens
    std::string group;
    std::optional<int> birth_year;
    std::string occupation;  // ';'-joined when several rows were merged
    std::string source_ethnic_label;

    std::vector<std::string> name_tokens() const;
};

std::string make_person_id(std::string_view full_name, std::optional<int> birth_year);

// Raw source label -> analysis group. Lookups never fail: unmapped or empty
// labels fall back to default_label.
struct GroupMap {
    std::map<std::string, std::string, std::less<>> table;
    std::string default_label = std::string(kOtherGroup);

    const std::string& map(std::string_view raw_label) const;
    std::set<std::string> target_labels() const;
};

// "raw<TAB>group" per line, '#' comments, "*<TAB>label" sets the default.
GroupMap parse_group_map(std::string_view text);
GroupMap load_group_map(const std::filesystem::path& path);

struct RosterParseResult {
    std::vector<Person> persons;
    std::size_t rows_read = 0;
    std::size_t rows_skipped = 0;  // names with fewer than two tokens
    std::size_t rows_merged = 0;   // duplicate (name, birth year) rows
};

// Columns name, dob, ethnicLabel, occupation (any order, extra columns ignored).
RosterParseResult parse_roster_text(std::string_view text);
RosterParseResult parse_roster_export(const std::filesystem::path& path);

// Year component of an ISO-like date ("1818-02-14", "1818-02-14T00:00:00Z").
std::optional<int> parse_birth_year(std::string_view dob);

void apply_group_map(std::vector<Person>& persons, const GroupMap& map);

// Manual labels for people whose source row carries no usable ethnic label.
struct GroupOverride {
    std::string full_name;
    std::optional<int> birth_year;  // unset: applies to every person with that name
    std::string group;
};

// Columns name, birth_year, group.
std::vector<GroupOverride> load_overrides(const std::filesystem::path& path);
std::size_t apply_overrides(std::vector<Person>& persons, const std::vector<GroupOverride>& overrides);

struct IndexEntry {
    std::vector<std::string> tokens;
    std::size_t person = 0;  // position in the persons vector the index was built from
};

struct StringHash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const noexcept { return std::hash<std::string_view>{}(s); }
};

class RosterIndex {
public:
    const std::vector<IndexEntry>* lookup(std::string_view first_token) const;
    std::size_t size() const noexcept { return size_; }
    bool empty() const noexcept { return size_ == 0; }
    std::size_t max_name_tokens() const noexcept { return max_tokens_; }

    friend RosterIndex build_index(const std::vector<Person>& persons);

private:
    std::unordered_map<std::string, std::vector<IndexEntry>, StringHash, std::equal_to<>> by_first_;
    std::size_t size_ = 0;
    std::size_t max_tokens_ = 0;
};

// Indexes every person whose group is not OTHER.
RosterIndex build_index(const std::vector<Person>& persons);

struct Roster {
    std::vector<Person> persons;
    RosterIndex index;
};

}  // namespace grouprep
