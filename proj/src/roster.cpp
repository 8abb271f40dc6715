#include "grouprep/roster.hpp"

#include <algorithm>
#include <map>
#include <utility>

#include "grouprep/error.hpp"
#include "grouprep/io.hpp"

namespace grouprep {

std::vector<std::string> Person::name_tokens() const {
    std::vector<std::string> out;
    for (auto tok : split_whitespace(full_name)) out.emplace_back(tok);
    return out;
}

std::string make_person_id(std::string_view full_name, std::optional<int> birth_year) {
    std::string key(full_name);
    key.push_back('\x1f');
    key += birth_year ? std::to_string(*birth_year) : std::string("?");
    return hex64(fnv1a64(key));
}

const std::string& GroupMap::map(std::string_view raw_label) const {
    const std::string_view label = trim(raw_label);
    if (label.empty()) return default_label;
    const auto it = table.find(label);
    return it == table.end() ? default_label : it->second;
}

std::set<std::string> GroupMap::target_labels() const {
    std::set<std::string> out;
    for (const auto& [raw, group] : table) {
        if (group != default_label) out.insert(group);
    }
    return out;
}

GroupMap parse_group_map(std::string_view text) {
    GroupMap map;
    for (std::string_view line : split(text, '\n')) {
        line = trim(line);
        if (line.empty() || line.front() == '#') continue;
        const auto fields = split(line, '\t');
        if (fields.size() != 2) throw Error(Errc::InvalidConfig, "group map line needs raw<TAB>group: " + std::string(line));
        const std::string raw(trim(fields[0]));
        const std::string group(trim(fields[1]));
        if (group.empty()) throw Error(Errc::InvalidConfig, "empty group label for " + raw);
        if (raw == "*") {
            map.default_label = group;
        } else {
            map.table[raw] = group;
        }
    }
    if (map.target_labels().size() < 2) {
        throw Error(Errc::InvalidConfig, "group map must name at least two non-default groups");
    }
    return map;
}

GroupMap load_group_map(const std::filesystem::path& path) {
    return parse_group_map(read_file(path));
}

std::optional<int> parse_birth_year(std::string_view dob) {
    dob = trim(dob);
    if (dob.empty()) return std::nullopt;
    std::size_t end = 0;
    if (dob[0] == '-' || dob[0] == '+') end = 1;
    const std::size_t digits_start = end;
    while (end < dob.size() && dob[end] >= '0' && dob[end] <= '9') ++end;
    if (end == digits_start) return std::nullopt;
    if (end < dob.size() && dob[end] != '-' && dob[end] != 'T' && dob[end] != ' ') return std::nullopt;
    const auto year = parse_int(dob.substr(0, end));
    if (!year) return std::nullopt;
    return static_cast<int>(*year);
}

RosterParseResult parse_roster_text(std::string_view text) {
    const DelimitedTable table = parse_delimited(text);
    const auto name_col = table.column("name");
    const auto dob_col = table.column("dob");
    const auto ethnic_col = table.column("ethnicLabel");
    const auto occupation_col = table.column("occupation");
    for (auto [col, label] : {std::pair{name_col, "name"}, std::pair{dob_col, "dob"},
                              std::pair{ethnic_col, "ethnicLabel"}, std::pair{occupation_col, "occupation"}}) {
        if (!col) throw Error(Errc::MissingColumn, std::string("roster export lacks column ") + label);
    }

    RosterParseResult result;
    std::map<std::pair<std::string, std::optional<int>>, std::size_t> seen;
    std::vector<std::set<std::string>> occupations;
    for (const auto& row : table.rows) {
        ++result.rows_read;
        const auto tokens = split_whitespace(row[*name_col]);
        if (tokens.size() < 2) {
            ++result.rows_skipped;
            continue;
        }
        std::string full_name;
        for (auto tok : tokens) {
            if (!full_name.empty()) full_name.push_back(' ');
            full_name.append(tok);
        }
        const auto birth_year = parse_birth_year(row[*dob_col]);
        const std::string occupation(trim(row[*occupation_col]));
        const std::string ethnic(trim(row[*ethnic_col]));

        auto key = std::make_pair(full_name, birth_year);
        if (const auto it = seen.find(key); it != seen.end()) {
            ++result.rows_merged;
            Person& p = result.persons[it->second];
            if (!occupation.empty()) occupations[it->second].insert(occupation);
            if (p.source_ethnic_label.empty()) p.source_ethnic_label = ethnic;
            continue;
        }
        Person p;
        p.person_id = make_person_id(full_name, birth_year);
        p.full_name = full_name;
        p.birth_year = birth_year;
        p.source_ethnic_label = ethnic;
        p.group = std::string(kOtherGroup);
        seen.emplace(std::move(key), result.persons.size());
        occupations.emplace_back();
        if (!occupation.empty()) occupations.back().insert(occupation);
        result.persons.push_back(std::move(p));
    }
    for (std::size_t i = 0; i < result.persons.size(); ++i) {
        std::string joined;
        for (const auto& occ : occupations[i]) {
            if (!joined.empty()) joined.push_back(';');
            joined += occ;
        }
        result.persons[i].occupation = std::move(joined);
    }
    return result;
}

RosterParseResult parse_roster_export(const std::filesystem::path& path) {
    return parse_roster_text(read_file(path));
}

void apply_group_map(std::vector<Person>& persons, const GroupMap& map) {
    for (Person& p : persons) p.group = map.map(p.source_ethnic_label);
}

std::vector<GroupOverride> load_overrides(const std::filesystem::path& path) {
    const DelimitedTable table = read_delimited(path);
    const auto name_col = table.column("name");
    const auto year_col = table.column("birth_year");
    const auto group_col = table.column("group");
    if (!name_col || !group_col) throw Error(Errc::MissingColumn, "override file needs name and group columns");
    std::vector<GroupOverride> out;
    for (const auto& row : table.rows) {
        GroupOverride o;
        for (auto tok : split_whitespace(row[*name_col])) {
            if (!o.full_name.empty()) o.full_name.push_back(' ');
            o.full_name.append(tok);
        }
        if (year_col) {
            if (const auto y = parse_int(trim(row[*year_col]))) o.birth_year = static_cast<int>(*y);
        }
        o.group = std::string(trim(row[*group_col]));
        if (o.full_name.empty() || o.group.empty()) continue;
        out.push_back(std::move(o));
    }
    return out;
}

std::size_t apply_overrides(std::vector<Person>& persons, const std::vector<GroupOverride>& overrides) {
    std::size_t changed = 0;
    for (Person& p : persons) {
        for (const auto& o : overrides) {
            if (o.full_name != p.full_name) continue;
            if (o.birth_year && o.birth_year != p.birth_year) continue;
            if (p.group != o.group) ++changed;
            p.group = o.group;
        }
    }
    return changed;
}

const std::vector<IndexEntry>* RosterIndex::lookup(std::string_view first_token) const {
    const auto it = by_first_.find(first_token);
    return it == by_first_.end() ? nullptr : &it->second;
}

RosterIndex build_index(const std::vector<Person>& persons) {
    RosterIndex index;
    for (std::size_t i = 0; i < persons.size(); ++i) {
        const Person& p = persons[i];
        if (p.group == kOtherGroup) continue;
        IndexEntry entry{p.name_tokens(), i};
        if (entry.tokens.size() < 2) continue;
        index.max_tokens_ = std::max(index.max_tokens_, entry.tokens.size());
        index.by_first_[entry.tokens.front()].push_back(std::move(entry));
        ++index.size_;
    }
    return index;
}

}  // namespace grouprep
