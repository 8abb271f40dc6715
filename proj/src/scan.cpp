#include "grouprep/scan.hpp"

#include <map>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "grouprep/error.hpp"
#include "grouprep/io.hpp"

namespace grouprep {

void ScanStats::merge_from(const ScanStats& other) {
    lines_read += other.lines_read;
    malformed_lines += other.malformed_lines;
    matched_records += other.matched_records;
    gate_rejected_entries += other.gate_rejected_entries;
    out_of_range_entries += other.out_of_range_entries;
    unknown_birth_entries += other.unknown_birth_entries;
    matched_persons.insert(other.matched_persons.begin(), other.matched_persons.end());
    shard_errors.insert(shard_errors.end(), other.shard_errors.begin(), other.shard_errors.end());
}

namespace {

ContextTable& table_for(ContextTableSet& tables, int decade, const std::string& group) {
    TableKey key{decade, group};
    auto it = tables.find(key);
    if (it == tables.end()) it = tables.emplace(key, ContextTable(decade, group)).first;
    return it->second;
}

}  // namespace

void scan_line(std::string_view line, const Roster& roster, const ScanOptions& options, ScanResult& out) {
    ++out.stats.lines_read;
    if (line.empty()) return;
    thread_local NgramView view;
    if (parse_ngram_view(line, view) != nullptr) {
        ++out.stats.malformed_lines;
        return;
    }
    const auto matches = match_person(std::span<const std::string_view>(view.tokens), roster.index);
    if (matches.empty()) return;
    NgramRecord record;
    record.tokens.assign(view.tokens.begin(), view.tokens.end());
    record.years = view.years;
    ++out.stats.matched_records;

    for (const NameMatch& m : matches) {
        const Person& person = roster.persons[m.person];
        const auto words = context_words(record, m, options.rules);
        for (const YearEntry& entry : record.years) {
            const int decade = bucket_by_decade(entry.year);
            if (!options.decades.contains(decade)) {
                ++out.stats.out_of_range_entries;
                continue;
            }
            const GateResult gate = birth_gate(person.birth_year, entry.year);
            if (gate == GateResult::Reject) {
                ++out.stats.gate_rejected_entries;
                continue;
            }
            if (gate == GateResult::AcceptUnknownBirth) ++out.stats.unknown_birth_entries;
            ContextTable& table = table_for(out.tables, decade, person.group);
            table.add_ngrams(entry.match_count);
            table.add_person(person.person_id);
            out.stats.matched_persons.insert(person.person_id);
            for (const auto& w : words) table.add(w, entry.match_count);
        }
    }
}

ScanResult scan_lines(const std::vector<std::string>& lines, const Roster& roster, const ScanOptions& options) {
    ScanResult out;
    for (const auto& line : lines) scan_line(line, roster, options, out);
    return out;
}

ScanResult scan_shard(const std::filesystem::path& shard, const Roster& roster, const ScanOptions& options) {
    ScanResult out;
    try {
        LineReader reader(shard);
        std::string line;
        while (reader.next(line)) scan_line(line, roster, options, out);
    } catch (const Error& e) {
        if (e.code() != Errc::IoError) throw;
        ScanResult failed;
        failed.stats.shard_errors.push_back(shard.string() + ": " + e.what());
        return failed;
    }
    return out;
}

ScanResult scan_corpus_serial(const std::vector<std::filesystem::path>& shards, const Roster& roster,
                              const ScanOptions& options) {
    ScanResult total;
    for (const auto& shard : shards) {
        ScanResult part = scan_shard(shard, roster, options);
        merge_into(total.tables, part.tables);
        total.stats.merge_from(part.stats);
    }
    return total;
}

ScanResult scan_corpus(const std::vector<std::filesystem::path>& shards, const Roster& roster,
                       const ScanOptions& options, int workers) {
    std::vector<ScanResult> parts(shards.size());
    const long n = static_cast<long>(shards.size());
#ifdef _OPENMP
    const int threads = workers > 0 ? workers : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
#endif
    for (long i = 0; i < n; ++i) {
        parts[static_cast<std::size_t>(i)] = scan_shard(shards[static_cast<std::size_t>(i)], roster, options);
    }
    (void)workers;
    ScanResult total;
    for (const auto& part : parts) {
        merge_into(total.tables, part.tables);
        total.stats.merge_from(part.stats);
    }
    return total;
}

std::string scan_stats_csv(const ContextTableSet& tables) {
    std::ostringstream out;
    out << "decade,group,matched_ngrams,matched_persons,total_context_weight\n";
    for (const auto& [key, t] : tables) {
        out << key.decade << ',' << csv_escape(key.group) << ',' << t.ngrams_matched() << ','
            << t.persons_seen().size() << ',' << t.total_weight() << '\n';
    }
    return out.str();
}

std::string matched_persons_csv(const Roster& roster, const ScanStats& stats) {
    std::map<std::string, std::pair<std::uint64_t, std::uint64_t>> by_group;
    for (const Person& p : roster.persons) {
        auto& [total, matched] = by_group[p.group];
        ++total;
        if (stats.matched_persons.contains(p.person_id)) ++matched;
    }
    std::ostringstream out;
    out << "group,roster_persons,matched_persons\n";
    for (const auto& [group, counts] : by_group) {
        out << csv_escape(group) << ',' << counts.first << ',' << counts.second << '\n';
    }
    return out.str();
}

}  // namespace grouprep
