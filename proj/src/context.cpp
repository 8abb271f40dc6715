#include "grouprep/context.hpp"

#include <algorithm>
#include <sstream>

#include "grouprep/error.hpp"
#include "grouprep/io.hpp"

namespace grouprep {

void ContextTable::add(std::string_view word, std::uint64_t weight) {
    if (weight == 0) return;
    auto it = counts_.find(word);
    if (it == counts_.end()) {
        counts_.emplace(std::string(word), weight);
    } else {
        it->second += weight;
    }
    total_weight_ += weight;
}

void ContextTable::merge_from(const ContextTable& other) {
    if (other.decade_ != decade_ || other.group_ != group_) {
        throw Error(Errc::KeyMismatch, "cannot merge " + std::to_string(other.decade_) + "/" + other.group_ + " into " +
                                           std::to_string(decade_) + "/" + group_);
    }
    for (const auto& [word, count] : other.counts_) add(word, count);
    persons_seen_.insert(other.persons_seen_.begin(), other.persons_seen_.end());
    ngrams_matched_ += other.ngrams_matched_;
}

std::uint64_t ContextTable::count(std::string_view word) const {
    const auto it = counts_.find(word);
    return it == counts_.end() ? 0 : it->second;
}

std::vector<std::pair<std::string, std::uint64_t>> ContextTable::sorted_counts() const {
    std::vector<std::pair<std::string, std::uint64_t>> out(counts_.begin(), counts_.end());
    std::sort(out.begin(), out.end());
    return out;
}

bool operator==(const ContextTable& a, const ContextTable& b) {
    return a.decade_ == b.decade_ && a.group_ == b.group_ && a.total_weight_ == b.total_weight_ &&
           a.ngrams_matched_ == b.ngrams_matched_ && a.persons_seen_ == b.persons_seen_ && a.counts_ == b.counts_;
}

ContextTable merge(const ContextTable& a, const ContextTable& b) {
    ContextTable out = a;
    out.merge_from(b);
    return out;
}

void merge_into(ContextTableSet& into, const ContextTableSet& from) {
    for (const auto& [key, table] : from) {
        auto it = into.find(key);
        if (it == into.end()) {
            into.emplace(key, table);
        } else {
            it->second.merge_from(table);
        }
    }
}

double relative_frequency(const ContextTable& table, std::string_view word) {
    if (table.total_weight() == 0) {
        throw Error(Errc::EmptyTable, "table " + std::to_string(table.decade()) + "/" + table.group() + " is empty");
    }
    return static_cast<double>(table.count(word)) / static_cast<double>(table.total_weight());
}

std::vector<ContextStatsRow> compute_stats(const ContextTableSet& tables) {
    std::vector<ContextStatsRow> rows;
    for (const auto& [key, t] : tables) {
        ContextStatsRow r;
        r.decade = key.decade;
        r.group = key.group;
        r.matched_ngrams = t.ngrams_matched();
        r.matched_persons = t.persons_seen().size();
        r.total_weight = t.total_weight();
        if (r.matched_persons > 0) {
            r.avg_context_words_per_person = static_cast<double>(r.total_weight) / static_cast<double>(r.matched_persons);
        }
        if (r.matched_ngrams > 0) {
            r.avg_context_length_per_ngram = static_cast<double>(r.total_weight) / static_cast<double>(r.matched_ngrams);
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

std::string stats_csv(const std::vector<ContextStatsRow>& rows) {
    std::ostringstream out;
    out << "decade,group,matched_ngrams,matched_persons,total_context_weight,avg_context_words_per_person,"
           "avg_context_length_per_ngram\n";
    auto opt = [](const std::optional<double>& v) { return v ? format_real(*v, 6) : std::string("NA"); };
    for (const auto& r : rows) {
        out << r.decade << ',' << csv_escape(r.group) << ',' << r.matched_ngrams << ',' << r.matched_persons << ','
            << r.total_weight << ',' << opt(r.avg_context_words_per_person) << ','
            << opt(r.avg_context_length_per_ngram) << '\n';
    }
    return out.str();
}

std::string serialize_table(const ContextTable& table) {
    std::ostringstream out;
    out << "#decade=" << table.decade() << "\tgroup=" << table.group() << "\ttotal_weight=" << table.total_weight()
        << "\tpersons=" << table.persons_seen().size() << "\tngrams=" << table.ngrams_matched() << '\n';
    out << "#persons\t";
    bool first = true;
    for (const auto& id : table.persons_seen()) {
        if (!first) out << ',';
        out << id;
        first = false;
    }
    out << '\n';
    for (const auto& [word, count] : table.sorted_counts()) out << word << '\t' << count << '\n';
    return out.str();
}

ContextTable parse_table(std::string_view text) {
    const auto lines = split(text, '\n');
    if (lines.size() < 2 || !lines[0].starts_with("#decade=")) throw Error(Errc::MalformedLine, "table header missing");
    std::optional<std::int64_t> decade, total, ngrams;
    std::string group;
    for (auto field : split(lines[0].substr(1), '\t')) {
        const auto eq = field.find('=');
        if (eq == std::string_view::npos) continue;
        const auto name = field.substr(0, eq);
        const auto value = field.substr(eq + 1);
        if (name == "decade") decade = parse_int(value);
        if (name == "group") group = std::string(value);
        if (name == "total_weight") total = parse_int(value);
        if (name == "ngrams") ngrams = parse_int(value);
    }
    if (!decade || !total || !ngrams || group.empty()) throw Error(Errc::MalformedLine, "bad table header");
    ContextTable table(static_cast<int>(*decade), group);
    table.add_ngrams(static_cast<std::uint64_t>(*ngrams));
    if (!lines[1].starts_with("#persons")) throw Error(Errc::MalformedLine, "persons line missing");
    const auto tab = lines[1].find('\t');
    if (tab != std::string_view::npos) {
        for (auto id : split(lines[1].substr(tab + 1), ',')) {
            if (!id.empty()) table.add_person(std::string(id));
        }
    }
    for (std::size_t i = 2; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const auto fields = split(lines[i], '\t');
        const auto count = fields.size() == 2 ? parse_int(fields[1]) : std::nullopt;
        if (!count || *count <= 0) throw Error(Errc::MalformedLine, "bad table line: " + std::string(lines[i]));
        table.add(fields[0], static_cast<std::uint64_t>(*count));
    }
    if (table.total_weight() != static_cast<std::uint64_t>(*total)) {
        throw Error(Errc::MalformedLine, "table total_weight does not match its counts");
    }
    return table;
}

void write_tables(const ContextTableSet& tables, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    for (const auto& [key, table] : tables) {
        write_file(dir / (std::to_string(key.decade) + "_" + key.group + ".tsv"), serialize_table(table));
    }
}

ContextTableSet read_tables(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) throw Error(Errc::IoError, "no table directory " + dir.string());
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".tsv") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    ContextTableSet out;
    for (const auto& f : files) {
        ContextTable t = parse_table(read_file(f));
        out.emplace(t.key(), std::move(t));
    }
    return out;
}

}  // namespace grouprep
