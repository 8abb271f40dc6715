#include "grouprep/pipeline.hpp"

#include <cstdio>
#include <set>

#include "json.hpp"

#include "grouprep/error.hpp"
#include "grouprep/io.hpp"

namespace grouprep {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

void RunLog::warn(const std::string& message) {
    warnings.push_back(message);
    if (!quiet) std::fprintf(stderr, "warning: %s\n", message.c_str());
}

void RunLog::info(const std::string& message) const {
    if (!quiet) std::fprintf(stderr, "%s\n", message.c_str());
}

int exit_code_for(Errc code) {
    switch (code) {
        case Errc::InvalidConfig:
        case Errc::InvalidArgument:
            return 2;
        case Errc::IoError:
        case Errc::EmptyFile:
        case Errc::EndpointUnreachable:
        case Errc::QueryRejected:
            return 3;
        default:
            return 4;
    }
}

namespace {

// Files written by one command, recorded in its manifest with a content hash.
class OutputSet {
public:
    OutputSet(const RunConfig& config, std::string command) : config_(config), command_(std::move(command)) {}

    void write(const fs::path& rel, std::string_view content) {
        write_file(config_.output / rel, content);
        files_.emplace_back(rel.generic_string(), hex64(fnv1a64(content)));
    }

    void finish(const RunLog& log, const ordered_json& extra = ordered_json::object()) const {
        ordered_json m;
        m["command"] = command_;
        m["config_hash"] = config_.hash();
        m["seed"] = config_.seed;
        m["versions"] = {{"grouprep", kVersion}, {"stopwords", kStopwordListVersion}};
        ordered_json outputs = ordered_json::object();
        for (const auto& [path, hash] : files_) outputs[path] = hash;
        m["outputs"] = outputs;
        m["warnings"] = log.warnings;
        for (const auto& [k, v] : extra.items()) m[k] = v;
        write_file(config_.output / ("manifest_" + command_ + ".json"), m.dump(2) + '\n');
    }

private:
    const RunConfig& config_;
    std::string command_;
    std::vector<std::pair<std::string, std::string>> files_;
};

std::vector<GroupVector> read_group_vectors(const RunConfig& config) {
    const fs::path p = config.output / "group_vectors.txt";
    if (!fs::exists(p)) throw Error(Errc::IoError, "no group vectors at " + p.string() + "; run train first");
    return parse_group_vectors(read_file(p));
}

EmbeddingSpace load_decade_space(const RunConfig& config, int decade) {
    const auto it = config.vectors.find(decade);
    if (it == config.vectors.end()) throw Error(Errc::InvalidConfig, "no vector file for decade " + std::to_string(decade));
    return load_space(it->second, decade);
}

const GroupVector* find_vector(const std::vector<GroupVector>& vectors, int decade, const std::string& group) {
    for (const auto& gv : vectors)
        if (gv.decade == decade && gv.group == group) return &gv;
    return nullptr;
}

ordered_json trainer_json(const TrainerConfig& t) {
    return {{"k", t.k},
            {"n", t.n},
            {"margin", t.margin},
            {"floor", t.floor},
            {"learning_rate", t.learning_rate},
            {"epochs", t.epochs},
            {"init_scale", t.init_scale},
            {"seed", t.seed}};
}

}  // namespace

std::map<int, Vector> vectors_of_group(const std::vector<GroupVector>& vectors, const std::string& group) {
    std::map<int, Vector> out;
    for (const auto& gv : vectors)
        if (gv.group == group) out[gv.decade] = gv.vector;
    return out;
}

RosterLoad load_roster(const RunConfig& config, RunLog& log) {
    require_path(config.roster, "roster");
    require_path(config.group_map, "group map");
    RosterLoad out;
    out.parse = parse_roster_export(config.roster);
    if (out.parse.rows_skipped > 0)
        log.warn(std::to_string(out.parse.rows_skipped) + " roster rows skipped (name has fewer than two tokens)");
    const GroupMap map = load_group_map(config.group_map);
    for (const auto& g : config.groups) {
        if (!map.target_labels().contains(g)) log.warn("group " + g + " is not a target of the group map");
    }
    apply_group_map(out.parse.persons, map);
    if (!config.overrides.empty()) {
        require_path(config.overrides, "overrides");
        out.overridden = apply_overrides(out.parse.persons, load_overrides(config.overrides));
    }
    // Persons outside the two analysis groups are kept for stats but never matched.
    for (auto& p : out.parse.persons) {
        if (p.group != config.groups[0] && p.group != config.groups[1]) p.group = std::string(kOtherGroup);
    }
    out.roster.persons = out.parse.persons;
    out.roster.index = build_index(out.roster.persons);
    if (out.roster.index.empty()) throw Error(Errc::EmptyTable, "roster has no person in the analysis groups");
    return out;
}

ScanOutcome cmd_scan(const RunConfig& config, RunLog& log) {
    config.validate();
    const RosterLoad roster = load_roster(config, log);
    ScanOptions options;
    if (!config.stopwords.empty()) {
        require_path(config.stopwords, "stopwords");
        options.rules = CleaningRules::with_stopword_file(config.stopwords.string());
    }
    options.decades = config.decades;

    ScanOutcome out;
    out.result = scan_corpus(config.shards, roster.roster, options, config.workers);
    const ScanStats& st = out.result.stats;
    for (const auto& e : st.shard_errors) log.warn("shard skipped: " + e);
    if (st.malformed_lines > 0) log.warn(std::to_string(st.malformed_lines) + " malformed lines skipped");
    if (st.unknown_birth_entries > 0)
        log.warn(std::to_string(st.unknown_birth_entries) + " year entries accepted without a birth year");
    if (out.result.tables.empty()) log.warn("no roster name matched any n-gram");

    fs::remove_all(config.output / "tables");
    out.stats = compute_stats(out.result.tables);

    OutputSet files(config, "scan");
    files.write("scan_stats.csv", scan_stats_csv(out.result.tables));
    files.write("context_stats.csv", stats_csv(out.stats));
    files.write("matched_persons.csv", matched_persons_csv(roster.roster, st));
    for (const auto& [key, table] : out.result.tables)
        files.write(fs::path("tables") / (std::to_string(key.decade) + "_" + key.group + ".tsv"), serialize_table(table));

    ordered_json extra;
    extra["scan"] = {{"shards", config.shards.size()},
                     {"lines_read", st.lines_read},
                     {"malformed_lines", st.malformed_lines},
                     {"matched_records", st.matched_records},
                     {"gate_rejected_entries", st.gate_rejected_entries},
                     {"out_of_range_entries", st.out_of_range_entries},
                     {"unknown_birth_entries", st.unknown_birth_entries},
                     {"matched_persons", st.matched_persons.size()},
                     {"shard_errors", st.shard_errors}};
    extra["roster"] = {{"rows_read", roster.parse.rows_read},
                       {"rows_skipped", roster.parse.rows_skipped},
                       {"rows_merged", roster.parse.rows_merged},
                       {"persons", roster.roster.persons.size()},
                       {"indexed", roster.roster.index.size()},
                       {"overridden", roster.overridden}};
    files.finish(log, extra);
    return out;
}

namespace {

std::vector<GroupVector> train_into(const RunConfig& config, const TrainerConfig& trainer, const fs::path& rel_dir,
                                    OutputSet& files, RunLog& log) {
    const fs::path tables_dir = config.output / "tables";
    if (!fs::exists(tables_dir)) throw Error(Errc::IoError, "no context tables at " + tables_dir.string() + "; run scan first");
    const ContextTableSet tables = read_tables(tables_dir);
    const std::string& ga = config.groups[0];
    const std::string& gb = config.groups[1];

    std::vector<DecadeJob> jobs;
    std::map<int, EmbeddingSpace> spaces;
    for (int decade : config.decades.decades()) {
        const auto a = tables.find({decade, ga});
        const auto b = tables.find({decade, gb});
        if (a == tables.end() || b == tables.end() || a->second.empty() || b->second.empty()) {
            log.warn("decade " + std::to_string(decade) + " skipped: a group has no context");
            continue;
        }
        if (!config.vectors.contains(decade)) {
            log.warn("decade " + std::to_string(decade) + " skipped: no vector file");
            continue;
        }
        spaces.emplace(decade, load_decade_space(config, decade));
        jobs.push_back({decade, &a->second, &b->second});
    }
    const SpaceLoader loader = [&spaces](int decade) { return spaces.at(decade); };
    const auto trained = train_decades(jobs, loader, trainer, config.workers);

    std::vector<GroupVector> vectors;
    ordered_json meta = ordered_json::array();
    for (std::size_t i = 0; i < trained.size(); ++i) {
        const auto& t = trained[i];
        for (const SamplingDistribution* d : {&t.positive_a, &t.negative_a, &t.positive_b, &t.negative_b}) {
            if (d->excluded_words > 0) {
                log.warn("decade " + std::to_string(jobs[i].decade) + ": " + std::to_string(d->excluded_words) +
                         " context words without vectors excluded (frequency mass " +
                         format_real(d->excluded_frequency) + ")");
            }
        }
        for (const GroupVector* gv : {&t.a, &t.b}) {
            meta.push_back({{"decade", gv->decade},
                            {"group", gv->group},
                            {"final_loss", gv->final_loss},
                            {"seed", gv->seed},
                            {"positives", gv->positives},
                            {"negatives", gv->negatives}});
            vectors.push_back(*gv);
        }
    }
    ordered_json sidecar = {{"trainer", trainer_json(trainer)}, {"vectors", meta}};
    files.write(rel_dir / "group_vectors.txt", serialize_group_vectors(vectors));
    files.write(rel_dir / "group_vectors.json", sidecar.dump(2) + '\n');
    return vectors;
}

}  // namespace

std::vector<GroupVector> cmd_train(const RunConfig& config, RunLog& log) {
    config.validate();
    OutputSet files(config, "train");
    auto vectors = train_into(config, config.trainer, "", files, log);
    files.finish(log);
    return vectors;
}

Analysis parse_analysis(std::string_view name) {
    if (name == "corr") return Analysis::Corr;
    if (name == "axes") return Analysis::Axes;
    if (name == "toxicity") return Analysis::Toxicity;
    throw Error(Errc::InvalidArgument, "unknown analysis '" + std::string(name) + "'");
}

std::string_view analysis_name(Analysis which) {
    switch (which) {
        case Analysis::Corr:
            return "corr";
        case Analysis::Axes:
            return "axes";
        case Analysis::Toxicity:
            return "toxicity";
    }
    return "?";
}

namespace {

CorrOutcome corr_from(const RunConfig& config, const std::vector<GroupVector>& vectors, const fs::path& rel_dir,
                      OutputSet& files, RunLog& log) {
    CorrOutcome out;
    for (const auto& group : config.groups) {
        const auto by_decade = vectors_of_group(vectors, group);
        CorrelationMatrix m;
        try {
            m = correlation_matrix(group, by_decade, config.decades.decades());
        } catch (const Error& e) {
            if (e.code() != Errc::TooFewDecades) throw;
            log.warn("correlation for " + group + " skipped: " + e.what());
            continue;
        }
        files.write(rel_dir / ("corr_" + group + ".csv"), matrix_csv(m));
        if (config.plots) files.write(rel_dir / ("corr_" + group + ".svg"), matrix_svg(m));
        if (m.size() >= 4) {
            auto tests = transition_report(m);
            files.write(rel_dir / ("transitions_" + group + ".csv"), transitions_csv(tests));
            out.transitions[group] = std::move(tests);
        } else {
            log.warn("transition test for " + group + " needs at least 4 decades, have " + std::to_string(m.size()));
        }
        out.matrices.push_back(std::move(m));
    }
    return out;
}

AxesOutcome axes_from(const RunConfig& config, const std::vector<GroupVector>& vectors, const fs::path& rel_dir,
                      OutputSet& files, RunLog& log) {
    require_path(config.axes, "axes");
    const auto axes = load_axes(config.axes);
    AxesOutcome out;
    for (int decade : config.decades.decades()) {
        const GroupVector* a = find_vector(vectors, decade, config.groups[0]);
        const GroupVector* b = find_vector(vectors, decade, config.groups[1]);
        if (!a || !b) continue;
        const EmbeddingSpace space = load_decade_space(config, decade);
        DecadeAxisResults r = compare_axes(axes, space, a->vector, b->vector);
        if (!r.excluded.empty())
            log.warn("decade " + std::to_string(decade) + ": " + std::to_string(r.excluded.size()) +
                     " axes excluded (fewer than 3 pole words)");
        for (const auto& z : r.zero_axes) log.warn("decade " + std::to_string(decade) + ": zero axis " + z);
        const auto top = top_axes(r, config.top_axes);
        out.top.insert(out.top.end(), top.begin(), top.end());
        out.decades.push_back(std::move(r));
    }
    if (out.decades.empty()) log.warn("no decade has vectors for both groups");
    files.write(rel_dir / "axes_top.csv", axes_report_csv(out.top));
    std::vector<AxisReportRow> all;
    for (const auto& d : out.decades) {
        const auto ranked = top_axes(d, d.rows.size() ? d.rows.size() : 1);
        all.insert(all.end(), ranked.begin(), ranked.end());
    }
    files.write(rel_dir / "axes_all.csv", axes_report_csv(all));
    return out;
}

}  // namespace

CorrOutcome analyze_corr(const RunConfig& config, RunLog& log) {
    config.validate();
    OutputSet files(config, "analyze_corr");
    auto out = corr_from(config, read_group_vectors(config), "", files, log);
    files.finish(log);
    return out;
}

AxesOutcome analyze_axes(const RunConfig& config, RunLog& log) {
    config.validate();
    OutputSet files(config, "analyze_axes");
    auto out = axes_from(config, read_group_vectors(config), "", files, log);
    files.finish(log);
    return out;
}

ToxicityOutcome analyze_toxicity(const RunConfig& config, RunLog& log) {
    config.validate();
    require_path(config.lexicon, "lexicon");
    require_path(config.axes, "axes");
    const fs::path tables_dir = config.output / "tables";
    if (!fs::exists(tables_dir)) throw Error(Errc::IoError, "no context tables at " + tables_dir.string() + "; run scan first");
    const ContextTableSet tables = read_tables(tables_dir);
    const auto axes = load_axes(config.axes);
    const ToxicLexicon lexicon = load_lexicon(config.lexicon, config.lexicon_level);

    ToxicityOutcome out;
    const EmbeddingSpace anchor = load_decade_space(config, config.anchor_decade);
    out.adjustment = build_adjustment(anchor, lexicon, axes, config.toxic_axes, config.workers);
    for (const auto& w : out.adjustment.warnings) log.warn(w);

    for (int decade : config.decades.decades()) {
        std::vector<const ContextTable*> present;
        for (const auto& g : config.groups) {
            const auto it = tables.find({decade, g});
            if (it != tables.end() && !it->second.empty()) present.push_back(&it->second);
        }
        if (present.empty()) continue;
        if (!config.vectors.contains(decade)) {
            log.warn("toxicity for decade " + std::to_string(decade) + " skipped: no vector file");
            continue;
        }
        const EmbeddingSpace space =
            decade == config.anchor_decade ? anchor : load_decade_space(config, decade);
        AdjustedLexicon adj = adjust_lexicon(space, out.adjustment, lexicon, axes);
        for (const ContextTable* t : present) {
            out.rows.push_back({decade, t->group(), toxicity_rate(*t, adj.retained), adj.removed.size()});
        }
        out.adjusted.push_back(std::move(adj));
    }

    OutputSet files(config, "analyze_toxicity");
    files.write("toxicity.csv", toxicity_csv(out.rows));
    files.write("removed_words.tsv", removed_words_listing(out.adjusted));
    std::string axes_text = "rank,axis_id\n";
    for (std::size_t i = 0; i < out.adjustment.top_axes.size(); ++i)
        axes_text += std::to_string(i + 1) + "," + out.adjustment.top_axes[i] + "\n";
    files.write("toxic_axes.csv", axes_text);
    ordered_json extra;
    extra["lexicon"] = {{"level", lexicon.level}, {"words", lexicon.words.size()}};
    extra["anchor_decade"] = config.anchor_decade;
    files.finish(log, extra);
    return out;
}

void cmd_analyze(const RunConfig& config, Analysis which, RunLog& log) {
    switch (which) {
        case Analysis::Corr:
            analyze_corr(config, log);
            break;
        case Analysis::Axes:
            analyze_axes(config, log);
            break;
        case Analysis::Toxicity:
            analyze_toxicity(config, log);
            break;
    }
}

void cmd_sweep(const RunConfig& config, RunLog& log) {
    config.validate();
    if (config.sweep.k.empty() || config.sweep.n.empty()) throw Error(Errc::InvalidConfig, "sweep grid is empty");
    OutputSet files(config, "sweep");
    ordered_json cells = ordered_json::array();
    for (auto k : config.sweep.k) {
        for (auto n : config.sweep.n) {
            TrainerConfig t = config.trainer;
            t.k = k;
            t.n = n;
            const fs::path dir = fs::path("sweep") / ("k" + std::to_string(k) + "_n" + std::to_string(n));
            log.info("sweep cell " + dir.generic_string());
            const auto vectors = train_into(config, t, dir, files, log);
            corr_from(config, vectors, dir, files, log);
            axes_from(config, vectors, dir, files, log);
            cells.push_back({{"k", k}, {"n", n}, {"dir", dir.generic_string()}});
        }
    }
    files.finish(log, {{"cells", cells}});
}

BundlePaths cmd_synth(const PlantSpec& spec, const fs::path& dir) { return write_bundle(spec, dir); }

void cmd_report(const RunConfig& config, RunLog& log) {
    cmd_scan(config, log);
    cmd_train(config, log);
    analyze_corr(config, log);
    analyze_axes(config, log);
    analyze_toxicity(config, log);
}

}  // namespace grouprep
