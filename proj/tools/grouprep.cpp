// Command-line front end: scan, train, analyze, sweep, synth, report, fetch-roster.
#include <cstdio>
#include <exception>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "grouprep/config.hpp"
#include "grouprep/error.hpp"
#include "grouprep/io.hpp"
#include "grouprep/pipeline.hpp"
#include "grouprep/sparql_client.hpp"
#include "grouprep/synth.hpp"

using namespace grouprep;

namespace {

struct Overrides {
    std::string config;
    std::string output;
    std::optional<std::uint64_t> seed;
    std::optional<int> workers;
    std::optional<std::uint64_t> k;
    std::optional<std::uint64_t> n;
    std::optional<int> first_decade;
    std::optional<int> last_decade;
    bool plots = false;
    bool quiet = false;
};

void add_common(CLI::App* cmd, Overrides& o) {
    cmd->add_option("-c,--config", o.config, "Run config (JSON)")->required();
    cmd->add_option("-o,--output", o.output, "Output directory (overrides config)");
    cmd->add_option("--seed", o.seed, "Root seed");
    cmd->add_option("-j,--workers", o.workers, "Worker threads (0 = all)");
    cmd->add_option("--k", o.k, "Positive samples per group vector");
    cmd->add_option("--n", o.n, "Negatives per positive");
    cmd->add_option("--first-decade", o.first_decade);
    cmd->add_option("--last-decade", o.last_decade);
    cmd->add_flag("--plots", o.plots, "Also write SVG heatmaps");
    cmd->add_flag("-q,--quiet", o.quiet);
}

RunConfig effective_config(const Overrides& o) {
    RunConfig c = load_config(o.config);
    if (!o.output.empty()) c.output = std::filesystem::absolute(o.output);
    if (o.seed) {
        c.seed = *o.seed;
        c.trainer.seed = *o.seed;
    }
    if (o.workers) c.workers = *o.workers;
    if (o.k) c.trainer.k = *o.k;
    if (o.n) c.trainer.n = *o.n;
    if (o.first_decade) c.decades.first = *o.first_decade;
    if (o.last_decade) c.decades.last = *o.last_decade;
    if (o.plots) c.plots = true;
    c.validate();
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Group portrayal analysis over diachronic n-gram corpora"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersion));

    Overrides o;
    auto* scan = app.add_subcommand("scan", "Match roster names in the corpus and build context tables");
    add_common(scan, o);
    auto* train = app.add_subcommand("train", "Learn one vector per group and decade");
    add_common(train, o);
    auto* analyze = app.add_subcommand("analyze", "Correlation, semantic-axis or toxicity reports");
    add_common(analyze, o);
    std::string which;
    analyze->add_option("which", which, "corr | axes | toxicity")
        ->required()
        ->check(CLI::IsMember({"corr", "axes", "toxicity"}));
    auto* sweep = app.add_subcommand("sweep", "Train and analyze over the configured k x n grid");
    add_common(sweep, o);
    auto* report = app.add_subcommand("report", "scan, train and every analysis in one go");
    add_common(report, o);

    auto* synth = app.add_subcommand("synth", "Write a synthetic bundle with planted structure");
    PlantSpec spec;
    std::string synth_dir = "synth";
    std::size_t synth_decades = spec.decades.size();
    int synth_first = spec.decades.front();
    synth->add_option("-o,--out", synth_dir, "Bundle directory");
    synth->add_option("--seed", spec.seed);
    synth->add_option("--dim", spec.dim);
    synth->add_option("--decades", synth_decades, "Number of decades");
    synth->add_option("--first-decade", synth_first);
    synth->add_option("--ngrams", spec.ngrams_per_group_per_decade, "5-grams per group per decade");
    synth->add_option("--persons", spec.persons_per_group, "Persons per group");
    synth->add_option("--bias-a", spec.bias_a);
    synth->add_option("--bias-b", spec.bias_b);
    synth->add_option("--theme-share", spec.theme_share);
    synth->add_option("--toxic-rate", spec.toxic_rate_b, "Toxic slot rate of group B");
    synth->add_option("--toxic-multiplier", spec.toxic_multiplier_a, "Group A toxic rate relative to B");
    synth->add_option("--noise", spec.noise);
    synth->add_option("--drift", spec.decade_drift);
    synth->add_option("--break-after", spec.break_after, "Theme switches after this decade index (-1: never)");
    synth->add_option("--shards", spec.shards);
    synth->add_flag("--gzip", spec.gzip_shards);
    synth->add_option("--train-k", spec.train_k);

    auto* fetch = app.add_subcommand("fetch-roster", "Run the roster query against a SPARQL endpoint");
    FetchRequest req;
    std::string query_file, fixture, fetch_out = "roster.tsv", fetch_config;
    fetch->add_option("-c,--config", fetch_config, "Take endpoint/query/fixture from a run config");
    fetch->add_option("--endpoint", req.endpoint);
    fetch->add_option("--query", query_file, "File holding the SPARQL query");
    fetch->add_option("--fixture", fixture, "Offline copy used when the endpoint fails");
    fetch->add_option("-o,--out", fetch_out);
    fetch->add_option("--timeout", req.timeout_seconds);

    CLI11_PARSE(app, argc, argv);

    RunLog log;
    try {
        if (*synth) {
            spec.decades.clear();
            for (std::size_t i = 0; i < synth_decades; ++i) spec.decades.push_back(synth_first + 10 * static_cast<int>(i));
            const auto paths = cmd_synth(spec, synth_dir);
            std::printf("wrote bundle %s (config %s)\n", paths.root.string().c_str(), paths.config.string().c_str());
            return 0;
        }
        if (*fetch) {
            if (!fetch_config.empty()) {
                const RunConfig c = load_config(fetch_config);
                if (req.endpoint.empty()) req.endpoint = c.fetch.endpoint;
                if (query_file.empty() && !c.fetch.query.empty()) query_file = c.fetch.query.string();
                if (fixture.empty() && !c.fetch.fixture.empty()) fixture = c.fetch.fixture.string();
            }
            if (!req.endpoint.empty()) {
                if (query_file.empty()) throw Error(Errc::InvalidConfig, "--query is required with an endpoint");
                req.query = read_file(query_file);
            }
            req.fixture = fixture;
            req.output = fetch_out;
            const FetchResult r = fetch_roster(req);
            for (const auto& w : r.warnings) log.warn(w);
            std::printf("%zu rows -> %s%s\n", r.rows, fetch_out.c_str(), r.used_fixture ? " (fixture)" : "");
            return 0;
        }

        log.quiet = o.quiet;
        const RunConfig config = effective_config(o);
        if (*scan) {
            const auto r = cmd_scan(config, log);
            if (!r.result.stats.shard_errors.empty()) return 3;
        } else if (*train) {
            cmd_train(config, log);
        } else if (*analyze) {
            cmd_analyze(config, parse_analysis(which), log);
        } else if (*sweep) {
            cmd_sweep(config, log);
        } else if (*report) {
            cmd_report(config, log);
        }
        return 0;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_code_for(e.code());
    } catch (const std::filesystem::filesystem_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
