#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "grouprep/config.hpp"
#include "grouprep/context.hpp"
#include "grouprep/diachronic.hpp"
#include "grouprep/error.hpp"
#include "grouprep/group_embedding.hpp"
#include "grouprep/roster.hpp"
#include "grouprep/scan.hpp"
#include "grouprep/semaxes.hpp"
#include "grouprep/synth.hpp"
#include "grouprep/toxicity.hpp"

namespace grouprep {

inline constexpr std::string_view kVersion = "0.1.0";

// Warnings of one run; echoed to stderr unless quiet.
struct RunLog {
    bool quiet = false;
    std::vector<std::string> warnings;

    void warn(const std::string& message);
    void info(const std::string& message) const;
};

// Exit status for an error code: 2 config, 3 I/O, 4 data.
int exit_code_for(Errc code);

struct RosterLoad {
    Roster roster;
    RosterParseResult parse;
    std::size_t overridden = 0;
};

RosterLoad load_roster(const RunConfig& config, RunLog& log);

struct ScanOutcome {
    ScanResult result;
    std::vector<ContextStatsRow> stats;
};

// Builds the roster and scans every shard. Writes tables/ plus
// scan_stats.csv, context_stats.csv, matched_persons.csv. Shard read
// failures are reported in the result and the manifest, not thrown.
ScanOutcome cmd_scan(const RunConfig& config, RunLog& log);

// Trains both group vectors in every decade that has two non-empty tables
// and a vector file. Reads tables/ written by cmd_scan. Writes
// group_vectors.txt and group_vectors.json.
std::vector<GroupVector> cmd_train(const RunConfig& config, RunLog& log);

enum class Analysis { Corr, Axes, Toxicity };
Analysis parse_analysis(std::string_view name);
std::string_view analysis_name(Analysis which);

struct CorrOutcome {
    std::vector<CorrelationMatrix> matrices;               // one per group
    std::map<std::string, std::vector<TransitionTest>> transitions;  // groups with >= 3 intervals
};

struct AxesOutcome {
    std::vector<DecadeAxisResults> decades;
    std::vector<AxisReportRow> top;  // top_axes rows of every decade
};

struct ToxicityOutcome {
    ToxicityAdjustment adjustment;
    std::vector<AdjustedLexicon> adjusted;
    std::vector<ToxicityRow> rows;
};

// Each reads group_vectors.txt (and tables/ for toxicity) from the output dir.
CorrOutcome analyze_corr(const RunConfig& config, RunLog& log);
AxesOutcome analyze_axes(const RunConfig& config, RunLog& log);
ToxicityOutcome analyze_toxicity(const RunConfig& config, RunLog& log);
void cmd_analyze(const RunConfig& config, Analysis which, RunLog& log);

// One train + corr + axes output set per (k, n) cell under sweep/k<k>_n<n>/.
void cmd_sweep(const RunConfig& config, RunLog& log);

BundlePaths cmd_synth(const PlantSpec& spec, const std::filesystem::path& dir);

// scan, train, then every analysis.
void cmd_report(const RunConfig& config, RunLog& log);

std::map<int, Vector> vectors_of_group(const std::vector<GroupVector>& vectors, const std::string& group);

}  // namespace grouprep
