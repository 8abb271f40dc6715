#include <chrono>

#include "doctest.h"
#include "grouprep/io.hpp"
#include "grouprep/pipeline.hpp"
#include "helpers.hpp"

using namespace grouprep;
namespace fs = std::filesystem;

namespace {

Errc code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an Error");
    return Errc::InvalidArgument;
}

PlantSpec tiny_spec() {
    PlantSpec s;
    s.dim = 16;
    s.ngrams_per_group_per_decade = 1500;
    s.persons_per_group = 5;
    s.filler_words = 20;
    s.train_k = 1500;
    return s;
}

std::map<fs::path, std::string> csv_files(const fs::path& root) {
    std::map<fs::path, std::string> out;
    for (auto it = fs::recursive_directory_iterator(root); it != fs::recursive_directory_iterator(); ++it) {
        if (it->is_regular_file() && it->path().extension() == ".csv")
            out[fs::relative(it->path(), root)] = read_file(it->path());
    }
    return out;
}

RunLog quiet_log() {
    RunLog log;
    log.quiet = true;
    return log;
}

}  // namespace

TEST_SUITE("report_cli") {
    TEST_CASE("parse_config reads every section") {
        const auto c = parse_config(R"({
            "seed": 5, "workers": 2,
            "decades": {"first": 1900, "last": 1950},
            "groups": ["A", "B"],
            "paths": {"shards": ["a.tsv", "/abs/b.tsv"], "roster": "r.tsv", "group_map": "m.tsv",
                      "vectors": {"1900": "v/1900.txt"}, "axes": "axes.tsv", "lexicon": "lex.tsv",
                      "output": "res"},
            "trainer": {"k": 1000, "n": 2, "margin": 0.4},
            "anchor_decade": 1950, "top_axes": 3, "toxic_axes": 5,
            "sweep": {"k": [10, 20], "n": [1]}, "plots": true
        })",
                                    "/base");
        CHECK(c.seed == 5);
        CHECK(c.trainer.seed == 5);
        CHECK(c.workers == 2);
        CHECK(c.decades.first == 1900);
        CHECK(c.decades.last == 1950);
        CHECK(c.shards == std::vector<fs::path>{"/base/a.tsv", "/abs/b.tsv"});
        CHECK(c.vectors.at(1900) == fs::path("/base/v/1900.txt"));
        CHECK(c.output == fs::path("/base/res"));
        CHECK(c.trainer.k == 1000);
        CHECK(c.trainer.n == 2);
        CHECK(c.trainer.margin == 0.4);
        CHECK(c.anchor_decade == 1950);
        CHECK(c.top_axes == 3);
        CHECK(c.toxic_axes == 5);
        CHECK(c.sweep.k == std::vector<std::uint64_t>{10, 20});
        CHECK(c.plots);
    }

    TEST_CASE("defaults follow the documented settings") {
        const auto c = parse_config(R"({"groups": ["A", "B"]})", "/base");
        CHECK(c.decades.first == 1850);
        CHECK(c.decades.last == 1990);
        CHECK(c.trainer.k == 500000);
        CHECK(c.trainer.n == 4);
        CHECK(c.sweep.k == std::vector<std::uint64_t>{500000, 1000000});
        CHECK(c.sweep.n == std::vector<std::uint64_t>{1, 4, 10, 20});
        CHECK(c.anchor_decade == 1990);
        CHECK(c.lexicon_level == "conservative");
    }

    TEST_CASE("config errors") {
        CHECK(code_of([] { parse_config(R"({"groups": ["A", "B"], "sed": 1})", "/"); }) == Errc::InvalidConfig);
        CHECK(code_of([] { parse_config(R"({"groups": ["A"]})", "/"); }) == Errc::InvalidConfig);
        CHECK(code_of([] { parse_config("{not json", "/"); }) == Errc::InvalidConfig);
        CHECK(code_of([] {
                  parse_config(R"({"groups": ["A", "B"], "decades": {"first": 1990, "last": 1850}})", "/");
              }) == Errc::InvalidConfig);
        CHECK(exit_code_for(Errc::InvalidConfig) == 2);
        CHECK(exit_code_for(Errc::IoError) == 3);
        CHECK(exit_code_for(Errc::EmptyTable) == 4);
    }

    TEST_CASE("config hash ignores output and workers") {
        auto a = parse_config(R"({"groups": ["A", "B"], "paths": {"output": "x"}, "workers": 1})", "/base");
        auto b = parse_config(R"({"groups": ["A", "B"], "paths": {"output": "y"}, "workers": 4})", "/base");
        auto c = parse_config(R"({"groups": ["A", "B"], "seed": 2})", "/base");
        CHECK(a.hash() == b.hash());
        CHECK(a.hash() != c.hash());
    }

    TEST_CASE("missing roster is a config error") {
        testing::TempDir dir;
        auto c = load_config(testing::testdata() / "fixture" / "config.json");
        c.roster = dir / "absent.tsv";
        c.output = dir / "out";
        auto log = quiet_log();
        const auto code = code_of([&] { cmd_scan(c, log); });
        CHECK(code == Errc::InvalidConfig);
        CHECK(exit_code_for(code) == 2);
    }

    TEST_CASE("fixture scan matches the golden tables quickly") {
        testing::TempDir dir;
        auto c = load_config(testing::testdata() / "fixture" / "config.json");
        c.output = dir / "out";
        auto log = quiet_log();
        const auto t0 = std::chrono::steady_clock::now();
        cmd_scan(c, log);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        CHECK(secs < 5.0);
        CHECK(read_tables(c.output / "tables") == read_tables(testing::testdata() / "fixture" / "golden"));
        CHECK(fs::exists(c.output / "scan_stats.csv"));
        CHECK(fs::exists(c.output / "context_stats.csv"));
        CHECK(fs::exists(c.output / "manifest_scan.json"));
        CHECK(read_file(c.output / "manifest_scan.json").find(c.hash()) != std::string::npos);
    }

    TEST_CASE("zero matches warn and leave empty outputs") {
        testing::TempDir dir;
        write_file(dir / "roster.tsv", "name\tdob\tethnicLabel\toccupation\nNobody Here\t1800\tAfrican Americans\tx\n");
        auto c = load_config(testing::testdata() / "fixture" / "config.json");
        c.roster = dir / "roster.tsv";
        c.output = dir / "out";
        auto log = quiet_log();
        const auto out = cmd_scan(c, log);
        CHECK(out.result.tables.empty());
        bool warned = false;
        for (const auto& w : log.warnings) warned |= w.find("no roster name matched") != std::string::npos;
        CHECK(warned);
        CHECK(read_file(c.output / "scan_stats.csv") ==
              "decade,group,matched_ngrams,matched_persons,total_context_weight\n");
    }

    TEST_CASE("synthetic bundle runs end to end, twice identically") {
        testing::TempDir dir;
        const auto bundle = cmd_synth(tiny_spec(), dir / "bundle");
        auto c = load_config(bundle.config);
        auto log = quiet_log();
        c.output = dir / "run1";
        cmd_report(c, log);
        c.output = dir / "run2";
        cmd_report(c, log);
        const auto a = csv_files(dir / "run1");
        const auto b = csv_files(dir / "run2");
        CHECK(a.size() >= 6);
        CHECK(a == b);
        CHECK(read_file(dir / "run1" / "group_vectors.txt") == read_file(dir / "run2" / "group_vectors.txt"));
        for (const auto* f : {"corr_GRP_A.csv", "corr_GRP_B.csv", "axes_top.csv", "toxicity.csv"})
            CHECK(a.contains(f));
        // Three decades give only two intervals: the transition test is skipped.
        CHECK_FALSE(a.contains("transitions_GRP_A.csv"));
    }

    TEST_CASE("axes report has the top rows of every decade") {
        testing::TempDir dir;
        const auto bundle = cmd_synth(tiny_spec(), dir / "bundle");
        auto c = load_config(bundle.config);
        c.output = dir / "out";
        auto log = quiet_log();
        cmd_scan(c, log);
        cmd_train(c, log);
        const auto axes = analyze_axes(c, log);
        CHECK(axes.top.size() == 3 * c.top_axes);
        const auto corr = analyze_corr(c, log);
        REQUIRE(corr.matrices.size() == 2);
        const auto& m = corr.matrices[0];
        for (std::size_t i = 0; i < m.size(); ++i)
            for (std::size_t j = 0; j < m.size(); ++j) CHECK(m.at(i, j) == m.at(j, i));
    }

    TEST_CASE("decade without a vector file is skipped with a warning") {
        testing::TempDir dir;
        const auto bundle = cmd_synth(tiny_spec(), dir / "bundle");
        auto c = load_config(bundle.config);
        c.output = dir / "out";
        c.vectors.erase(1980);
        auto log = quiet_log();
        cmd_scan(c, log);
        const auto vectors = cmd_train(c, log);
        CHECK(vectors.size() == 4);
        bool warned = false;
        for (const auto& w : log.warnings) warned |= w.find("1980 skipped") != std::string::npos;
        CHECK(warned);
    }

    TEST_CASE("sweep writes one output set per grid cell") {
        testing::TempDir dir;
        const auto bundle = cmd_synth(tiny_spec(), dir / "bundle");
        auto c = load_config(bundle.config);
        c.output = dir / "out";
        c.sweep.k = {300, 600};
        c.sweep.n = {1, 4, 10};
        auto log = quiet_log();
        cmd_scan(c, log);
        cmd_sweep(c, log);
        for (auto k : c.sweep.k)
            for (auto n : c.sweep.n) {
                const auto cell = c.output / "sweep" / ("k" + std::to_string(k) + "_n" + std::to_string(n));
                CHECK(fs::exists(cell / "group_vectors.txt"));
                CHECK(fs::exists(cell / "axes_top.csv"));
            }
    }

    TEST_CASE("parse_analysis") {
        CHECK(parse_analysis("corr") == Analysis::Corr);
        CHECK(parse_analysis("axes") == Analysis::Axes);
        CHECK(parse_analysis("toxicity") == Analysis::Toxicity);
        CHECK(code_of([] { parse_analysis("other"); }) == Errc::InvalidArgument);
    }
}
