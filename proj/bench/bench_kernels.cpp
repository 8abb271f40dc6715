// Times the OpenMP kernels against their serial references on a synthetic bundle.
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>

#include "CLI11.hpp"
#include "grouprep/pipeline.hpp"

using namespace grouprep;
namespace fs = std::filesystem;

namespace {

double best_of(int reps, const std::function<void()>& fn) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    }
    return best;
}

void row(const char* name, double serial, double parallel, bool same) {
    std::printf("%-22s serial %8.3f s  parallel %8.3f s  speedup %5.2fx  %s\n", name, serial, parallel,
                serial / parallel, same ? "identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"serial vs parallel kernel benchmark"};
    PlantSpec spec;
    spec.dim = 100;
    spec.ngrams_per_group_per_decade = 50'000;
    spec.decades = {1950, 1960, 1970, 1980, 1990};
    int reps = 3, workers = 0;
    std::uint64_t k = 100'000;
    fs::path dir = fs::temp_directory_path() / "grouprep_bench";
    app.add_option("--ngrams", spec.ngrams_per_group_per_decade, "n-grams per group per decade");
    app.add_option("--dim", spec.dim, "vector dimension");
    app.add_option("--k", k, "positive samples per training");
    app.add_option("--reps", reps, "repetitions, best time kept");
    app.add_option("--workers", workers, "OpenMP workers (0 = default)");
    app.add_option("--dir", dir, "scratch directory");
    CLI11_PARSE(app, argc, argv);

    fs::remove_all(dir);
    const auto bundle = write_bundle(spec, dir);
    RunConfig config = load_config(bundle.config);
    RunLog log;
    log.quiet = true;
    const auto roster = load_roster(config, log);
    ScanOptions options;
    options.decades = config.decades;

    ScanResult serial_scan, parallel_scan;
    const double s1 = best_of(reps, [&] { serial_scan = scan_corpus_serial(config.shards, roster.roster, options); });
    const double p1 = best_of(reps, [&] { parallel_scan = scan_corpus(config.shards, roster.roster, options, workers); });
    row("scan_corpus", s1, p1, serial_scan.tables == parallel_scan.tables);

    std::map<int, EmbeddingSpace> spaces;
    std::vector<DecadeJob> jobs;
    for (const auto& [decade, path] : bundle.vectors) {
        const auto a = parallel_scan.tables.find({decade, config.groups[0]});
        const auto b = parallel_scan.tables.find({decade, config.groups[1]});
        if (a == parallel_scan.tables.end() || b == parallel_scan.tables.end()) continue;
        spaces.emplace(decade, load_space(path, decade));
        jobs.push_back({decade, &a->second, &b->second});
    }
    const SpaceLoader loader = [&spaces](int decade) { return spaces.at(decade); };
    TrainerConfig trainer = config.trainer;
    trainer.k = k;
    std::vector<DecadeTraining> serial_train, parallel_train;
    const double s2 = best_of(reps, [&] { serial_train = train_decades_serial(jobs, loader, trainer); });
    const double p2 = best_of(reps, [&] { parallel_train = train_decades(jobs, loader, trainer, workers); });
    bool same = serial_train.size() == parallel_train.size();
    for (std::size_t i = 0; same && i < serial_train.size(); ++i)
        same = serial_train[i].a.vector == parallel_train[i].a.vector &&
               serial_train[i].b.vector == parallel_train[i].b.vector;
    row("train_decades", s2, p2, same);

    const auto& anchor = spaces.rbegin()->second;
    const auto lexicon = load_lexicon(bundle.lexicon, "conservative");
    const auto axes = load_axes(bundle.axes);
    std::vector<AxisAffinity> serial_aff, parallel_aff;
    const double s3 = best_of(reps, [&] { serial_aff = score_axes_by_toxic_affinity_serial(anchor, lexicon, axes); });
    const double p3 = best_of(reps, [&] { parallel_aff = score_axes_by_toxic_affinity(anchor, lexicon, axes, workers); });
    row("toxic_affinity", s3, p3, serial_aff == parallel_aff);

    fs::remove_all(dir);
    return 0;
}
