#include "grouprep/synth.hpp"

#include <zlib.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <set>
#include <unordered_set>

#include "json.hpp"

#include "grouprep/error.hpp"
#include "grouprep/io.hpp"
#include "grouprep/ngram.hpp"
#include "grouprep/rng.hpp"

namespace grouprep {

namespace {

// Stream ids for derive_seed; one per independent random source.
enum Stream : std::uint64_t {
    kWords = 1,
    kNames,
    kDirections,
    kBase,
    kDrift,
    kRoster,
    kCorpus,
    kShuffle,
};

constexpr std::array<std::string_view, 24> kSyllables = {
    "ka", "lo", "mi", "ran", "tu", "vel", "zor", "pe", "qui", "sa", "dov", "ne",
    "bri", "gal", "fen", "hux", "jo", "wer", "yim", "cas", "ob", "ult", "rei", "thon",
};

class WordFactory {
public:
    explicit WordFactory(std::uint64_t seed) : rng_(seed) {
        for (auto sw : bundled_stopwords()) taken_.insert(std::string(sw));
    }

    std::string fresh(std::size_t min_syllables, std::size_t max_syllables) {
        for (;;) {
            const std::size_t n = min_syllables + rng_.below(max_syllables - min_syllables + 1);
            std::string w;
            for (std::size_t i = 0; i < n; ++i) w += kSyllables[rng_.below(kSyllables.size())];
            if (taken_.insert(w).second) return w;
        }
    }

    std::vector<std::string> batch(std::size_t count) {
        std::vector<std::string> out;
        out.reserve(count);
        for (std::size_t i = 0; i < count; ++i) out.push_back(fresh(2, 4));
        return out;
    }

private:
    Rng rng_;
    std::unordered_set<std::string> taken_;
};

std::string capitalize(std::string w) {
    if (!w.empty() && w[0] >= 'a' && w[0] <= 'z') w[0] = static_cast<char>(w[0] - 'a' + 'A');
    return w;
}

Vector random_normal(Rng& rng, std::size_t dim, double scale) {
    Vector v(dim);
    for (auto& x : v) x = rng.normal() * scale;
    return v;
}

Vector random_unit(Rng& rng, std::size_t dim) {
    Vector v = random_normal(rng, dim, 1.0);
    const double n = norm(v);
    for (auto& x : v) x /= n;
    return v;
}

// Orthonormal directions: planted axis, toxic axis, theme eras 0 and 1.
std::array<Vector, 4> planted_directions(const PlantSpec& spec) {
    Rng rng(derive_seed(spec.seed, kDirections));
    std::array<Vector, 4> dirs;
    for (std::size_t i = 0; i < dirs.size(); ++i) {
        Vector v = random_normal(rng, spec.dim, 1.0);
        for (std::size_t j = 0; j < i; ++j) {
            const double p = dot(v, dirs[j]);
            for (std::size_t c = 0; c < v.size(); ++c) v[c] -= p * dirs[j][c];
        }
        const double n = norm(v);
        for (auto& x : v) x /= n;
        dirs[i] = std::move(v);
    }
    return dirs;
}

void add_scaled(Vector& v, const Vector& d, double s) {
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += s * d[i];
}

struct WordVector {
    std::string word;
    Vector base;
};

// Decade-independent vectors of the whole vocabulary, in a fixed order.
std::vector<WordVector> base_vectors(const PlantSpec& spec, const PlantedWords& words) {
    const auto dirs = planted_directions(spec);
    const double sigma = spec.noise / std::sqrt(static_cast<double>(spec.dim));
    Rng rng(derive_seed(spec.seed, kBase));
    std::vector<WordVector> out;

    auto around = [&](const std::vector<std::string>& list, const Vector& centre, double sign) {
        for (const auto& w : list) {
            Vector v = centre;
            for (auto& x : v) x *= sign;
            // Always draw, so that noise 0 and noise > 0 consume the same stream.
            const Vector n = random_normal(rng, spec.dim, sigma);
            add_scaled(v, n, 1.0);
            out.push_back({w, std::move(v)});
        }
    };
    around(words.planted_left, dirs[0], -1.0);
    around(words.planted_right, dirs[0], 1.0);
    around(words.toxic_left, dirs[1], -1.0);
    around(words.toxic_right, dirs[1], 1.0);
    around(words.toxic, dirs[1], 1.0);

    around(words.themes[0], dirs[2], 1.0);
    around(words.themes[1], dirs[3], 1.0);

    auto scattered = [&](const std::vector<std::string>& list) {
        for (const auto& w : list) out.push_back({w, random_unit(rng, spec.dim)});
    };
    for (std::size_t i = 0; i < words.decoy_left.size(); ++i) {
        scattered(words.decoy_left[i]);
        scattered(words.decoy_right[i]);
    }
    scattered(words.filler);
    return out;
}

std::uint64_t pareto_count(Rng& rng, double alpha, std::uint64_t cap) {
    const double u = rng.uniform();
    const double x = std::floor(std::pow(1.0 - u, -1.0 / alpha));
    return std::clamp<std::uint64_t>(static_cast<std::uint64_t>(std::min(x, 1e18)), 1, cap);
}

const std::array<std::string_view, 2> kLabelsA = {"Alpha Americans", "Alpha Islander Americans"};
const std::array<std::string_view, 2> kLabelsB = {"Beta Americans", "Beta Nordic Americans"};
constexpr std::string_view kUnmappedLabel = "Gamma Americans";
constexpr std::size_t kOtherPersons = 2;
constexpr std::size_t kOtherLinesPerDecade = 40;
constexpr std::size_t kContextSlots = kNgramOrder - 2;

void write_gzip(const std::filesystem::path& path, std::string_view content) {
    std::filesystem::create_directories(path.parent_path());
    gzFile f = gzopen(path.string().c_str(), "wb9");
    if (!f) throw Error(Errc::IoError, "cannot open " + path.string());
    // gzopen writes no file name and a zero mtime, so output is reproducible.
    const int written = gzwrite(f, content.data(), static_cast<unsigned>(content.size()));
    gzclose(f);
    if (written != static_cast<int>(content.size())) throw Error(Errc::IoError, "short write to " + path.string());
}

}  // namespace

void PlantSpec::validate() const {
    auto bad = [](const std::string& msg) { throw Error(Errc::InvalidConfig, "synth: " + msg); };
    if (dim < 8) bad("dim must be at least 8");
    if (decades.empty()) bad("no decades");
    for (std::size_t i = 1; i < decades.size(); ++i)
        if (decades[i] != decades[i - 1] + 10) bad("decades must be consecutive");
    if (group_a.empty() || group_b.empty() || group_a == group_b) bad("two distinct group names required");
    for (double p : {bias_a, bias_b, theme_share, toxic_rate_b, toxic_rate_a()})
        if (!(p >= 0.0 && p <= 1.0)) bad("probabilities must lie in [0, 1]");
    if (toxic_rate_a() + theme_share > 1.0 || toxic_rate_b + theme_share > 1.0)
        bad("toxic rate plus theme share exceeds 1");
    if (pole_words < kMinPoleWords || decoy_pole_words < kMinPoleWords) bad("poles need at least 3 words");
    if (theme_words == 0 || toxic_words == 0) bad("theme and toxic word counts must be positive");
    if (persons_per_group == 0 || ngrams_per_group_per_decade == 0 || shards == 0) bad("counts must be positive");
    if (noise < 0.0 || decade_drift < 0.0) bad("noise must be non-negative");
    if (break_after >= static_cast<int>(decades.size()) - 1) bad("break_after beyond the last interval");
    if (!(pareto_alpha > 0.0) || max_match_count == 0) bad("bad match-count distribution");
    if (planted_axis == toxic_axis) bad("planted and toxic axis ids must differ");
}

PlantedWords planted_words(const PlantSpec& spec) {
    WordFactory f(derive_seed(spec.seed, kWords));
    PlantedWords w;
    w.planted_left = f.batch(spec.pole_words);
    w.planted_right = f.batch(spec.pole_words);
    w.toxic_left = f.batch(spec.pole_words);
    w.toxic_right = f.batch(spec.pole_words);
    w.toxic = f.batch(spec.toxic_words);
    w.themes.push_back(f.batch(spec.theme_words));
    w.themes.push_back(f.batch(spec.theme_words));
    for (std::size_t i = 0; i < spec.decoy_axes; ++i) {
        w.decoy_left.push_back(f.batch(spec.decoy_pole_words));
        w.decoy_right.push_back(f.batch(spec.decoy_pole_words));
    }
    w.filler = f.batch(spec.filler_words);
    return w;
}

std::vector<SemanticAxis> gen_axes(const PlantSpec& spec) {
    const PlantedWords w = planted_words(spec);
    std::vector<SemanticAxis> axes;
    axes.push_back({spec.planted_axis, w.planted_left, w.planted_right});
    axes.push_back({spec.toxic_axis, w.toxic_left, w.toxic_right});
    for (std::size_t i = 0; i < spec.decoy_axes; ++i) {
        char id[32];
        std::snprintf(id, sizeof id, "decoy.a.%02zu", i + 1);
        axes.push_back({id, w.decoy_left[i], w.decoy_right[i]});
    }
    return axes;
}

EmbeddingSpace gen_space(const PlantSpec& spec, std::size_t decade_index) {
    spec.validate();
    if (decade_index >= spec.decades.size()) throw Error(Errc::InvalidArgument, "decade index out of range");
    const PlantedWords words = planted_words(spec);
    auto vectors = base_vectors(spec, words);

    if (spec.decade_drift > 0.0) {
        Rng rng(derive_seed(derive_seed(spec.seed, kDrift), decade_index));
        const double sigma = spec.decade_drift / std::sqrt(static_cast<double>(spec.dim));
        for (auto& wv : vectors) add_scaled(wv.base, random_normal(rng, spec.dim, sigma), 1.0);
    }
    EmbeddingSpace space(spec.decades[decade_index], spec.dim);
    for (const auto& wv : vectors) space.set(wv.word, wv.base);
    return space;
}

std::vector<SynthPerson> gen_roster(const PlantSpec& spec) {
    spec.validate();
    // Name parts are checked against the vocabulary so that no lowercased
    // name token collides with a context word.
    const PlantedWords vocab = planted_words(spec);
    Rng rng(derive_seed(spec.seed, kRoster));
    WordFactory names(derive_seed(spec.seed, kNames));
    std::set<std::string> vocabulary;
    auto remember = [&](const std::vector<std::string>& list) { vocabulary.insert(list.begin(), list.end()); };
    remember(vocab.planted_left);
    remember(vocab.planted_right);
    remember(vocab.toxic_left);
    remember(vocab.toxic_right);
    remember(vocab.toxic);
    for (const auto& t : vocab.themes) remember(t);
    for (const auto& d : vocab.decoy_left) remember(d);
    for (const auto& d : vocab.decoy_right) remember(d);
    remember(vocab.filler);

    auto name_part = [&] {
        for (;;) {
            std::string n = names.fresh(2, 3);
            if (!vocabulary.contains(n)) return capitalize(n);
        }
    };

    std::vector<SynthPerson> persons;
    auto add = [&](const std::string& group, std::string_view label) {
        SynthPerson p;
        p.first = name_part();
        p.last = name_part();
        p.group = group;
        p.ethnic_label = std::string(label);
        p.birth_year = spec.decades.front() - 30 - static_cast<int>(rng.below(30));
        persons.push_back(std::move(p));
    };
    for (std::size_t i = 0; i < spec.persons_per_group; ++i) add(spec.group_a, kLabelsA[i % kLabelsA.size()]);
    for (std::size_t i = 0; i < spec.persons_per_group; ++i) add(spec.group_b, kLabelsB[i % kLabelsB.size()]);
    for (std::size_t i = 0; i < kOtherPersons; ++i) add(std::string(kOtherGroup), kUnmappedLabel);
    return persons;
}

std::vector<CorpusLine> gen_corpus(const PlantSpec& spec, const std::vector<SynthPerson>& roster) {
    spec.validate();
    const PlantedWords words = planted_words(spec);
    Rng rng(derive_seed(spec.seed, kCorpus));

    std::map<std::string, std::vector<const SynthPerson*>> by_group;
    for (const auto& p : roster) by_group[p.group].push_back(&p);

    auto pick = [&](const std::vector<std::string>& list) -> const std::string& { return list[rng.below(list.size())]; };

    std::vector<CorpusLine> lines;
    auto emit = [&](std::size_t d, const std::string& group, double bias, double toxic_rate, std::size_t count) {
        const auto it = by_group.find(group);
        if (it == by_group.end() || it->second.empty()) return;
        const bool late = spec.break_after >= 0 && static_cast<int>(d) > spec.break_after;
        const auto& theme = words.themes[late ? 1 : 0];
        for (std::size_t i = 0; i < count; ++i) {
            const SynthPerson& person = *it->second[rng.below(it->second.size())];
            CorpusLine line;
            line.group = group;
            line.decade_index = d;
            line.text = person.first + ' ' + person.last;
            for (std::size_t s = 0; s < kContextSlots; ++s) {
                const double u = rng.uniform();
                SlotKind kind;
                const std::string* w;
                if (u < toxic_rate) {
                    kind = SlotKind::Toxic;
                    w = &pick(words.toxic);
                } else if (u < toxic_rate + spec.theme_share) {
                    kind = SlotKind::Theme;
                    w = &pick(theme);
                } else if (rng.uniform() < bias) {
                    kind = SlotKind::PoleRight;
                    w = &pick(words.planted_right);
                } else {
                    kind = SlotKind::PoleLeft;
                    w = &pick(words.planted_left);
                }
                line.slots.push_back(kind);
                line.text += ' ';
                line.text += *w;
                // Some tokens carry a part-of-speech suffix, as in the real corpus.
                if (rng.below(20) == 0) line.text += "_ADJ";
            }
            const int year = spec.decades[d] + static_cast<int>(rng.below(10));
            const std::uint64_t match = pareto_count(rng, spec.pareto_alpha, spec.max_match_count);
            const std::uint64_t volume = 1 + rng.below(match);
            line.text += '\t' + std::to_string(year) + ',' + std::to_string(match) + ',' + std::to_string(volume);
            lines.push_back(std::move(line));
        }
    };
    for (std::size_t d = 0; d < spec.decades.size(); ++d) {
        emit(d, spec.group_a, spec.bias_a, spec.toxic_rate_a(), spec.ngrams_per_group_per_decade);
        emit(d, spec.group_b, spec.bias_b, spec.toxic_rate_b, spec.ngrams_per_group_per_decade);
        emit(d, std::string(kOtherGroup), 0.5, spec.toxic_rate_b, kOtherLinesPerDecade);
    }
    return lines;
}

BundlePaths write_bundle(const PlantSpec& spec, const std::filesystem::path& dir) {
    spec.validate();
    namespace fs = std::filesystem;
    using nlohmann::ordered_json;

    BundlePaths paths;
    paths.root = dir;
    fs::create_directories(dir);

    const auto roster = gen_roster(spec);
    const auto corpus = gen_corpus(spec, roster);
    const PlantedWords words = planted_words(spec);

    // Corpus shards: lines shuffled, then dealt round-robin.
    std::vector<std::size_t> order(corpus.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    Rng shuffle_rng(derive_seed(spec.seed, kShuffle));
    shuffle_rng.shuffle(order);
    std::vector<std::string> shard_text(spec.shards);
    for (std::size_t i = 0; i < order.size(); ++i) {
        auto& out = shard_text[i % spec.shards];
        out += corpus[order[i]].text;
        out += '\n';
    }
    for (std::size_t s = 0; s < spec.shards; ++s) {
        char name[32];
        std::snprintf(name, sizeof name, "shard-%03zu.tsv%s", s, spec.gzip_shards ? ".gz" : "");
        const fs::path p = dir / "corpus" / name;
        if (spec.gzip_shards)
            write_gzip(p, shard_text[s]);
        else
            write_file(p, shard_text[s]);
        paths.shards.push_back(p);
    }

    std::string roster_text = "item\tname\tdob\tethnicLabel\toccupation\n";
    for (std::size_t i = 0; i < roster.size(); ++i) {
        const auto& p = roster[i];
        roster_text += "Q" + std::to_string(900000 + i) + '\t' + p.first + ' ' + p.last + '\t' +
                       std::to_string(p.birth_year) + "-01-01T00:00:00Z\t" + p.ethnic_label + '\t' +
                       (i % 3 == 0 ? "writer" : i % 3 == 1 ? "politician" : "musician") + '\n';
    }
    paths.roster = dir / "roster.tsv";
    write_file(paths.roster, roster_text);

    std::string map_text = "# source label\tgroup\n";
    for (auto l : kLabelsA) map_text += std::string(l) + '\t' + spec.group_a + '\n';
    for (auto l : kLabelsB) map_text += std::string(l) + '\t' + spec.group_b + '\n';
    map_text += "*\t" + std::string(kOtherGroup) + '\n';
    paths.group_map = dir / "group_map.tsv";
    write_file(paths.group_map, map_text);

    paths.axes = dir / "axes.tsv";
    write_file(paths.axes, serialize_axes(gen_axes(spec)));

    // Conservative rows are the planted toxic words; a few inclusive-only
    // rows must be filtered out by the level filter.
    std::string lex = "id\tpos\tcategory\tstereotype\tlemma\tlevel\n";
    const std::array<std::string_view, 3> categories = {"ps", "om", "asf"};
    for (std::size_t i = 0; i < words.toxic.size(); ++i)
        lex += "EN" + std::to_string(1000 + i) + "\tn\t" + std::string(categories[i % categories.size()]) + "\tno\t" +
               words.toxic[i] + "\tconservative\n";
    for (std::size_t i = 0; i < std::min<std::size_t>(4, words.filler.size()); ++i)
        lex += "EN" + std::to_string(2000 + i) + "\ta\tqas\tno\t" + words.filler[i] + "\tinclusive\n";
    paths.lexicon = dir / "lexicon.tsv";
    write_file(paths.lexicon, lex);

    for (std::size_t d = 0; d < spec.decades.size(); ++d) {
        const fs::path p = dir / "vectors" / (std::to_string(spec.decades[d]) + ".txt");
        write_file(p, serialize_space(gen_space(spec, d)));
        paths.vectors[spec.decades[d]] = p;
    }

    ordered_json spec_json = {
        {"dim", spec.dim},
        {"decades", spec.decades},
        {"group_a", spec.group_a},
        {"group_b", spec.group_b},
        {"pole_words", spec.pole_words},
        {"decoy_axes", spec.decoy_axes},
        {"decoy_pole_words", spec.decoy_pole_words},
        {"theme_words", spec.theme_words},
        {"toxic_words", spec.toxic_words},
        {"filler_words", spec.filler_words},
        {"persons_per_group", spec.persons_per_group},
        {"ngrams_per_group_per_decade", spec.ngrams_per_group_per_decade},
        {"shards", spec.shards},
        {"gzip_shards", spec.gzip_shards},
        {"bias_a", spec.bias_a},
        {"bias_b", spec.bias_b},
        {"theme_share", spec.theme_share},
        {"toxic_rate_b", spec.toxic_rate_b},
        {"toxic_multiplier_a", spec.toxic_multiplier_a},
        {"noise", spec.noise},
        {"decade_drift", spec.decade_drift},
        {"break_after", spec.break_after},
        {"pareto_alpha", spec.pareto_alpha},
        {"max_match_count", spec.max_match_count},
        {"train_k", spec.train_k},
        {"train_n", spec.train_n},
        {"seed", spec.seed},
        {"planted_axis", spec.planted_axis},
        {"toxic_axis", spec.toxic_axis},
    };
    ordered_json truth = {
        {"planted_axis", spec.planted_axis},
        {"expected_pole", {{spec.group_a, spec.bias_a >= spec.bias_b ? "right" : "left"},
                           {spec.group_b, spec.bias_a >= spec.bias_b ? "left" : "right"}}},
        {"toxic_axis", spec.toxic_axis},
        {"toxic_group", spec.toxic_multiplier_a >= 1.0 ? spec.group_a : spec.group_b},
        {"toxic_words", words.toxic},
        {"break_interval", spec.break_after < 0
                               ? ordered_json(nullptr)
                               : ordered_json::array({spec.decades[static_cast<std::size_t>(spec.break_after)],
                                                      spec.decades[static_cast<std::size_t>(spec.break_after) + 1]})},
        {"corpus_lines", corpus.size()},
    };
    ordered_json manifest = {{"spec", spec_json}, {"ground_truth", truth}};
    paths.manifest = dir / "manifest.json";
    write_file(paths.manifest, manifest.dump(2) + '\n');

    ordered_json shard_list = ordered_json::array();
    for (const auto& p : paths.shards) shard_list.push_back(fs::relative(p, dir).generic_string());
    ordered_json vec_map = ordered_json::object();
    for (const auto& [decade, p] : paths.vectors) vec_map[std::to_string(decade)] = fs::relative(p, dir).generic_string();

    ordered_json config = {
        {"seed", spec.seed},
        {"workers", 0},
        {"decades", {{"first", spec.decades.front()}, {"last", spec.decades.back()}}},
        {"groups", {spec.group_a, spec.group_b}},
        {"paths",
         {{"shards", shard_list},
          {"roster", "roster.tsv"},
          {"group_map", "group_map.tsv"},
          {"vectors", vec_map},
          {"axes", "axes.tsv"},
          {"lexicon", "lexicon.tsv"},
          {"output", "out"}}},
        {"trainer",
         {{"k", spec.train_k},
          {"n", spec.train_n},
          {"margin", 0.5},
          {"floor", 1e-5},
          {"learning_rate", 0.1},
          {"epochs", 5},
          {"init_scale", 0.01}}},
        {"lexicon_level", "conservative"},
        {"anchor_decade", spec.decades.back()},
        {"top_axes", 2},
        {"toxic_axes", 10},
        {"sweep", {{"k", {spec.train_k, 2 * spec.train_k}}, {"n", {1, 4}}}},
    };
    paths.config = dir / "config.json";
    write_file(paths.config, config.dump(2) + '\n');
    return paths;
}

std::map<std::string, double> oracle_distribution(const ContextTable& self, const ContextTable& other,
                                                  const EmbeddingSpace& space, SampleRole role, double floor) {
    // Walks the space vocabulary rather than the tables, and accumulates in
    // long double, so it shares no code path with build_distribution.
    const ContextTable& source = role == SampleRole::Positive ? self : other;
    const long double self_total = static_cast<long double>(self.total_weight());
    const long double other_total = static_cast<long double>(other.total_weight());
    if (self_total == 0 || other_total == 0) throw Error(Errc::EmptyTable, "oracle: empty table");

    std::map<std::string, long double> raw;
    for (std::size_t i = 0; i < space.size(); ++i) {
        const std::string& word = space.words()[i];
        if (source.count(word) == 0) continue;
        const auto row = space.row(i);
        if (std::all_of(row.begin(), row.end(), [](double x) { return x == 0.0; })) continue;
        const long double fs = static_cast<long double>(self.count(word)) / self_total;
        const long double fo = static_cast<long double>(other.count(word)) / other_total;
        const long double eps = floor;
        const long double w = role == SampleRole::Positive ? fs / std::max(fo, eps) : fo / std::max(fs, eps);
        raw[word] = w;
    }
    long double total = 0;
    for (const auto& [w, x] : raw) total += x;
    if (raw.empty() || total <= 0) throw Error(Errc::DegenerateDistribution, "oracle: all weights zero");
    std::map<std::string, double> out;
    for (const auto& [w, x] : raw) out[w] = static_cast<double>(x / total);
    return out;
}

}  // namespace grouprep
