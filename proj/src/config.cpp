#include "grouprep/config.hpp"

#include <set>

#include "json.hpp"

#include "grouprep/error.hpp"
#include "grouprep/io.hpp"

namespace grouprep {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void check_keys(const json& obj, std::string_view where, std::initializer_list<std::string_view> allowed) {
    const std::set<std::string_view> ok(allowed);
    for (const auto& [key, _] : obj.items()) {
        if (!ok.contains(key)) throw Error(Errc::InvalidConfig, "unknown key '" + key + "' in " + std::string(where));
    }
}

fs::path resolve(const fs::path& base, const std::string& p) {
    if (p.empty()) return {};
    const fs::path path(p);
    return (path.is_absolute() ? path : base / path).lexically_normal();
}

template <typename T>
void read(const json& obj, const char* key, T& out) {
    if (obj.contains(key) && !obj.at(key).is_null()) out = obj.at(key).get<T>();
}

}  // namespace

void require_path(const fs::path& path, std::string_view what) {
    if (path.empty()) throw Error(Errc::InvalidConfig, std::string(what) + " path is not set");
    if (!fs::exists(path)) throw Error(Errc::InvalidConfig, std::string(what) + " not found: " + path.string());
}

void RunConfig::validate() const {
    if (decades.first > decades.last || decades.first % 10 != 0 || decades.last % 10 != 0)
        throw Error(Errc::InvalidConfig, "decade range must be non-empty and aligned to decades");
    if (groups.size() != 2 || groups[0] == groups[1])
        throw Error(Errc::InvalidConfig, "exactly two distinct groups are required");
    for (const auto& g : groups)
        if (g == kOtherGroup) throw Error(Errc::InvalidConfig, "OTHER cannot be an analysis group");
    trainer.validate();
    if (top_axes == 0) throw Error(Errc::InvalidConfig, "top_axes must be positive");
    if (toxic_axes == 0) throw Error(Errc::InvalidConfig, "toxic_axes must be positive");
    for (auto k : sweep.k)
        if (k == 0) throw Error(Errc::InvalidConfig, "sweep k values must be positive");
    if (anchor_decade % 10 != 0) throw Error(Errc::InvalidConfig, "anchor_decade must be a decade start");
}

std::string RunConfig::canonical_json() const {
    // Paths relative to the config file, so a relocated bundle hashes the same.
    auto rel = [&](const fs::path& p) {
        if (p.empty() || base_dir.empty()) return p.generic_string();
        return p.lexically_relative(base_dir).generic_string();
    };
    json j;
    j["seed"] = seed;
    j["decades"] = {decades.first, decades.last};
    j["groups"] = groups;
    std::vector<std::string> sh;
    for (const auto& s : shards) sh.push_back(rel(s));
    j["shards"] = sh;
    j["roster"] = rel(roster);
    j["group_map"] = rel(group_map);
    j["overrides"] = rel(overrides);
    j["stopwords"] = rel(stopwords);
    json vec = json::object();
    for (const auto& [d, p] : vectors) vec[std::to_string(d)] = rel(p);
    j["vectors"] = vec;
    j["axes"] = rel(axes);
    j["lexicon"] = rel(lexicon);
    j["trainer"] = {{"k", trainer.k},
                    {"n", trainer.n},
                    {"margin", trainer.margin},
                    {"floor", trainer.floor},
                    {"learning_rate", trainer.learning_rate},
                    {"epochs", trainer.epochs},
                    {"init_scale", trainer.init_scale}};
    j["lexicon_level"] = lexicon_level;
    j["anchor_decade"] = anchor_decade;
    j["top_axes"] = top_axes;
    j["toxic_axes"] = toxic_axes;
    j["sweep"] = {{"k", sweep.k}, {"n", sweep.n}};
    // The output directory and worker count do not change results.
    return j.dump();
}

std::string RunConfig::hash() const { return hex64(fnv1a64(canonical_json())); }

RunConfig parse_config(std::string_view json_text, const fs::path& base_dir) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw Error(Errc::InvalidConfig, std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw Error(Errc::InvalidConfig, "config must be a JSON object");

    RunConfig c;
    c.base_dir = base_dir;
    try {
        check_keys(j, "config",
                   {"seed", "workers", "decades", "groups", "paths", "trainer", "lexicon_level", "anchor_decade",
                    "top_axes", "toxic_axes", "sweep", "plots", "fetch"});
        read(j, "seed", c.seed);
        read(j, "workers", c.workers);
        if (j.contains("decades")) {
            const auto& d = j.at("decades");
            check_keys(d, "decades", {"first", "last"});
            read(d, "first", c.decades.first);
            read(d, "last", c.decades.last);
        }
        read(j, "groups", c.groups);

        if (j.contains("paths")) {
            const auto& p = j.at("paths");
            check_keys(p, "paths",
                       {"shards", "roster", "group_map", "overrides", "stopwords", "vectors", "axes", "lexicon",
                        "output"});
            if (p.contains("shards"))
                for (const auto& sh : p.at("shards")) c.shards.push_back(resolve(base_dir, sh.get<std::string>()));
            auto path_field = [&](const char* key, fs::path& out) {
                std::string v;
                read(p, key, v);
                if (!v.empty()) out = resolve(base_dir, v);
            };
            path_field("roster", c.roster);
            path_field("group_map", c.group_map);
            path_field("overrides", c.overrides);
            path_field("stopwords", c.stopwords);
            path_field("axes", c.axes);
            path_field("lexicon", c.lexicon);
            c.output = resolve(base_dir, "out");
            path_field("output", c.output);
            if (p.contains("vectors")) {
                for (const auto& [key, val] : p.at("vectors").items()) {
                    const auto decade = parse_int(key);
                    if (!decade) throw Error(Errc::InvalidConfig, "vector key '" + key + "' is not a decade");
                    c.vectors[static_cast<int>(*decade)] = resolve(base_dir, val.get<std::string>());
                }
            }
        } else {
            c.output = resolve(base_dir, "out");
        }

        if (j.contains("trainer")) {
            const auto& t = j.at("trainer");
            check_keys(t, "trainer", {"k", "n", "margin", "floor", "learning_rate", "epochs", "init_scale"});
            read(t, "k", c.trainer.k);
            read(t, "n", c.trainer.n);
            read(t, "margin", c.trainer.margin);
            read(t, "floor", c.trainer.floor);
            read(t, "learning_rate", c.trainer.learning_rate);
            read(t, "epochs", c.trainer.epochs);
            read(t, "init_scale", c.trainer.init_scale);
        }
        c.trainer.seed = c.seed;
        read(j, "lexicon_level", c.lexicon_level);
        c.anchor_decade = c.decades.last;
        read(j, "anchor_decade", c.anchor_decade);
        read(j, "top_axes", c.top_axes);
        read(j, "toxic_axes", c.toxic_axes);
        read(j, "plots", c.plots);
        if (j.contains("sweep")) {
            const auto& s = j.at("sweep");
            check_keys(s, "sweep", {"k", "n"});
            read(s, "k", c.sweep.k);
            read(s, "n", c.sweep.n);
        }
        if (j.contains("fetch")) {
            const auto& f = j.at("fetch");
            check_keys(f, "fetch", {"endpoint", "query", "fixture", "timeout_seconds"});
            read(f, "endpoint", c.fetch.endpoint);
            std::string q, fx;
            read(f, "query", q);
            read(f, "fixture", fx);
            c.fetch.query = resolve(base_dir, q);
            c.fetch.fixture = resolve(base_dir, fx);
            read(f, "timeout_seconds", c.fetch.timeout_seconds);
        }
    } catch (const json::exception& e) {
        throw Error(Errc::InvalidConfig, std::string("config field has the wrong type: ") + e.what());
    }
    c.validate();
    return c;
}

RunConfig load_config(const fs::path& path) {
    std::string text;
    try {
        text = read_file(path);
    } catch (const Error&) {
        throw Error(Errc::InvalidConfig, "cannot read config " + path.string());
    }
    return parse_config(text, fs::absolute(path).parent_path());
}

}  // namespace grouprep
