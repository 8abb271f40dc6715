#include "grouprep/sparql_client.hpp"

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"
#include "json.hpp"

#include "grouprep/error.hpp"
#include "grouprep/io.hpp"

namespace grouprep {

namespace {

std::string clean_field(std::string v) {
    for (char& c : v)
        if (c == '\t' || c == '\n' || c == '\r') c = ' ';
    return v;
}

// Splits "https://host:port/path" into the client base and the request path.
std::pair<std::string, std::string> split_url(const std::string& url) {
    const auto scheme = url.find("://");
    if (scheme == std::string::npos) throw Error(Errc::InvalidArgument, "endpoint must be an absolute URL: " + url);
    const auto slash = url.find('/', scheme + 3);
    if (slash == std::string::npos) return {url, "/"};
    return {url.substr(0, slash), url.substr(slash)};
}

std::string run_query(const FetchRequest& req, FetchResult& result) {
    const auto [base, path] = split_url(req.endpoint);
    httplib::Client client(base);
    client.set_connection_timeout(req.timeout_seconds, 0);
    client.set_read_timeout(req.timeout_seconds, 0);
    client.set_follow_location(true);
    const httplib::Headers headers = {{"Accept", "application/sparql-results+json"},
                                      {"User-Agent", "grouprep-roster-fetch/0.1"}};
    const httplib::Params params = {{"query", req.query}, {"format", "json"}};
    auto res = client.Post(path, headers, params);
    if (!res) {
        throw Error(Errc::EndpointUnreachable, req.endpoint + ": " + httplib::to_string(res.error()));
    }
    result.http_status = res->status;
    if (res->status == 429 || res->status >= 500) {
        throw Error(Errc::EndpointUnreachable, req.endpoint + " answered HTTP " + std::to_string(res->status));
    }
    if (res->status >= 400) {
        throw Error(Errc::QueryRejected, req.endpoint + " answered HTTP " + std::to_string(res->status));
    }
    return res->body;
}

}  // namespace

std::string sparql_json_to_export(std::string_view json_text, std::size_t* rows) {
    using nlohmann::json;
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw Error(Errc::QueryRejected, std::string("response is not JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("results") || !doc["results"].contains("bindings"))
        throw Error(Errc::QueryRejected, "response is not a SPARQL result set");

    auto value = [](const json& binding, std::initializer_list<const char*> names) -> std::string {
        for (const char* n : names) {
            if (binding.contains(n) && binding[n].contains("value")) return binding[n]["value"].get<std::string>();
        }
        return {};
    };

    std::string out = "item\tname\tdob\tethnicLabel\toccupation\n";
    std::size_t count = 0;
    for (const auto& b : doc["results"]["bindings"]) {
        out += clean_field(value(b, {"item"})) + '\t' + clean_field(value(b, {"name", "itemLabel"})) + '\t' +
               clean_field(value(b, {"dob"})) + '\t' + clean_field(value(b, {"ethnicLabel"})) + '\t' +
               clean_field(value(b, {"occupationLabel", "occupation"})) + '\n';
        ++count;
    }
    if (rows) *rows = count;
    return out;
}

FetchResult fetch_roster(const FetchRequest& req) {
    FetchResult result;
    auto use_fixture = [&](const std::string& why) {
        const std::string bytes = read_file(req.fixture);
        write_file(req.output, bytes);
        result.used_fixture = true;
        if (!why.empty()) result.warnings.push_back(why + "; replayed fixture " + req.fixture.string());
        const auto table = parse_delimited(bytes);
        result.rows = table.rows.size();
        return result;
    };

    if (req.endpoint.empty()) {
        if (req.fixture.empty()) throw Error(Errc::InvalidArgument, "offline fetch needs a fixture");
        return use_fixture("");
    }
    try {
        const std::string body = run_query(req, result);
        std::size_t rows = 0;
        const std::string text = sparql_json_to_export(body, &rows);
        write_file(req.output, text);
        result.rows = rows;
        return result;
    } catch (const Error& e) {
        if ((e.code() == Errc::EndpointUnreachable || e.code() == Errc::QueryRejected) && !req.fixture.empty())
            return use_fixture(e.what());
        throw;
    }
}

}  // namespace grouprep
