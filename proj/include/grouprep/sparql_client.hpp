#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace grouprep {

struct FetchRequest {
    std::string endpoint;  // e.g. https://query.wikidata.org/sparql; empty = offline
    std::string query;
    std::filesystem::path fixture;  // optional fallback / offline source
    std::filesystem::path output;
    int timeout_seconds = 60;
};

struct FetchResult {
    bool used_fixture = false;
    int http_status = 0;  // 0 when no response was received
    std::size_t rows = 0;
    std::vector<std::string> warnings;
};

// Converts a SPARQL JSON result document into the roster export format
// (tab-separated, header item, name, dob, ethnicLabel, occupation).
// Throws Errc::QueryRejected when the document is not a result set.
std::string sparql_json_to_export(std::string_view json_text, std::size_t* rows = nullptr);

// Runs the query and writes the export. On Errc::EndpointUnreachable (no
// connection, 429, 5xx) or Errc::QueryRejected (other 4xx, unreadable
// body) the fixture is copied byte for byte instead, when one is given;
// otherwise the error propagates.
FetchResult fetch_roster(const FetchRequest& request);

}  // namespace grouprep
