#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace grouprep {

std::vector<std::string_view> split(std::string_view text, char delim);
std::vector<std::string_view> split_whitespace(std::string_view text);
std::string_view trim(std::string_view text);
std::string to_lower_ascii(std::string_view text);
std::uint64_t fnv1a64(std::string_view text, std::uint64_t seed = 0xcbf29ce484222325ULL);
std::string hex64(std::uint64_t value);

// Parses a base-10 integer spanning the whole view.
std::optional<std::int64_t> parse_int(std::string_view text);
std::optional<double> parse_real(std::string_view text);

// Fixed-format real used in every CSV the tools write.
std::string format_real(double value, int precision = 6);
// Shortest text that parses back to the identical double.
std::string format_exact(double value);

// Reads lines from a plain or gzip-compressed file (zlib detects which).
class LineReader {
public:
    explicit LineReader(const std::filesystem::path& path);
    ~LineReader();
    LineReader(const LineReader&) = delete;
    LineReader& operator=(const LineReader&) = delete;

    // Next line without the trailing newline / carriage return.
    bool next(std::string& line);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

// Header-addressed delimited text. The delimiter is tab when the header line
// contains one, comma otherwise; comma files honour double-quoted fields.
struct DelimitedTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::optional<std::size_t> column(std::string_view name) const;
};

DelimitedTable read_delimited(const std::filesystem::path& path);
DelimitedTable parse_delimited(std::string_view text);
std::vector<std::string> parse_csv_line(std::string_view line);
std::string csv_escape(std::string_view field);

}  // namespace grouprep
