#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "grouprep/roster.hpp"

namespace grouprep {

inline constexpr std::size_t kNgramOrder = 5;

struct YearEntry {
    int year = 0;
    std::uint64_t match_count = 0;
    std::uint64_t volume_count = 0;

    friend bool operator==(const YearEntry&, const YearEntry&) = default;
};

struct NgramRecord {
    std::vector<std::string> tokens;  // exactly kNgramOrder
    std::vector<YearEntry> years;     // strictly increasing
};

// Non-allocating form of one corpus line; views point into the line.
struct NgramView {
    std::array<std::string_view, kNgramOrder> tokens;
    std::vector<YearEntry> years;
};

// Returns nullptr on success, otherwise a static description of the defect.
const char* parse_ngram_view(std::string_view line, NgramView& out);

// "w1 w2 w3 w4 w5<TAB>year,match,volume<TAB>..." Throws Errc::MalformedLine.
NgramRecord parse_ngram_line(std::string_view line);

// Version tag of the bundled English stopword list.
inline constexpr std::string_view kStopwordListVersion = "en-179-v1";
const std::vector<std::string_view>& bundled_stopwords();

struct CleaningRules {
    std::unordered_set<std::string, StringHash, std::equal_to<>> stopwords;
    // Part-of-speech tags as they appear in the corpus, e.g. NOUN in "run_NOUN"
    // and "_NOUN_". START/END/ROOT cover the sentence-boundary placeholders.
    std::set<std::string, std::less<>> pos_tags;

    static CleaningRules defaults();
    // One stopword per line; replaces the bundled list.
    static CleaningRules with_stopword_file(const std::string& path);

    bool is_placeholder(std::string_view token) const;
    // Word part of "word_TAG", or nullopt when the token carries no tag suffix.
    std::optional<std::string_view> strip_suffix(std::string_view token) const;
    static bool is_number(std::string_view token);
};

// Cleaned lowercase word, or nullopt for DROP.
std::optional<std::string> clean_token(std::string_view token, const CleaningRules& rules);

constexpr int bucket_by_decade(int year) noexcept { return year / 10 * 10; }

// Inclusive range of decade start years.
struct DecadeRange {
    int first = 1850;
    int last = 1990;

    bool contains(int decade) const noexcept { return decade >= first && decade <= last && decade % 10 == 0; }
    std::vector<int> decades() const;
};

enum class GateResult { Accept, Reject, AcceptUnknownBirth };

// A person can be written about from the year they turn ten.
constexpr GateResult birth_gate(std::optional<int> birth_year, int year) noexcept {
    if (!birth_year) return GateResult::AcceptUnknownBirth;
    return year >= *birth_year + 10 ? GateResult::Accept : GateResult::Reject;
}

struct NameMatch {
    std::size_t person = 0;  // index into the roster's persons
    std::size_t begin = 0;   // token span [begin, end)
    std::size_t end = 0;

    friend bool operator==(const NameMatch&, const NameMatch&) = default;
};

// Every adjacent run of raw tokens that equals an indexed full name.
std::vector<NameMatch> match_person(std::span<const std::string_view> tokens, const RosterIndex& index);
std::vector<NameMatch> match_person(const std::vector<std::string>& tokens, const RosterIndex& index);

struct ContextEvent {
    int decade = 0;
    std::string group;
    std::string word;
    std::uint64_t weight = 0;
    std::string person_id;

    friend bool operator==(const ContextEvent&, const ContextEvent&) = default;
};

// Cleaned words outside the name span, excluding any that equal a cleaned
// name token.
std::vector<std::string> context_words(const NgramRecord& record, const NameMatch& match, const CleaningRules& rules);

// One event per (context word, year entry). The birth gate is not applied
// here; scan_corpus filters year entries before calling this.
std::vector<ContextEvent> extract_context(const NgramRecord& record, const NameMatch& match, const CleaningRules& rules,
                                          const std::string& group, const std::string& person_id);

}  // namespace grouprep
