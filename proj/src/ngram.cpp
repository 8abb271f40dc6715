#include "grouprep/ngram.hpp"

#include <algorithm>

#include "grouprep/error.hpp"
#include "grouprep/io.hpp"

namespace grouprep {

namespace {

bool parse_u64(std::string_view text, std::uint64_t& out) {
    if (text.empty()) return false;
    std::uint64_t v = 0;
    for (char c : text) {
        if (c < '0' || c > '9') return false;
        const std::uint64_t next = v * 10 + static_cast<std::uint64_t>(c - '0');
        if (next / 10 != v) return false;
        v = next;
    }
    out = v;
    return true;
}

}  // namespace

const char* parse_ngram_view(std::string_view line, NgramView& out) {
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.remove_suffix(1);
    const std::size_t tab = line.find('\t');
    if (tab == std::string_view::npos) return "no year entries";

    const std::string_view ngram = line.substr(0, tab);
    std::size_t n = 0;
    std::size_t start = 0;
    while (true) {
        const std::size_t sp = ngram.find(' ', start);
        const std::string_view tok = ngram.substr(start, sp == std::string_view::npos ? std::string_view::npos : sp - start);
        if (tok.empty()) return "empty token";
        if (n == kNgramOrder) return "expected 5 tokens";
        out.tokens[n++] = tok;
        if (sp == std::string_view::npos) break;
        start = sp + 1;
    }
    if (n != kNgramOrder) return "expected 5 tokens";

    out.years.clear();
    std::size_t pos = tab + 1;
    while (true) {
        const std::size_t next = line.find('\t', pos);
        const std::string_view field = line.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos);
        const std::size_t c1 = field.find(',');
        const std::size_t c2 = c1 == std::string_view::npos ? c1 : field.find(',', c1 + 1);
        if (c2 == std::string_view::npos || field.find(',', c2 + 1) != std::string_view::npos) {
            return "year entry needs year,match,volume";
        }
        std::uint64_t year = 0;
        YearEntry e;
        if (!parse_u64(field.substr(0, c1), year) || year > 100000 ||
            !parse_u64(field.substr(c1 + 1, c2 - c1 - 1), e.match_count) ||
            !parse_u64(field.substr(c2 + 1), e.volume_count)) {
            return "non-numeric year entry";
        }
        e.year = static_cast<int>(year);
        if (e.match_count == 0 || e.volume_count == 0) return "zero count";
        if (!out.years.empty() && out.years.back().year >= e.year) return "years not increasing";
        out.years.push_back(e);
        if (next == std::string_view::npos) break;
        pos = next + 1;
    }
    return nullptr;
}

NgramRecord parse_ngram_line(std::string_view line) {
    NgramView view;
    if (const char* why = parse_ngram_view(line, view)) {
        constexpr std::size_t kShown = 80;
        throw Error(Errc::MalformedLine, std::string(why) + ": " + std::string(line.substr(0, kShown)));
    }
    NgramRecord rec;
    rec.tokens.assign(view.tokens.begin(), view.tokens.end());
    rec.years = std::move(view.years);
    return rec;
}

CleaningRules CleaningRules::defaults() {
    CleaningRules rules;
    for (auto w : bundled_stopwords()) rules.stopwords.emplace(w);
    for (const char* tag : {"NOUN", "VERB", "ADJ", "ADV", "PRON", "DET", "ADP", "NUM", "CONJ", "PRT", "X", ".",
                            "START", "END", "ROOT"}) {
        rules.pos_tags.emplace(tag);
    }
    return rules;
}

CleaningRules CleaningRules::with_stopword_file(const std::string& path) {
    CleaningRules rules = defaults();
    rules.stopwords.clear();
    for (auto line : split(read_file(path), '\n')) {
        line = trim(line);
        if (line.empty() || line.front() == '#') continue;
        rules.stopwords.insert(to_lower_ascii(line));
    }
    if (rules.stopwords.empty()) throw Error(Errc::InvalidConfig, "stopword file is empty: " + path);
    return rules;
}

bool CleaningRules::is_placeholder(std::string_view token) const {
    if (token.size() < 3 || token.front() != '_' || token.back() != '_') return false;
    return pos_tags.contains(token.substr(1, token.size() - 2));
}

std::optional<std::string_view> CleaningRules::strip_suffix(std::string_view token) const {
    const std::size_t pos = token.rfind('_');
    if (pos == std::string_view::npos || pos == 0 || pos + 1 >= token.size()) return std::nullopt;
    if (!pos_tags.contains(token.substr(pos + 1))) return std::nullopt;
    return token.substr(0, pos);
}

bool CleaningRules::is_number(std::string_view token) {
    std::string s;
    s.reserve(token.size());
    for (char c : token) {
        if (c != ',') s.push_back(c);
    }
    std::size_t i = 0;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
    bool int_digits = false;
    while (i < s.size() && s[i] >= '0' && s[i] <= '9') {
        ++i;
        int_digits = true;
    }
    bool frac_digits = false;
    if (i < s.size() && s[i] == '.') {
        ++i;
        while (i < s.size() && s[i] >= '0' && s[i] <= '9') {
            ++i;
            frac_digits = true;
        }
    }
    return i == s.size() && (int_digits || frac_digits);
}

std::optional<std::string> clean_token(std::string_view token, const CleaningRules& rules) {
    if (token.empty() || rules.is_placeholder(token)) return std::nullopt;
    if (const auto word = rules.strip_suffix(token)) token = *word;
    if (token.empty() || CleaningRules::is_number(token)) return std::nullopt;
    std::string lower = to_lower_ascii(token);
    if (rules.stopwords.contains(lower)) return std::nullopt;
    return lower;
}

std::vector<int> DecadeRange::decades() const {
    std::vector<int> out;
    for (int d = bucket_by_decade(first); d <= last; d += 10) out.push_back(d);
    return out;
}

std::vector<NameMatch> match_person(const std::vector<std::string>& tokens, const RosterIndex& index) {
    std::vector<std::string_view> views(tokens.begin(), tokens.end());
    return match_person(std::span<const std::string_view>(views), index);
}

std::vector<NameMatch> match_person(std::span<const std::string_view> tokens, const RosterIndex& index) {
    std::vector<NameMatch> out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        const auto* candidates = index.lookup(tokens[i]);
        if (candidates == nullptr) continue;
        for (const IndexEntry& entry : *candidates) {
            const std::size_t n = entry.tokens.size();
            if (i + n > tokens.size()) continue;
            if (std::equal(entry.tokens.begin(), entry.tokens.end(), tokens.begin() + static_cast<std::ptrdiff_t>(i))) {
                out.push_back({entry.person, i, i + n});
            }
        }
    }
    return out;
}

std::vector<std::string> context_words(const NgramRecord& record, const NameMatch& match, const CleaningRules& rules) {
    std::vector<std::string> name_words;
    for (std::size_t i = match.begin; i < match.end; ++i) {
        if (auto w = clean_token(record.tokens[i], rules)) name_words.push_back(std::move(*w));
    }
    std::vector<std::string> out;
    for (std::size_t i = 0; i < record.tokens.size(); ++i) {
        if (i >= match.begin && i < match.end) continue;
        auto word = clean_token(record.tokens[i], rules);
        if (!word) continue;
        if (std::find(name_words.begin(), name_words.end(), *word) != name_words.end()) continue;
        out.push_back(std::move(*word));
    }
    return out;
}

std::vector<ContextEvent> extract_context(const NgramRecord& record, const NameMatch& match, const CleaningRules& rules,
                                          const std::string& group, const std::string& person_id) {
    const auto words = context_words(record, match, rules);
    std::vector<ContextEvent> out;
    out.reserve(words.size() * record.years.size());
    for (const YearEntry& e : record.years) {
        for (const auto& w : words) {
            out.push_back({bucket_by_decade(e.year), group, w, e.match_count, person_id});
        }
    }
    return out;
}

}  // namespace grouprep
