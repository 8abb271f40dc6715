#include <algorithm>
#include <numeric>

#include "doctest.h"
#include "grouprep/error.hpp"
#include "grouprep/io.hpp"
#include "grouprep/ngram.hpp"
#include "grouprep/rng.hpp"
#include "grouprep/roster.hpp"

using namespace grouprep;

namespace {

Person person(const std::string& name, std::optional<int> birth, const std::string& group) {
    Person p;
    p.full_name = name;
    p.birth_year = birth;
    p.group = group;
    p.person_id = make_person_id(name, birth);
    return p;
}

Errc code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return Errc::InvalidArgument;
}

}  // namespace

TEST_SUITE("ngram_ingest") {
    TEST_CASE("parse_ngram_line splits tokens and year triples") {
        const auto r = parse_ngram_line("A B C D E\t1901,4,2\t1902,1,1");
        CHECK(r.tokens == std::vector<std::string>{"A", "B", "C", "D", "E"});
        REQUIRE(r.years.size() == 2);
        CHECK(r.years[0] == YearEntry{1901, 4, 2});
        CHECK(r.years[1] == YearEntry{1902, 1, 1});
    }

    TEST_CASE("parse_ngram_line rejects malformed records") {
        CHECK(code_of([] { parse_ngram_line("A B C D\t1901,4,2"); }) == Errc::MalformedLine);
        CHECK(code_of([] { parse_ngram_line("A B C D E\t1901,x,2"); }) == Errc::MalformedLine);
        CHECK(code_of([] { parse_ngram_line("A B C D E F\t1901,4,2"); }) == Errc::MalformedLine);
        CHECK(code_of([] { parse_ngram_line("A B C D E"); }) == Errc::MalformedLine);
        CHECK(code_of([] { parse_ngram_line("A B C D E\t1901,4"); }) == Errc::MalformedLine);
        CHECK(code_of([] { parse_ngram_line("A B C D E\t1901,0,1"); }) == Errc::MalformedLine);
        CHECK(code_of([] { parse_ngram_line("A B C D E\t1901,1,0"); }) == Errc::MalformedLine);
        CHECK(code_of([] { parse_ngram_line("A B C D E\t1902,1,1\t1901,1,1"); }) == Errc::MalformedLine);
        CHECK(code_of([] { parse_ngram_line("A  B C D E\t1901,1,1"); }) == Errc::MalformedLine);
    }

    TEST_CASE("clean_token rules") {
        const auto rules = CleaningRules::defaults();
        CHECK_FALSE(clean_token("_NOUN_", rules));
        CHECK(clean_token("run_VERB", rules) == "run");
        CHECK_FALSE(clean_token("1887", rules));
        CHECK_FALSE(clean_token("1,000", rules));
        CHECK_FALSE(clean_token("3.14", rules));
        CHECK_FALSE(clean_token("the", rules));
        CHECK_FALSE(clean_token("The", rules));
        CHECK(clean_token("House", rules) == "house");
        CHECK_FALSE(clean_token("_START_", rules));
        CHECK_FALSE(clean_token("the_DET", rules));
        CHECK(clean_token("1887s", rules) == "1887s");
        CHECK(clean_token("well-known_ADJ", rules) == "well-known");
    }

    TEST_CASE("bundled stopword list") {
        CHECK(bundled_stopwords().size() == 179);
        const auto rules = CleaningRules::defaults();
        CHECK(rules.stopwords.size() == 179);
        for (auto w : bundled_stopwords()) CHECK(to_lower_ascii(w) == w);
    }

    TEST_CASE("clean_token is idempotent on surviving tokens") {
        const auto rules = CleaningRules::defaults();
        const std::vector<std::string> tokens = {"House", "run_VERB", "Douglass", "x_ADJ", "abc_def", "MiXeD_NOUN",
                                                 "spoke", "well-known", "A.B.", "o'clock", "Zebra_X"};
        for (const auto& t : tokens) {
            const auto once = clean_token(t, rules);
            if (!once) continue;
            CAPTURE(t);
            CHECK(clean_token(*once, rules) == once);
        }
    }

    TEST_CASE("bucket_by_decade") {
        CHECK(bucket_by_decade(1855) == 1850);
        CHECK(bucket_by_decade(1899) == 1890);
        CHECK(bucket_by_decade(1900) == 1900);
        static_assert(bucket_by_decade(2009) == 2000);
    }

    TEST_CASE("birth_gate") {
        CHECK(birth_gate(1840, 1845) == GateResult::Reject);
        CHECK(birth_gate(1840, 1850) == GateResult::Accept);
        CHECK(birth_gate(1840, 1849) == GateResult::Reject);
        CHECK(birth_gate(std::nullopt, 1700) == GateResult::AcceptUnknownBirth);
    }

    TEST_CASE("match_person is exact and case-sensitive") {
        const std::vector<Person> persons = {person("Frederick Douglass", 1818, "A")};
        const auto index = build_index(persons);
        const auto m = match_person(std::vector<std::string>{"Frederick", "Douglass", "spoke", "at", "length"}, index);
        REQUIRE(m.size() == 1);
        CHECK(m[0] == NameMatch{0, 0, 2});
        CHECK(match_person(std::vector<std::string>{"frederick", "douglass", "spoke", "at", "length"}, index).empty());
    }

    TEST_CASE("match_person reports overlapping names") {
        const std::vector<Person> persons = {person("John Quincy Adams", 1767, "A"), person("Quincy Adams", 1800, "B")};
        const auto index = build_index(persons);
        const auto m = match_person(std::vector<std::string>{"John", "Quincy", "Adams", "was", "here"}, index);
        REQUIRE(m.size() == 2);
        CHECK(m[0] == NameMatch{0, 0, 3});
        CHECK(m[1] == NameMatch{1, 1, 3});
    }

    TEST_CASE("extract_context examples") {
        const auto rules = CleaningRules::defaults();
        NgramRecord r;
        r.tokens = {"Frederick", "Douglass", "spoke", "at", "length"};
        r.years = {{1855, 3, 1}};
        const NameMatch m{0, 0, 2};
        auto events = extract_context(r, m, rules, "A", "fd");
        REQUIRE(events.size() == 2);
        CHECK(events[0] == ContextEvent{1850, "A", "spoke", 3, "fd"});
        CHECK(events[1] == ContextEvent{1850, "A", "length", 3, "fd"});

        r.tokens = {"Frederick", "Douglass", "and", "the", "of"};
        CHECK(extract_context(r, m, rules, "A", "fd").empty());

        r.tokens = {"Frederick", "Douglass", "spoke", "at", "length"};
        r.years = {{1855, 3, 1}, {1861, 2, 1}};
        events = extract_context(r, m, rules, "A", "fd");
        REQUIRE(events.size() == 4);
        CHECK(events[2] == ContextEvent{1860, "A", "spoke", 2, "fd"});
        CHECK(events[3] == ContextEvent{1860, "A", "length", 2, "fd"});
    }

    TEST_CASE("name tokens never leak into context") {
        const auto rules = CleaningRules::defaults();
        NgramRecord r;
        r.tokens = {"Mark", "Twain", "met", "Mark", "Twain"};
        r.years = {{1900, 1, 1}};
        CHECK(context_words(r, {0, 0, 2}, rules) == std::vector<std::string>{"met"});
    }

    TEST_CASE("weight conservation and no leakage on random records") {
        const auto rules = CleaningRules::defaults();
        const std::vector<std::string> pool = {"Ada", "Lovelace", "the", "House", "run_VERB", "_NOUN_", "1887",
                                               "spoke", "of", "Ada_NOUN", "lovelace", "bright"};
        const std::vector<Person> persons = {person("Ada Lovelace", 1815, "A")};
        const auto index = build_index(persons);
        Rng rng(42);
        for (int trial = 0; trial < 500; ++trial) {
            NgramRecord r;
            for (int i = 0; i < 5; ++i) r.tokens.push_back(pool[rng.below(pool.size())]);
            int year = 1850 + static_cast<int>(rng.below(20));
            const int entries = 1 + static_cast<int>(rng.below(3));
            for (int e = 0; e < entries; ++e) {
                r.years.push_back({year, 1 + rng.below(9), 1});
                year += 1 + static_cast<int>(rng.below(20));
            }
            for (const auto& m : match_person(r.tokens, index)) {
                const auto words = context_words(r, m, rules);
                const auto events = extract_context(r, m, rules, "A", "x");
                std::uint64_t total = 0, expected = 0;
                for (const auto& e : events) total += e.weight;
                for (const auto& y : r.years) expected += y.match_count;
                CHECK(total == words.size() * expected);
                for (const auto& e : events) {
                    for (std::size_t i = m.begin; i < m.end; ++i) {
                        CHECK(e.word != r.tokens[i]);
                        CHECK(e.word != clean_token(r.tokens[i], rules).value_or(""));
                    }
                }
            }
        }
    }

    TEST_CASE("decade range") {
        DecadeRange d;
        CHECK(d.decades().size() == 15);
        CHECK(d.contains(1850));
        CHECK(d.contains(1990));
        CHECK_FALSE(d.contains(2000));
        CHECK_FALSE(d.contains(1855));
    }
}
