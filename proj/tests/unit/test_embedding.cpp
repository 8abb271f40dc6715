#include <cmath>

#include "doctest.h"
#include "grouprep/embedding.hpp"
#include "grouprep/error.hpp"
#include "grouprep/rng.hpp"
#include "helpers.hpp"

using namespace grouprep;

namespace {

Vector random_vec(Rng& rng, std::size_t d) {
    Vector v(d);
    for (auto& x : v) x = rng.normal();
    return v;
}

}  // namespace

TEST_SUITE("embedding_space") {
    TEST_CASE("load_space reads a small file") {
        const auto s = parse_space("cat 1 0 0 0\ndog 0 1 0 0\nfish 0 0 1 0.5\n", 1900);
        CHECK(s.size() == 3);
        CHECK(s.dim() == 4);
        CHECK(s.decade() == 1900);
        REQUIRE(s.find("fish"));
        CHECK((*s.find("fish"))[3] == 0.5);
        CHECK_FALSE(s.find("bird"));
    }

    TEST_CASE("optional count header") {
        const auto s = parse_space("2 3\na 1 2 3\nb 4 5 6\n", 1900);
        CHECK(s.size() == 2);
        CHECK(s.dim() == 3);
    }

    TEST_CASE("dimension mismatch and empty file") {
        try {
            parse_space("a 1 2 3 4\nb 1 2 3\n", 1900);
            FAIL("expected DimensionMismatch");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::DimensionMismatch);
        }
        try {
            parse_space("", 1900);
            FAIL("expected EmptyFile");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::EmptyFile);
        }
    }

    TEST_CASE("duplicate words: last wins and is counted; zero vectors flagged") {
        const auto s = parse_space("cat 1 0\ncat 0 1\nnil 0 0\n", 1900);
        CHECK(s.size() == 2);
        CHECK(s.duplicate_words == 1);
        CHECK((*s.find("cat"))[1] == 1.0);
        CHECK(s.zero_vectors == std::vector<std::string>{"nil"});
    }

    TEST_CASE("serialise round trip") {
        Rng rng(1);
        EmbeddingSpace s(1950, 7);
        for (int i = 0; i < 20; ++i) s.set("w" + std::to_string(i), random_vec(rng, 7));
        const auto back = parse_space(serialize_space(s), 1950);
        REQUIRE(back.size() == s.size());
        for (std::size_t i = 0; i < s.size(); ++i) {
            const auto a = s.row(i);
            const auto b = *back.find(s.words()[i]);
            for (std::size_t c = 0; c < 7; ++c) CHECK(a[c] == b[c]);
        }
    }

    TEST_CASE("cosine examples") {
        const Vector u = {1, 0}, v = {1, 1}, w = {0, 1};
        CHECK(cosine(u, u) == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(cosine(u, w) == 0.0);
        CHECK(std::abs(cosine(u, v) - 0.7071) < 1e-4);
        const Vector z = {0, 0};
        try {
            cosine(u, z);
            FAIL("expected ZeroNorm");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::ZeroNorm);
        }
    }

    TEST_CASE("cosine properties") {
        Rng rng(2);
        for (int i = 0; i < 200; ++i) {
            const auto u = random_vec(rng, 9), v = random_vec(rng, 9);
            const double c = cosine(u, v);
            CHECK(c >= -1.0);
            CHECK(c <= 1.0);
            CHECK(c == cosine(v, u));
            CHECK(std::abs(cosine(u, u) - 1.0) < 1e-12);
            const double a = 0.1 + rng.uniform() * 10, b = 0.1 + rng.uniform() * 10;
            Vector au = u, bv = v;
            for (auto& x : au) x *= a;
            for (auto& x : bv) x *= b;
            CHECK(std::abs(cosine(au, bv) - c) < 1e-12);
        }
    }

    TEST_CASE("mean_vector examples") {
        const auto s = testing::make_space(2, {{"a", {1, 0}}, {"b", {0, 1}}, {"c", {2, 2}}});
        const std::vector<std::string> ab = {"a", "b"};
        const auto m = mean_vector(ab, s);
        CHECK(m.mean == Vector{0.5, 0.5});
        CHECK(m.used == ab);

        const std::vector<std::string> one = {"a", "x", "y"};
        try {
            mean_vector(one, s, 3);
            FAIL("expected TooFewWords");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::TooFewWords);
        }

        const std::vector<std::string> five = {"a", "x", "b", "y", "c"};
        const auto m3 = mean_vector(five, s, 3);
        CHECK(m3.used.size() == 3);
        CHECK(m3.mean[0] == doctest::Approx(1.0));
        CHECK(m3.mean[1] == doctest::Approx(1.0));
    }

    TEST_CASE("mean_vector is permutation invariant") {
        Rng rng(4);
        EmbeddingSpace s(1900, 6);
        std::vector<std::string> words;
        for (int i = 0; i < 12; ++i) {
            words.push_back("w" + std::to_string(i));
            s.set(words.back(), random_vec(rng, 6));
        }
        const auto ref = mean_vector(words, s);
        for (int t = 0; t < 20; ++t) {
            rng.shuffle(words);
            const auto m = mean_vector(words, s);
            for (std::size_t c = 0; c < 6; ++c) CHECK(std::abs(m.mean[c] - ref.mean[c]) < 1e-12);
        }
    }
}
