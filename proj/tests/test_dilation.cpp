#include <random>

#include "doctest.h"
#include "solenoidal/dilation.hpp"

using namespace solenoidal;

TEST_SUITE("dilation") {

TEST_CASE("digit alphabet is lexicographic, last coordinate fastest") {
    auto d1 = digit_alphabet(DilationSpec::make({3}));
    REQUIRE(d1.size() == 3);
    CHECK(d1[0].a == std::vector<int64_t>{0});
    CHECK(d1[2].a == std::vector<int64_t>{2});

    auto d2 = digit_alphabet(DilationSpec::make({2, 3}));
    REQUIRE(d2.size() == 6);
    CHECK(d2[0].a == std::vector<int64_t>({0, 0}));
    CHECK(d2[1].a == std::vector<int64_t>({0, 1}));
    CHECK(d2[3].a == std::vector<int64_t>({1, 0}));
    CHECK(d2[5].a == std::vector<int64_t>({1, 2}));
}

TEST_CASE("torus point validation") {
    CHECK_THROWS_AS(TorusPoint::exact({Rat(1)}), std::invalid_argument);
    CHECK_THROWS_AS(TorusPoint::exact({Rat(-1, 2)}), std::invalid_argument);
    CHECK_THROWS_AS(TorusPoint::approx({1.0}), std::invalid_argument);
    CHECK_NOTHROW(TorusPoint::exact({Rat(0)}));
    CHECK_THROWS_AS(TorusPoint::approx({0.5}).rat(), std::logic_error);
}

TEST_CASE("word digit access and periodic indexing") {
    DigitWord w{{Digit{{0}}, Digit{{1}}}, {Digit{{2}}, Digit{{0}}}};
    CHECK(w.digit_at(0).a[0] == 0);
    CHECK(w.digit_at(1).a[0] == 1);
    CHECK(w.digit_at(2).a[0] == 2);
    CHECK(w.digit_at(3).a[0] == 0);
    CHECK(w.digit_at(4).a[0] == 2);
    CHECK(w.resolvable(1000));

    DigitWord finite{{Digit{{1}}}, {}};
    CHECK_FALSE(finite.resolvable(1));
    CHECK_THROWS_AS(finite.digit_at(1), std::out_of_range);
}

TEST_CASE("word/integer round trip for nonnegative vectors") {
    auto spec = DilationSpec::make({2, 3});
    std::mt19937_64 rng(11);
    for (int it = 0; it < 200; ++it) {
        std::vector<BigInt> k{BigInt(int64_t(rng() % 60)), BigInt(int64_t(rng() % 60))};
        auto w = integer_to_word(k, spec, 8);
        CHECK(word_to_integer(w, spec) == k);
    }
}

TEST_CASE("negative integers get the complement expansion") {
    auto spec = DilationSpec::make({2});
    auto w = integer_to_word({BigInt(-3)}, spec, 4);
    // -3 = 13 - 16: digits of 13 = 1011 base 2, then all-ones tail
    REQUIRE(w.prefix.size() == 4);
    CHECK(w.prefix[0].a[0] == 1);
    CHECK(w.prefix[1].a[0] == 0);
    CHECK(w.prefix[2].a[0] == 1);
    CHECK(w.prefix[3].a[0] == 1);
    REQUIRE(w.has_period());
    CHECK(w.period[0].a[0] == 1);

    DigitWord prefix_only{w.prefix, {}};
    CHECK(word_to_integer(prefix_only, spec) == std::vector<BigInt>{BigInt(13)});
}

TEST_CASE("integer word depth bounds") {
    auto spec = DilationSpec::make({2});
    CHECK_THROWS_AS(integer_to_word({BigInt(16)}, spec, 4), std::invalid_argument);
    CHECK_NOTHROW(integer_to_word({BigInt(15)}, spec, 4));
    CHECK_NOTHROW(integer_to_word({BigInt(-16)}, spec, 4));
    CHECK_THROWS_AS(integer_to_word({BigInt(-17)}, spec, 4), std::invalid_argument);
}

TEST_CASE("word_to_integer rejects nonzero periodic tails") {
    auto spec = DilationSpec::make({2});
    DigitWord w{{Digit{{1}}}, {Digit{{1}}}};
    CHECK_THROWS_AS(word_to_integer(w, spec), std::invalid_argument);
    DigitWord z{{Digit{{1}}}, {Digit{{0}}}};
    CHECK(word_to_integer(z, spec) == std::vector<BigInt>{BigInt(1)});
}

TEST_CASE("odometer add matches integer addition") {
    auto spec = DilationSpec::make({2, 3});
    std::mt19937_64 rng(5);
    for (int it = 0; it < 200; ++it) {
        std::vector<BigInt> k{BigInt(int64_t(rng() % 40)), BigInt(int64_t(rng() % 40))};
        std::vector<BigInt> v{BigInt(int64_t(rng() % 25)), BigInt(int64_t(rng() % 25))};
        auto w = integer_to_word(k, spec, 8);
        auto sum = odometer_add(w, v, spec);
        std::vector<BigInt> want{k[0] + v[0], k[1] + v[1]};
        CHECK(word_to_integer(sum, spec) == want);
    }
}

TEST_CASE("adding one to the all-ones tail carries forever") {
    auto spec = DilationSpec::make({2});
    DigitWord minus_one{{}, {Digit{{1}}}};
    auto zero = odometer_add(minus_one, {BigInt(1)}, spec);
    for (int j = 0; j < 12; ++j) CHECK(zero.digit_at(j).a[0] == 0);
}

TEST_CASE("refine and coarsen are inverse, s_of_t recovers the digit") {
    auto spec = DilationSpec::make({3});
    std::mt19937_64 rng(17);
    for (int it = 0; it < 300; ++it) {
        Rat t(int64_t(rng() % 997), 997);
        TorusPoint p = TorusPoint::exact({t});
        Digit a{{int64_t(rng() % 3)}};
        TorusPoint r = refine(p, a, spec);
        CHECK(coarsen(r, spec).rat() == p.rat());
        CHECK(s_of_t(r, spec).a == a.a);
    }
}

TEST_CASE("float refine stays inside the torus at the attracting endpoint") {
    // orbits along the all-ones tail converge to 1; the division must not
    // round onto the excluded endpoint
    auto spec = DilationSpec::make({2});
    TorusPoint p = TorusPoint::approx({0.9999999999999999});
    for (int j = 0; j < 200; ++j) {
        p = refine(p, Digit{{1}}, spec);
        CHECK(p.dbl()[0] < 1.0);
    }
}

TEST_CASE("scale_down divides by the dilation power") {
    auto spec = DilationSpec::make({2, 3});
    TorusPoint p = TorusPoint::exact({Rat(1, 2), Rat(2, 3)});
    auto q = scale_down(p, spec, 2);
    CHECK(q.rat()[0] == Rat(1, 8));
    CHECK(q.rat()[1] == Rat(2, 27));
}

}  // TEST_SUITE
