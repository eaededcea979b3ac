#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "solenoidal/cyclotomic.hpp"

using namespace solenoidal;

namespace {

const RatC one{Rat(1), Rat(0)};

TrigSum root_sum(std::initializer_list<Rat> roots) {
    TrigSum s;
    for (const Rat& r : roots) s.add_term(frac_mod1(r), one);
    return s;
}

}  // namespace

TEST_SUITE("cyclotomic") {

TEST_CASE("full sets of p-th roots vanish") {
    for (int64_t p : {2, 3, 5, 7, 11}) {
        TrigSum s;
        for (int64_t j = 0; j < p; ++j) s.add_term(Rat(j, p), one);
        CHECK(s.is_zero());
    }
}

TEST_CASE("composite root sums vanish through the prime peeling") {
    TrigSum s6;
    for (int64_t j = 0; j < 6; ++j) s6.add_term(Rat(j, 6), one);
    CHECK(s6.is_zero());
    TrigSum s12;
    for (int64_t j = 0; j < 12; ++j) s12.add_term(Rat(j, 12), one);
    CHECK(s12.is_zero());
    TrigSum s30;
    for (int64_t j = 0; j < 30; ++j) s30.add_term(Rat(j, 30), one);
    CHECK(s30.is_zero());
}

TEST_CASE("primitive root sums reduce to Moebius values") {
    // sum over units mod p is -1
    auto u5 = root_sum({Rat(1, 5), Rat(2, 5), Rat(3, 5), Rat(4, 5)});
    auto c5 = u5.as_constant();
    REQUIRE(c5.has_value());
    CHECK(c5->re == Rat(-1));
    CHECK(c5->im == Rat(0));

    // e(1/6) + e(5/6) = 2 cos(pi/3) = 1
    auto u6 = root_sum({Rat(1, 6), Rat(5, 6)});
    auto c6 = u6.as_constant();
    REQUIRE(c6.has_value());
    CHECK(c6->re == Rat(1));

    // e(1/3) + e(2/3) = -1
    auto u3 = root_sum({Rat(1, 3), Rat(2, 3)});
    auto c3 = u3.as_constant();
    REQUIRE(c3.has_value());
    CHECK(c3->re == Rat(-1));
}

TEST_CASE("quarter turn is purely imaginary") {
    auto i = TrigSum::root(Rat(1, 4));
    auto c = i.as_constant();
    REQUIRE(c.has_value());
    CHECK(c->re == Rat(0));
    CHECK(c->im == Rat(1));
    auto mi = TrigSum::root(Rat(3, 4));
    REQUIRE(mi.as_constant().has_value());
    CHECK(mi.as_constant()->im == Rat(-1));
}

TEST_CASE("single primitive roots are not rational") {
    for (const Rat& r : {Rat(1, 3), Rat(1, 5), Rat(1, 7), Rat(1, 12)}) {
        auto s = TrigSum::root(r);
        CHECK_FALSE(s.as_constant().has_value());
        CHECK_FALSE(s.is_zero());
    }
}

TEST_CASE("products respect exponent addition") {
    std::mt19937_64 rng(23);
    for (int it = 0; it < 100; ++it) {
        Rat a(int64_t(rng() % 60), 60);
        Rat b(int64_t(rng() % 84), 84);
        auto lhs = TrigSum::root(a) * TrigSum::root(b);
        auto rhs = TrigSum::root(frac_mod1(a + b));
        CHECK((lhs - rhs).is_zero());
    }
}

TEST_CASE("conjugation negates the exponents") {
    TrigSum s;
    s.add_term(Rat(1, 5), RatC{Rat(2), Rat(3)});
    s.add_term(Rat(1, 2), one);
    auto c = s.conj();
    auto prod = s * c;
    // |s|^2 is a real algebraic number: conjugation-invariant
    CHECK((prod - prod.conj()).is_zero());
}

TEST_CASE("zero annihilates products") {
    auto zero = root_sum({Rat(0), Rat(1, 2)});  // 1 + e(1/2)
    REQUIRE(zero.is_zero());
    TrigSum messy;
    messy.add_term(Rat(3, 7), RatC{Rat(5, 2), Rat(-1)});
    messy.add_term(Rat(1, 11), RatC{Rat(0), Rat(4, 3)});
    CHECK((zero * messy).is_zero());
}

TEST_CASE("float rendering agrees with exact reductions") {
    std::mt19937_64 rng(31);
    for (int it = 0; it < 50; ++it) {
        int64_t q = 2 + int64_t(rng() % 40);
        TrigSum s;
        std::complex<double> want{0.0, 0.0};
        for (int k = 0; k < 5; ++k) {
            int64_t p = int64_t(rng() % q);
            int64_t c = int64_t(rng() % 7) - 3;
            s.add_term(Rat(p, q), RatC{Rat(c), Rat(0)});
            double ang = 2.0 * std::numbers::pi * double(p) / double(q);
            want += double(c) * std::complex<double>{std::cos(ang), std::sin(ang)};
        }
        CHECK(std::abs(s.eval() - want) < 1e-12);
        if (s.is_zero()) CHECK(std::abs(want) < 1e-9);
    }
}

TEST_CASE("raw residue interface matches the mod-q reading") {
    // 1 + zeta_4 + zeta_4^2 + zeta_4^3 = 0, exponents given unreduced
    CHECK(vanishes({{0, one}, {1, one}, {-2, one}, {7, one}}, 4));
    auto c = reduce_to_constant({{0, one}, {2, one}}, 4);  // 1 + zeta_4^2 = 0
    REQUIRE(c.has_value());
    CHECK(c->is_zero());
}

}  // TEST_SUITE
