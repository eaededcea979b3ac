#include <cmath>

#include "doctest.h"
#include "solenoidal/tau.hpp"

using namespace solenoidal;

namespace {

TrigTestFunction monomial1(int64_t k) { return LaurentPoly::monomial({k}, RatC{Rat(1), Rat(0)}); }

RatC exact_of(const IntegralValue& v) {
    REQUIRE(v.exact.has_value());
    return *v.exact;
}

}  // namespace

TEST_SUITE("tau") {

TEST_CASE("constant function integrates to one at every level") {
    TauOptions sier_norm;
    sier_norm.norm = Rat(3);
    for (int n = 0; n <= 6; ++n) {
        for (const auto& name : LaurentFilter::builtin_names()) {
            auto f = LaurentFilter::builtin(name);
            auto o = f.name() == "sierpinski" ? sier_norm : TauOptions{};
            auto test = LaurentPoly::constant(f.dim(), RatC{Rat(1), Rat(0)});
            auto v = integrate_pushforward(f, test, n, o);
            CAPTURE(name);
            CAPTURE(n);
            CHECK(exact_of(v).re == Rat(1));
            CHECK(exact_of(v).im == Rat(0));
        }
    }
}

TEST_CASE("first moments, dyadic filter") {
    // the density prod_{j<n} |m(e(2^j t))|^2 / 2 has z^{-1} coefficient
    // built from signed subsets of {1, 2, .., 2^{n-1}} summing to 1: only
    // {1} itself, weight (1/2)^1 from that level and 1 from the others,
    // minus nothing else, giving 1 - 2^{-n}.
    auto haar2 = LaurentFilter::builtin("haar2");
    CHECK(exact_of(integrate_pushforward(haar2, monomial1(1), 1)).re == Rat(1, 2));
    CHECK(exact_of(integrate_pushforward(haar2, monomial1(1), 2)).re == Rat(3, 4));
    CHECK(exact_of(integrate_pushforward(haar2, monomial1(1), 3)).re == Rat(7, 8));
    CHECK(exact_of(integrate_pushforward(haar2, monomial1(1), 6)).re == Rat(63, 64));
}

TEST_CASE("first moments, ternary filters") {
    auto haar3 = LaurentFilter::builtin("haar3");
    CHECK(exact_of(integrate_pushforward(haar3, monomial1(1), 1)).re == Rat(2, 3));
    CHECK(exact_of(integrate_pushforward(haar3, monomial1(1), 2)).re == Rat(8, 9));

    // gap filter: |m|^2 only has even exponents, so odd moments vanish
    auto cantor3 = LaurentFilter::builtin("cantor3");
    for (int n = 1; n <= 4; ++n) {
        auto v = exact_of(integrate_pushforward(cantor3, monomial1(1), n));
        CHECK(v.re == Rat(0));
        CHECK(v.im == Rat(0));
    }
    // second moment saturates immediately: only the level-0 factor can
    // contribute the needed -2
    for (int n = 1; n <= 4; ++n)
        CHECK(exact_of(integrate_pushforward(cantor3, monomial1(2), n)).re == Rat(1, 2));
}

TEST_CASE("pushforward and preimage forms agree exactly") {
    for (const auto& name : {"haar2", "haar3", "cantor3"}) {
        auto f = LaurentFilter::builtin(name);
        for (int64_t k : {-3, -1, 0, 2}) {
            for (int n = 0; n <= 4; ++n) {
                auto push = integrate_pushforward(f, monomial1(k), n);
                auto pre = integrate_preimage_form(f, monomial1(k), n);
                CAPTURE(name);
                CAPTURE(k);
                CAPTURE(n);
                CHECK(exact_of(push).re == exact_of(pre).re);
                CHECK(exact_of(push).im == exact_of(pre).im);
                CHECK_FALSE(pre.used_quadrature);
            }
        }
    }
}

TEST_CASE("digit-count normalization for the two-dimensional filter") {
    auto sier = LaurentFilter::builtin("sierpinski");
    TauOptions o;
    o.norm = Rat(3);
    auto test = LaurentPoly::monomial({1, -1}, RatC{Rat(1), Rat(0)});
    auto push = integrate_pushforward(sier, test, 3, o);
    CHECK(exact_of(push).re == Rat(13, 27));
    auto pre = integrate_preimage_form(sier, test, 3, o);
    CHECK(exact_of(pre).re == Rat(13, 27));

    // without the override the marginals are sub-probability: (3/4)^n
    auto bare = integrate_pushforward(sier, LaurentPoly::constant(2, RatC{Rat(1), Rat(0)}), 3);
    CHECK(exact_of(bare).re == Rat(27, 64));
}

TEST_CASE("quadrature route agrees with the exact one") {
    auto haar2 = LaurentFilter::builtin("haar2");
    // rebuild the filter with float coefficients to force quadrature
    std::vector<LaurentFilter::Term> terms;
    for (auto t : haar2.filter_terms()) terms.push_back(t);
    auto approx = LaurentFilter::approx(haar2.dilation(), terms, "haar2f");
    auto v = integrate_pushforward(approx, monomial1(1), 3);
    CHECK(v.used_quadrature);
    CHECK_FALSE(v.exact.has_value());
    CHECK(v.value.real() == doctest::Approx(7.0 / 8.0).epsilon(1e-9));

    TauOptions no_quad;
    no_quad.allow_quadrature = false;
    CHECK_THROWS_AS(integrate_pushforward(approx, monomial1(1), 3, no_quad), std::invalid_argument);
}

TEST_CASE("preimage form falls back past the word cap") {
    auto haar2 = LaurentFilter::builtin("haar2");
    auto v = integrate_preimage_form(haar2, monomial1(1), 7);
    CHECK(v.used_quadrature);
    CHECK_FALSE(v.warning.empty());
    CHECK(v.value.real() == doctest::Approx(127.0 / 128.0).epsilon(1e-6));

    TauOptions no_quad;
    no_quad.allow_quadrature = false;
    CHECK_THROWS_AS(integrate_preimage_form(haar2, monomial1(1), 7, no_quad),
                    std::invalid_argument);
}

TEST_CASE("dropping the base level is measure-preserving, exact form") {
    for (const auto& name : {"haar2", "cantor3"}) {
        auto f = LaurentFilter::builtin(name);
        for (int64_t k : {-2, 0, 1, 3}) {
            for (int n = 0; n <= 3; ++n) {
                auto rep = radon_nikodym_residual(f, monomial1(k), n, RnDirection::Inverse);
                CAPTURE(name);
                CAPTURE(k);
                CAPTURE(n);
                REQUIRE(rep.exact_residual.has_value());
                CHECK(rep.exact_residual->re == Rat(0));
                CHECK(rep.exact_residual->im == Rat(0));
                CHECK(rep.residual == 0.0);
            }
        }
    }
    // same identity with the det/norm correction in play
    TauOptions o;
    o.norm = Rat(3);
    auto sier = LaurentFilter::builtin("sierpinski");
    auto rep = radon_nikodym_residual(sier, LaurentPoly::monomial({1, 0}, RatC{Rat(1), Rat(0)}), 2,
                                      RnDirection::Inverse, o);
    REQUIRE(rep.exact_residual.has_value());
    CHECK(rep.exact_residual->re == Rat(0));
    CHECK(rep.exact_residual->im == Rat(0));
}

TEST_CASE("adding a level back weighs by the reciprocal mass") {
    auto haar2 = LaurentFilter::builtin("haar2");
    auto rep = radon_nikodym_residual(haar2, monomial1(1), 2, RnDirection::Forward);
    CHECK(rep.direction == RnDirection::Forward);
    CHECK(rep.residual < 1e-6);
    CHECK(rep.grid > 0);

    auto cantor3 = LaurentFilter::builtin("cantor3");
    auto rep3 = radon_nikodym_residual(cantor3, monomial1(2), 1, RnDirection::Forward);
    CHECK(rep3.residual < 1e-6);
}

}  // TEST_SUITE
