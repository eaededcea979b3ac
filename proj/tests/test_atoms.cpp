#include <cmath>

#include "doctest.h"
#include "solenoidal/atoms.hpp"

using namespace solenoidal;

namespace {

// |phi_hat|^2 for the filter (1 + z)/sqrt(2): sin^2(pi x) / (pi x)^2
double haar2_mass(double x) {
    if (x == 0.0) return 1.0;
    double s = std::sin(M_PI * x) / (M_PI * x);
    return s * s;
}

DigitWord periodic_word(std::vector<int64_t> digit) {
    DigitWord w;
    w.period.push_back(Digit{std::move(digit)});
    return w;
}

}  // namespace

TEST_SUITE("atoms") {

TEST_CASE("partial products are running cylinder masses") {
    auto haar2 = LaurentFilter::builtin("haar2");
    TorusPoint t = TorusPoint::exact({Rat(1, 5)});
    auto pp = atom_partial_products(haar2, t, periodic_word({0}), 12);
    REQUIRE(pp.size() == 12);
    CylinderSet c{t, {}};
    for (int k = 0; k < 12; ++k) {
        c.prefix.push_back(Digit{{0}});
        CHECK(pp[size_t(k)] == doctest::Approx(cylinder_mass(haar2, c).value).epsilon(1e-12));
    }
    // the zero word heads to phi_hat(t): here sin^2(pi/5)/(pi/5)^2
    CHECK(pp.back() == doctest::Approx(haar2_mass(0.2)).epsilon(1e-6));
}

TEST_CASE("classifier finds the surviving branch") {
    auto haar2 = LaurentFilter::builtin("haar2");
    auto cand = classify_atom(haar2, TorusPoint::exact({Rat(1, 5)}), periodic_word({0}));
    CHECK(cand.verdict == AtomVerdict::ConvergesPositive);
    CHECK_FALSE(cand.factor_above_one);
    CHECK(cand.mass_partial_products.back() == doctest::Approx(haar2_mass(0.2)).epsilon(1e-6));
}

TEST_CASE("classifier kills a geometrically decaying branch") {
    auto cantor3 = LaurentFilter::builtin("cantor3");
    // every factor is at most 2/3, so the floor is reached well inside 256 terms
    auto cand = classify_atom(cantor3, TorusPoint::exact({Rat(0)}), periodic_word({0}), 256);
    CHECK(cand.verdict == AtomVerdict::DecaysToZero);
    CHECK(cand.reason == "partial products fell below the mass floor");
}

TEST_CASE("classifier reports an exact zero factor") {
    auto haar2 = LaurentFilter::builtin("haar2");
    // from base 0 the digit 1 lands on the filter zero at 1/2
    auto cand = classify_atom(haar2, TorusPoint::exact({Rat(0)}), periodic_word({1}));
    CHECK(cand.verdict == AtomVerdict::DecaysToZero);
    CHECK(cand.reason == "a factor vanishes exactly");
    CHECK(cand.mass_partial_products.front() == 0.0);
}

TEST_CASE("classifier argument checks") {
    auto haar2 = LaurentFilter::builtin("haar2");
    CHECK_THROWS_AS(classify_atom(haar2, TorusPoint::exact({Rat(0)}), periodic_word({0}), 8, 16),
                    std::invalid_argument);
}

TEST_CASE("coefficient certificate of atomlessness") {
    auto cert3 = atomless_certificate(LaurentFilter::builtin("cantor3"));
    REQUIRE(cert3.has_value());
    CHECK(*cert3->ratio_exact == Rat(2, 3));
    CHECK(cert3->ratio == doctest::Approx(2.0 / 3.0));

    AtomOptions o;
    o.norm = Rat(4);
    auto certs = atomless_certificate(LaurentFilter::builtin("sierpinski"), o);
    REQUIRE(certs.has_value());
    CHECK(*certs->ratio_exact == Rat(9, 16));

    CHECK_FALSE(atomless_certificate(LaurentFilter::builtin("haar2")).has_value());
    CHECK_FALSE(atomless_certificate(LaurentFilter::builtin("haar3")).has_value());
}

TEST_CASE("peak set scan") {
    auto hits2 = find_Zm(LaurentFilter::builtin("haar2"));
    REQUIRE(hits2.size() == 1);
    CHECK(hits2[0].t.rat()[0] == Rat(0));
    CHECK(hits2[0].exact_confirmed);
    CHECK(hits2[0].mag2 == doctest::Approx(2.0));

    auto hits3 = find_Zm(LaurentFilter::builtin("haar3"));
    REQUIRE(hits3.size() == 1);
    CHECK(hits3[0].t.rat()[0] == Rat(0));
    CHECK(hits3[0].exact_confirmed);

    CHECK(find_Zm(LaurentFilter::builtin("cantor3")).empty());
    CHECK(find_Zm(LaurentFilter::builtin("sierpinski")).empty());
}

TEST_CASE("periodic rationals and their peak-set orbits") {
    auto reports = candidate_cycle_rationals(LaurentFilter::builtin("haar2"), 3);
    REQUIRE(reports.size() == 3);
    for (const auto& r : reports) {
        CHECK(r.rationals.size() == size_t((int64_t(1) << r.l) - 1));
        REQUIRE(r.in_Zm.size() == 1);  // only the fixed point 0 survives
        CHECK(r.in_Zm[0] == Rat(0));
    }
    for (const auto& r : candidate_cycle_rationals(LaurentFilter::builtin("cantor3"), 3))
        CHECK(r.in_Zm.empty());
    CHECK_THROWS_AS(candidate_cycle_rationals(LaurentFilter::builtin("sierpinski"), 2),
                    std::invalid_argument);
}

TEST_CASE("truncated scaling function against the closed form") {
    auto haar2 = LaurentFilter::builtin("haar2");
    for (double x : {0.0, 0.3, -0.45, 1.7, -2.25, 5.5}) {
        auto v = scaling_fn_hat(haar2, {x}, 48);
        CHECK(std::norm(v.value) == doctest::Approx(haar2_mass(x)).epsilon(1e-8));
        REQUIRE(v.tail_bound.has_value());
        CHECK(*v.tail_bound >= 0.0);
    }
    // not unit-normalized: no geometric tail control
    auto w = scaling_fn_hat(LaurentFilter::builtin("cantor3"), {0.3}, 48);
    CHECK_FALSE(w.tail_bound.has_value());
}

TEST_CASE("classical decomposition, both routes") {
    auto haar2 = LaurentFilter::builtin("haar2");
    double t = 1.0 / 5.0;
    auto atoms = classical_atom_decomposition(haar2, TorusPoint::exact({Rat(1, 5)}), 10, 48);
    REQUIRE(atoms.size() == 21);
    double sum = 0.0;
    for (const auto& a : atoms) {
        double want = haar2_mass(t + double(a.k[0]));
        CHECK(a.mass_from_word == doctest::Approx(want).epsilon(1e-7));
        CHECK(a.mass_from_scaling == doctest::Approx(want).epsilon(1e-7));
        sum += a.mass_from_word;
    }
    CHECK(sum > 0.95);  // the |k| <= 10 window already carries nearly all mass
    CHECK_THROWS_AS(
        classical_atom_decomposition(LaurentFilter::builtin("cantor3"), TorusPoint::exact({Rat(0)}), 2, 16),
        std::invalid_argument);
}

}  // TEST_SUITE
