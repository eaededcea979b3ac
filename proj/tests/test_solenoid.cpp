#include <random>

#include "doctest.h"
#include "solenoidal/solenoid.hpp"

using namespace solenoidal;

namespace {

ProductPoint random_product_point(std::mt19937_64& rng, const DilationSpec& spec, int depth,
                                  int64_t den = 613) {
    std::vector<Rat> base(static_cast<size_t>(spec.dim()));
    for (auto& b : base) b = Rat(int64_t(rng() % den), den);
    ProductPoint p{TorusPoint::exact(base), {}};
    auto alphabet = digit_alphabet(spec);
    for (int j = 0; j < depth; ++j) p.word.prefix.push_back(alphabet[rng() % alphabet.size()]);
    return p;
}

bool same_point(const TorusPoint& a, const TorusPoint& b) {
    auto ra = a.rat(), rb = b.rat();
    if (ra.size() != rb.size()) return false;
    for (size_t i = 0; i < ra.size(); ++i)
        if (ra[i] != rb[i]) return false;
    return true;
}

}  // namespace

TEST_SUITE("solenoid") {

TEST_CASE("cross-section puts t in level zero") {
    DilationSpec spec{{2, 3}};
    TorusPoint t = TorusPoint::exact({Rat(3, 7), Rat(1, 5)});
    auto s = cross_section_c(t, spec, 4);
    REQUIRE(s.levels() == 5);  // levels 0..depth
    CHECK(same_point(s.coords[0], t));
    CHECK(s.coords[2].rat()[0] == Rat(3, 28));   // 3/7 / 4
    CHECK(s.coords[2].rat()[1] == Rat(1, 45));   // 1/5 / 9
    CHECK(compatibility_defect(s, spec) == 0.0);
}

TEST_CASE("embedding and its inverse round-trip") {
    std::mt19937_64 rng(211);
    for (const auto diag : {std::vector<int64_t>{2}, std::vector<int64_t>{3},
                            std::vector<int64_t>{2, 2}, std::vector<int64_t>{2, 3}}) {
        DilationSpec spec{diag};
        for (int it = 0; it < 50; ++it) {
            auto p = random_product_point(rng, spec, 6);
            auto s = theta(p, spec, 6);
            CHECK(compatibility_defect(s, spec) == 0.0);
            auto back = theta_inverse(s, spec);
            CHECK(same_point(back.base, p.base));
            REQUIRE(back.word.prefix.size() == 6);
            for (size_t j = 0; j < back.word.prefix.size(); ++j)
                CHECK(back.word.prefix[j].a == p.word.prefix[j].a);
        }
    }
}

TEST_CASE("embedding rejects unresolvable words") {
    DilationSpec spec{{2}};
    ProductPoint p{TorusPoint::exact({Rat(1, 3)}), {}};
    CHECK_THROWS_AS(theta(p, spec, 4), std::invalid_argument);
    p.word.period.push_back(Digit{{1}});
    CHECK_NOTHROW(theta(p, spec, 12));
}

TEST_CASE("shift and unshift invert each other") {
    DilationSpec spec{{3}};
    std::mt19937_64 rng(223);
    for (int it = 0; it < 50; ++it) {
        auto p = random_product_point(rng, spec, 5);
        auto down = shift_sigma(p, spec);
        // base descends along the first digit
        CHECK(down.base.rat()[0] == (p.base.rat()[0] + Rat(p.word.prefix[0].a[0])) / 3);
        auto up = shift_sigma_inverse(down, spec);
        CHECK(same_point(up.base, p.base));
        REQUIRE(up.word.prefix.size() >= p.word.prefix.size());
        for (size_t j = 0; j < p.word.prefix.size(); ++j)
            CHECK(up.word.prefix[j].a == p.word.prefix[j].a);

        auto other = shift_sigma(shift_sigma_inverse(p, spec), spec);
        CHECK(same_point(other.base, p.base));
        for (size_t j = 0; j < p.word.prefix.size(); ++j)
            CHECK(other.word.prefix[j].a == p.word.prefix[j].a);
    }
    ProductPoint bare{TorusPoint::exact({Rat(1, 2)}), {}};
    CHECK_THROWS_AS(shift_sigma(bare, spec), std::invalid_argument);
}

TEST_CASE("shift matches the level structure") {
    // pi_n(sigma p) = pi_{n+1}(p): shifting then embedding drops one level
    DilationSpec spec{{2}};
    std::mt19937_64 rng(227);
    for (int it = 0; it < 20; ++it) {
        auto p = random_product_point(rng, spec, 8);
        auto s = theta(p, spec, 8);
        auto shifted = theta(shift_sigma(p, spec), spec, 7);
        for (int n = 0; n <= 7; ++n)
            CHECK(same_point(shifted.coords[size_t(n)], s.coords[size_t(n) + 1]));
    }
}

TEST_CASE("winding line is beta-compatible and unreduced at heart") {
    DilationSpec spec{{2, 2}};
    auto s = winding_line({Rat(9, 4), Rat(-3, 7)}, spec, 5);
    REQUIRE(s.levels() == 6);
    CHECK(compatibility_defect(s, spec) == 0.0);
    CHECK(s.coords[0].rat()[0] == Rat(1, 4));    // 9/4 mod 1
    CHECK(s.coords[1].rat()[0] == Rat(1, 8));    // 9/8 mod 1
    CHECK(s.coords[1].rat()[1] == Rat(11, 14));  // -3/14 mod 1

    auto sf = winding_line_approx({2.25, -3.0 / 7.0}, spec, 5);
    CHECK(compatibility_defect(sf, spec) < 1e-12);
}

TEST_CASE("defect flags corrupted sequences") {
    DilationSpec spec{{2}};
    auto s = cross_section_c(TorusPoint::exact({Rat(1, 3)}), spec, 4);
    REQUIRE(compatibility_defect(s, spec) == 0.0);
    s.coords[2] = TorusPoint::exact({Rat(1, 5)});
    CHECK(compatibility_defect(s, spec) == 1.0);

    auto sf = winding_line_approx({0.37}, spec, 4);
    sf.coords[3] = TorusPoint::approx({sf.coords[3].dbl()[0] + 1e-4});
    CHECK(compatibility_defect(sf, spec) == doctest::Approx(2e-4).epsilon(0.1));
}

}  // TEST_SUITE
