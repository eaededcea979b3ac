#include <benchmark/benchmark.h>

#include <cstdint>
#include <random>
#include <vector>

#include "solenoidal/fiber_measure.hpp"
#include "solenoidal/filters.hpp"
#include "solenoidal/solenoid.hpp"
#include "solenoidal/tau.hpp"

using namespace solenoidal;

namespace {

CylinderSet make_cylinder(const LaurentFilter& f, int depth, bool exact, uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto alphabet = digit_alphabet(f.dilation());
    CylinderSet c;
    if (exact) {
        std::vector<Rat> base;
        for (int i = 0; i < f.dim(); ++i) base.emplace_back(int64_t(rng() % 7), 7);
        c.base = TorusPoint::exact(std::move(base));
    } else {
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        std::vector<double> base;
        for (int i = 0; i < f.dim(); ++i) base.push_back(unif(rng));
        c.base = TorusPoint::approx(std::move(base));
    }
    for (int j = 0; j < depth; ++j) c.prefix.push_back(alphabet[rng() % alphabet.size()]);
    return c;
}

void BM_cylinder_mass_float(benchmark::State& state) {
    auto f = LaurentFilter::builtin("haar2");
    auto c = make_cylinder(f, static_cast<int>(state.range(0)), false, 11);
    for (auto _ : state) benchmark::DoNotOptimize(cylinder_mass(f, c).value);
}
BENCHMARK(BM_cylinder_mass_float)->RangeMultiplier(4)->Range(4, 256);

// the exact path multiplies trig sums whose root count grows with depth
void BM_cylinder_mass_exact(benchmark::State& state) {
    auto f = LaurentFilter::builtin("cantor3");
    auto c = make_cylinder(f, static_cast<int>(state.range(0)), true, 12);
    MassOptions o;
    o.exact = true;
    for (auto _ : state) benchmark::DoNotOptimize(cylinder_mass(f, c, o).value);
}
BENCHMARK(BM_cylinder_mass_exact)->DenseRange(2, 8, 2);

// additivity certificate: one preimage sum plus an exact zero test
void BM_children_additivity_exact(benchmark::State& state) {
    auto f = LaurentFilter::builtin("cantor3");
    auto c = make_cylinder(f, 4, true, 13);
    MassOptions o;
    o.exact = true;
    for (auto _ : state) benchmark::DoNotOptimize(children_sum_to_parent_exact(f, c, o));
}
BENCHMARK(BM_children_additivity_exact);

void BM_total_mass_telescoping(benchmark::State& state) {
    auto f = LaurentFilter::builtin("haar2");
    auto t = TorusPoint::exact({Rat(1, 7)});
    int k = static_cast<int>(state.range(0));
    MassOptions o;
    o.exact = true;
    for (auto _ : state)
        benchmark::DoNotOptimize(total_mass_at_depth(f, t, k, TotalMassMode::Telescoping, o).value);
}
BENCHMARK(BM_total_mass_telescoping)->RangeMultiplier(2)->Range(8, 64);

// level-n density product: support growth is the cost driver
void BM_pushforward_integral(benchmark::State& state) {
    auto f = LaurentFilter::builtin("haar2");
    auto test = LaurentPoly::monomial({1}, RatC{Rat(1), Rat(0)});
    int n = static_cast<int>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(integrate_pushforward(f, test, n).value);
}
BENCHMARK(BM_pushforward_integral)->DenseRange(1, 5);

void BM_sample_word(benchmark::State& state) {
    auto f = LaurentFilter::builtin("cantor3");
    auto t = TorusPoint::approx({0.37});
    std::mt19937_64 rng(14);
    for (auto _ : state) benchmark::DoNotOptimize(sample_word(f, t, 16, rng).word.prefix.size());
}
BENCHMARK(BM_sample_word);

void BM_theta_roundtrip(benchmark::State& state) {
    DilationSpec spec{{2, 3}};
    auto alphabet = digit_alphabet(spec);
    std::mt19937_64 rng(15);
    ProductPoint p{TorusPoint::exact({Rat(3, 7), Rat(2, 5)}), {}};
    for (int j = 0; j < 8; ++j) p.word.prefix.push_back(alphabet[rng() % alphabet.size()]);
    for (auto _ : state) {
        auto s = theta(p, spec, 8);
        benchmark::DoNotOptimize(theta_inverse(s, spec).word.prefix.size());
    }
}
BENCHMARK(BM_theta_roundtrip);

// exact QMF residual at a rational point: dominated by cyclotomic reduction
void BM_qmf_residual_exact(benchmark::State& state) {
    auto f = LaurentFilter::builtin("haar2");
    std::vector<Rat> t{Rat(13, 97)};
    for (auto _ : state) benchmark::DoNotOptimize(qmf_residual_exact(f, t, Rat(2)).has_value());
}
BENCHMARK(BM_qmf_residual_exact);

}  // namespace

BENCHMARK_MAIN();
