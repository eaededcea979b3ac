#include "solenoidal/msf.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "solenoidal/solenoid.hpp"

namespace solenoidal {

namespace {

Rat msf_norm(const LaurentFilter& f, const AtomOptions& o) {
    return o.norm ? *o.norm : Rat(f.det());
}

int word_depth_for_range(const DilationSpec& spec, int64_t k_range) {
    int depth = 1;
    for (int64_t ni : spec.diag) {
        int64_t cap = 1;
        int di = 0;
        while (cap <= k_range) {
            cap *= ni;
            ++di;
        }
        depth = std::max(depth, di + 1);
    }
    return depth;
}

}  // namespace

bool TorusBox::contains(const std::vector<double>& t) const {
    if (t.size() != lo.size()) return false;
    for (size_t i = 0; i < t.size(); ++i)
        if (t[i] < to_double(lo[i]) || t[i] >= to_double(hi[i])) return false;
    return true;
}

bool TorusBox::contains(const TorusPoint& t) const {
    if (static_cast<size_t>(t.dim()) != lo.size()) return false;
    if (!t.is_exact()) return contains(t.dbl());
    const auto& r = t.rat();
    for (size_t i = 0; i < r.size(); ++i)
        if (r[i] < lo[i] || r[i] >= hi[i]) return false;
    return true;
}

int FiberedSet::region_at(const std::vector<double>& t) const {
    for (size_t i = 0; i < regions.size(); ++i)
        if (regions[i].box.contains(t)) return static_cast<int>(i);
    return -1;
}

void validate_fibered_set(const FiberedSet& e, const DilationSpec& spec) {
    const size_t d = spec.diag.size();
    auto check_digit = [&](const Digit& a) {
        if (a.a.size() != d) throw std::invalid_argument("digit dimension mismatch");
        for (size_t i = 0; i < d; ++i)
            if (a.a[i] < 0 || a.a[i] >= spec.diag[i])
                throw std::invalid_argument("digit out of range");
    };
    for (const auto& reg : e.regions) {
        if (reg.box.lo.size() != d || reg.box.hi.size() != d)
            throw std::invalid_argument("box dimension mismatch");
        for (size_t i = 0; i < d; ++i) {
            if (reg.box.lo[i] < 0 || reg.box.hi[i] > 1 || !(reg.box.lo[i] < reg.box.hi[i]))
                throw std::invalid_argument("box must satisfy 0 <= lo < hi <= 1");
        }
        for (const auto& w : reg.fiber.words) {
            for (const auto& a : w.prefix) check_digit(a);
            for (const auto& a : w.period) check_digit(a);
        }
        for (const auto& cyl : reg.fiber.cylinders)
            for (const auto& a : cyl) check_digit(a);
    }
    for (size_t i = 0; i < e.regions.size(); ++i) {
        for (size_t j = i + 1; j < e.regions.size(); ++j) {
            bool overlap = true;
            for (size_t c = 0; c < d && overlap; ++c) {
                Rat lo = std::max(e.regions[i].box.lo[c], e.regions[j].box.lo[c]);
                Rat hi = std::min(e.regions[i].box.hi[c], e.regions[j].box.hi[c]);
                if (!(lo < hi)) overlap = false;
            }
            if (overlap) throw std::invalid_argument("regions overlap");
        }
    }
}

double lambda_mag2(const LaurentFilter& f, const LambdaRule& rule, const std::vector<double>& t,
                   int depth, const AtomOptions& o) {
    if (rule.kind == LambdaRule::Kind::Constant) return std::norm(rule.constant);
    if (rule.shift.size() != t.size()) throw std::invalid_argument("shift dimension mismatch");
    std::vector<double> x(t.size());
    for (size_t i = 0; i < t.size(); ++i) x[i] = t[i] + to_double(rule.shift[i]);
    auto phi = scaling_fn_hat(f, x, depth, o);
    double n2 = std::norm(phi.value);
    if (n2 < 1e-300) throw std::domain_error("lambda pole at the sample point");
    return 1.0 / n2;
}

double h_function(const LaurentFilter& f, const FiberedSet& e, const LambdaFunction& lambda,
                  const TorusPoint& t, int depth, const AtomOptions& o) {
    if (lambda.rules.size() != e.regions.size())
        throw std::invalid_argument("one lambda rule per region required");
    int r = e.region_at(t.dbl());
    if (r < 0) return 0.0;

    double lam2 = lambda_mag2(f, lambda.rules[static_cast<size_t>(r)], t.dbl(), depth, o);
    const auto& fiber = e.regions[static_cast<size_t>(r)].fiber;
    double mass = 0.0;
    for (const auto& w : fiber.words) {
        auto partials = atom_partial_products(f, t, w, depth, o);
        mass += partials.empty() ? 1.0 : partials.back();
    }
    MassOptions mo;
    mo.norm = o.norm;
    for (const auto& cyl : fiber.cylinders)
        mass += cylinder_mass(f, CylinderSet{t, cyl}, mo).value;
    return lam2 * mass;
}

OrthonormalityReport orthonormality_check(const LaurentFilter& f, const FiberedSet& e,
                                          const LambdaFunction& lambda,
                                          const std::vector<TorusPoint>& sample_points, int depth,
                                          double tol, const AtomOptions& o) {
    if (sample_points.empty()) throw std::invalid_argument("need at least one sample point");
    OrthonormalityReport rep;
    rep.samples = static_cast<int>(sample_points.size());
    rep.tol = tol;
    for (const auto& t : sample_points)
        rep.max_deviation = std::max(rep.max_deviation,
                                     std::abs(h_function(f, e, lambda, t, depth, o) - 1.0));
    rep.pass = rep.max_deviation < tol;
    return rep;
}

std::vector<TorusPoint> midpoint_samples(int dim, int count) {
    if (dim < 1 || count < 1) throw std::invalid_argument("need dim >= 1 and count >= 1");
    std::vector<TorusPoint> out;
    std::vector<int> idx(static_cast<size_t>(dim), 0);
    while (true) {
        std::vector<Rat> coords(static_cast<size_t>(dim));
        for (int i = 0; i < dim; ++i)
            coords[static_cast<size_t>(i)] = Rat(2 * idx[static_cast<size_t>(i)] + 1, 2 * count);
        out.push_back(TorusPoint::exact(std::move(coords)));
        int i = dim - 1;
        while (i >= 0 && ++idx[static_cast<size_t>(i)] == count) {
            idx[static_cast<size_t>(i)] = 0;
            --i;
        }
        if (i < 0) break;
    }
    return out;
}

namespace {

// membership of a finite-word sample in E, compared on all available digits
bool in_fibered_set(const FiberedSet& e, const ProductPoint& p) {
    int r = e.region_at(p.base.dbl());
    if (r < 0) return false;
    const auto& fiber = e.regions[static_cast<size_t>(r)].fiber;
    const int avail = p.word.has_period() ? std::max(p.word.depth(), 1) * 2 : p.word.depth();
    for (const auto& w : fiber.words) {
        bool ok = true;
        for (int j = 0; j < avail && ok; ++j) {
            if (!p.word.resolvable(j)) break;
            if (!(p.word.digit_at(j) == w.digit_at(j))) ok = false;
        }
        if (ok) return true;
    }
    for (const auto& cyl : fiber.cylinders) {
        bool ok = true;
        for (size_t j = 0; j < cyl.size() && ok; ++j) {
            int jj = static_cast<int>(j);
            if (!p.word.resolvable(jj)) break;
            if (!(p.word.digit_at(jj) == cyl[j])) ok = false;
        }
        if (ok) return true;
    }
    return false;
}

ProductPoint apply_shift(ProductPoint p, int n, const DilationSpec& spec) {
    for (; n > 0; --n) p = shift_sigma(p, spec);
    for (; n < 0; ++n) p = shift_sigma_inverse(p, spec);
    return p;
}

}  // namespace

bool DisjointnessReport::all_consistent_with_zero(double n_sigma) const {
    for (const auto& pe : pairs)
        if (pe.mean > n_sigma * pe.std_error + 1e-12) return false;
    return true;
}

DisjointnessReport shift_disjointness_check(const LaurentFilter& f, const FiberedSet& e,
                                            int j_range, int n_samples, int depth, uint64_t seed,
                                            const AtomOptions& o) {
    if (j_range < 0) throw std::invalid_argument("need j_range >= 0");
    if (depth <= j_range) throw std::invalid_argument("depth must exceed j_range");
    DisjointnessReport rep;
    rep.samples = n_samples;
    rep.depth = depth;
    rep.seed = seed;

    std::vector<std::pair<int, int>> shift_pairs;
    for (int j = -j_range; j <= j_range; ++j)
        for (int k = j + 1; k <= j_range; ++k) shift_pairs.push_back({j, k});
    std::vector<int> hits(shift_pairs.size(), 0);

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    MassOptions mo;
    mo.norm = o.norm;
    const int d = f.dim();
    for (int s = 0; s < n_samples; ++s) {
        std::vector<double> td(static_cast<size_t>(d));
        for (auto& v : td) v = unif(rng);
        TorusPoint base = TorusPoint::approx(td);
        SampledWord w = sample_word(f, base, depth, rng, mo);
        ProductPoint p{base, w.word};

        // p lies in sigma^j(E) iff sigma^{-j}(p) lies in E
        std::vector<bool> member(static_cast<size_t>(2 * j_range + 1), false);
        for (int j = -j_range; j <= j_range; ++j)
            member[static_cast<size_t>(j + j_range)] =
                in_fibered_set(e, apply_shift(p, -j, f.dilation()));
        for (size_t pi = 0; pi < shift_pairs.size(); ++pi) {
            auto [j, k] = shift_pairs[pi];
            if (member[static_cast<size_t>(j + j_range)] &&
                member[static_cast<size_t>(k + j_range)])
                ++hits[pi];
        }
    }
    for (size_t pi = 0; pi < shift_pairs.size(); ++pi) {
        OverlapEstimate est;
        est.j = shift_pairs[pi].first;
        est.k = shift_pairs[pi].second;
        est.hits = hits[pi];
        est.mean = static_cast<double>(hits[pi]) / n_samples;
        est.std_error = std::sqrt(est.mean * (1.0 - est.mean) / n_samples);
        rep.pairs.push_back(est);
    }
    return rep;
}

MsfVerdict msf_feasibility(const LaurentFilter& f, int fiber_samples, int depth, uint64_t seed,
                           const AtomOptions& o) {
    MsfVerdict v;
    if (auto cert = atomless_certificate(f, o)) {
        v.verdict = MsfFeasibility::AtomlessNoMSF;
        v.certificate = *cert;
        v.note = "coefficient bound keeps every per-level factor below 1; no fiber has atoms";
        return v;
    }
    Rat norm = msf_norm(f, o);
    double m1sq = f.mag2(std::vector<double>(static_cast<size_t>(f.dim()), 0.0));
    if (std::abs(m1sq - to_double(norm)) > 1e-6) {
        v.verdict = MsfFeasibility::Unknown;
        v.note = "no atomless certificate and |m(1)|^2 != norm, so the classical atom "
                 "candidates are unavailable";
        return v;
    }

    const int64_t k_range = 2;
    const int word_depth = word_depth_for_range(f.dilation(), k_range);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int s = 0; s < fiber_samples; ++s) {
        std::vector<double> td(static_cast<size_t>(f.dim()));
        for (auto& x : td) x = unif(rng);
        TorusPoint t = TorusPoint::approx(td);
        auto atoms = classical_atom_decomposition(f, t, k_range, depth, o);
        std::sort(atoms.begin(), atoms.end(),
                  [](const ClassicalAtom& a, const ClassicalAtom& b) {
                      return a.mass_from_word > b.mass_from_word;
                  });
        bool found = false;
        for (const auto& cand : atoms) {
            if (cand.mass_from_word < o.mass_floor) break;
            std::vector<BigInt> kb(cand.k.begin(), cand.k.end());
            DigitWord word = integer_to_word(kb, f.dilation(), word_depth);
            auto cls = classify_atom(f, t, word, depth, std::min(16, depth / 2), o);
            if (cls.verdict == AtomVerdict::ConvergesPositive) {
                v.witnesses.push_back(
                    MsfVerdict::Witness{t, cand.k, cls.mass_partial_products.back()});
                found = true;
                break;
            }
        }
        if (!found) {
            v.verdict = MsfFeasibility::Unknown;
            v.note = "a sampled fiber yielded no convergent atom among the classical candidates";
            return v;
        }
    }
    v.verdict = MsfFeasibility::AtomicFeasible;
    v.note = "every sampled fiber carries a certified atom witness";
    return v;
}

ShannonExample shannon_example() {
    ShannonExample ex{LaurentFilter::builtin("haar2"), FiberedSet{}, LambdaFunction{}};

    Digit one{{1}};
    Digit zero{{0}};
    FiberedRegion low;  // [0, 1/2): the winding of [-1, -1/2), all-ones word
    low.box = TorusBox{{Rat(0)}, {Rat(1, 2)}};
    low.fiber.words.push_back(DigitWord{{}, {one}});
    FiberedRegion high;  // [1/2, 1): the winding of [1/2, 1), all-zeros word
    high.box = TorusBox{{Rat(1, 2)}, {Rat(1)}};
    high.fiber.words.push_back(DigitWord{{}, {zero}});
    ex.E.regions = {std::move(low), std::move(high)};

    LambdaRule lam_low;
    lam_low.kind = LambdaRule::Kind::InverseScalingShift;
    lam_low.shift = {Rat(-1)};
    LambdaRule lam_high;
    lam_high.kind = LambdaRule::Kind::InverseScalingShift;
    lam_high.shift = {Rat(0)};
    ex.lambda.rules = {lam_low, lam_high};

    validate_fibered_set(ex.E, ex.filter.dilation());
    return ex;
}

}  // namespace solenoidal
