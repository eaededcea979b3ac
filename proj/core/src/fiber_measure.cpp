#include "solenoidal/fiber_measure.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>

namespace solenoidal {

Rat mass_norm(const LaurentFilter& f, const MassOptions& o) {
    if (o.norm) {
        if (*o.norm <= 0) throw std::invalid_argument("normalization constant must be positive");
        return *o.norm;
    }
    return Rat(f.det());
}

static void check_cylinder(const LaurentFilter& f, const CylinderSet& c) {
    if (c.base.dim() != f.dim()) throw std::invalid_argument("cylinder base dimension mismatch");
}

MassValue cylinder_mass(const LaurentFilter& f, const CylinderSet& c, const MassOptions& o) {
    check_cylinder(f, c);
    Rat norm = mass_norm(f, o);
    double norm_d = to_double(norm);
    MassValue out;
    out.value = 1.0;
    bool exact_path = o.exact && f.is_exact() && c.base.is_exact();
    if (exact_path) out.exact = TrigSum::constant(RatC{Rat(1), Rat(0)});

    TorusPoint p = c.base;
    for (const auto& dg : c.prefix) {
        p = refine(p, dg, f.dilation());
        out.value *= f.mag2(p) / norm_d;
        if (exact_path) {
            TrigSum factor = f.mag2_trig(p.rat());
            if (factor.is_zero()) {
                // pin the float value too: a vanishing factor is often a
                // rounded-to-tiny double, and downstream code tests == 0
                out.exact = TrigSum();
                out.value = 0.0;
                return out;
            }
            TrigSum scaled;
            for (const auto& [r, cf] : factor.terms())
                scaled.add_term(r, RatC{cf.re / norm, cf.im / norm});
            out.exact = *out.exact * scaled;
        }
    }
    return out;
}

std::vector<MassValue> children_masses(const LaurentFilter& f, const CylinderSet& c,
                                       const MassOptions& o) {
    std::vector<MassValue> out;
    CylinderSet child = c;
    child.prefix.push_back(Digit{std::vector<int64_t>(static_cast<size_t>(f.dim()), 0)});
    for (const auto& a : digit_alphabet(f.dilation())) {
        child.prefix.back() = a;
        out.push_back(cylinder_mass(f, child, o));
    }
    return out;
}

bool children_sum_to_parent_exact(const LaurentFilter& f, const CylinderSet& c,
                                  const MassOptions& o) {
    check_cylinder(f, c);
    if (!f.is_exact() || !c.base.is_exact())
        throw std::invalid_argument("exact additivity needs an exact filter and base");
    Rat norm = mass_norm(f, o);

    TorusPoint p = c.base;
    std::vector<TrigSum> factors;
    for (const auto& dg : c.prefix) {
        p = refine(p, dg, f.dilation());
        factors.push_back(f.mag2_trig(p.rat()));
    }
    // sum of children factors at the endpoint must equal the norm constant;
    // then sum_a mass(c + a) - mass(c) = mass(c) * (sum_a F_a / norm - 1) = 0.
    TrigSum sum;
    for (const auto& a : digit_alphabet(f.dilation()))
        sum = sum + f.mag2_trig(refine(p, a, f.dilation()).rat());
    sum.add_term(Rat(0), RatC{-norm, Rat(0)});
    if (sum.is_zero()) return true;
    // an exactly-null parent makes both sides zero regardless
    for (const auto& factor : factors)
        if (factor.is_zero()) return true;
    return false;
}

namespace {

// Exact brute-force total mass: enumerate all det^k digit words depth-first,
// carrying the partial product of |m|^2 values as integer-pair coefficients
// over the implicit denominator K^level, keyed by exponent residue mod q.
struct BruteExact {
    const LaurentFilter& f;
    const DilationSpec& spec;
    int k;
    int64_t q = 0;
    std::vector<std::pair<std::vector<int64_t>, std::pair<BigInt, BigInt>>> mag2_int;  // over K
    std::map<int64_t, std::pair<BigInt, BigInt>> acc;
    std::vector<Digit> alphabet;

    explicit BruteExact(const LaurentFilter& filter, int depth)
        : f(filter), spec(filter.dilation()), k(depth), alphabet(digit_alphabet(filter.dilation())) {}

    int64_t key_of(const Rat& r) const {
        Rat red = frac_mod1(r);
        BigInt j = numerator(red) * (BigInt(q) / denominator(red));
        return j.convert_to<int64_t>();
    }

    void run(const std::vector<Rat>& t) {
        BigInt qq(1);
        for (size_t i = 0; i < t.size(); ++i) {
            BigInt qi = denominator(t[i]) * ipow(BigInt(spec.diag[i]), static_cast<unsigned>(k));
            qq = lcm(qq, qi);
        }
        if (qq > BigInt(int64_t(1) << 62)) throw std::overflow_error("brute-force modulus too large");
        q = qq.convert_to<int64_t>();

        Rat kk(f.K());
        for (const auto& [e, c] : f.mag2_poly().terms()) {
            Rat rn = c.re * kk, in = c.im * kk;
            if (denominator(rn) != 1 || denominator(in) != 1)
                throw std::logic_error("|m|^2 coefficients not integral over 1/K");
            mag2_int.push_back({e, {numerator(rn), numerator(in)}});
        }

        std::map<int64_t, std::pair<BigInt, BigInt>> unit;
        unit[0] = {BigInt(1), BigInt(0)};
        descend(t, 0, unit);
    }

    void descend(const std::vector<Rat>& p, int level,
                 const std::map<int64_t, std::pair<BigInt, BigInt>>& node) {
        if (level == k) {
            for (const auto& [key, c] : node) {
                auto& slot = acc[key];
                slot.first += c.first;
                slot.second += c.second;
            }
            return;
        }
        for (const auto& a : alphabet) {
            std::vector<Rat> pp(p.size());
            for (size_t i = 0; i < p.size(); ++i) pp[i] = (p[i] + a.a[i]) / spec.diag[i];

            // factor |m|^2(e(pp)) as integer pairs over K, keyed mod q
            std::map<int64_t, std::pair<BigInt, BigInt>> child;
            for (const auto& [e, c] : mag2_int) {
                Rat r(0);
                for (size_t i = 0; i < pp.size(); ++i) r += Rat(e[i]) * pp[i];
                int64_t fkey = key_of(r);
                for (const auto& [nkey, nc] : node) {
                    int64_t ck = nkey + fkey >= q ? nkey + fkey - q : nkey + fkey;
                    auto& slot = child[ck];
                    // (a+bi)(c+di)
                    slot.first += nc.first * c.first - nc.second * c.second;
                    slot.second += nc.first * c.second + nc.second * c.first;
                }
            }
            descend(pp, level + 1, child);
        }
    }

    TrigSum result(const Rat& norm) const {
        Rat den = ipow(BigInt(f.K()), static_cast<unsigned>(k));
        Rat normpow(1);
        for (int i = 0; i < k; ++i) normpow *= norm;
        TrigSum out;
        for (const auto& [key, c] : acc)
            out.add_term(Rat(key, q), RatC{Rat(c.first) / den / normpow, Rat(c.second) / den / normpow});
        return out;
    }
};

}  // namespace

MassValue total_mass_at_depth(const LaurentFilter& f, const TorusPoint& t, int k,
                              TotalMassMode mode, const MassOptions& o) {
    if (k < 0) throw std::invalid_argument("negative depth");
    if (t.dim() != f.dim()) throw std::invalid_argument("dimension mismatch");
    Rat norm = mass_norm(f, o);
    MassValue out;

    if (mode == TotalMassMode::Telescoping) {
        if (!f.is_exact())
            throw std::invalid_argument("telescoping total mass needs an exact filter");
        RatC scale{Rat(f.det()) / norm, Rat(0)};
        LaurentPoly T = LaurentPoly::constant(f.dim(), RatC{Rat(1), Rat(0)});
        for (int j = 0; j < k; ++j) {
            LaurentPoly next = f.mag2_poly().mul(T).transfer(f.dilation().diag);
            LaurentPoly scaled(f.dim());
            for (const auto& [e, c] : next.terms()) scaled.add_term(e, c * scale);
            T = std::move(scaled);
        }
        if (t.is_exact()) {
            TrigSum v = T.eval_trig(t.rat());
            out.value = v.eval().real();
            if (o.exact) out.exact = std::move(v);
        } else {
            out.value = T.eval(t.dbl()).real();
        }
        return out;
    }

    if (k > 8) throw std::invalid_argument("brute-force total mass capped at depth 8");
    if (o.exact && f.is_exact() && t.is_exact()) {
        BruteExact brute(f, k);
        brute.run(t.rat());
        TrigSum v = brute.result(norm);
        out.value = v.eval().real();
        out.exact = std::move(v);
        return out;
    }
    // float brute force
    double norm_d = to_double(norm);
    auto alphabet = digit_alphabet(f.dilation());
    double total = 0.0;
    std::function<void(const std::vector<double>&, double, int)> rec =
        [&](const std::vector<double>& p, double prod, int level) {
            if (level == k) {
                total += prod;
                return;
            }
            for (const auto& a : alphabet) {
                std::vector<double> pp(p.size());
                for (size_t i = 0; i < p.size(); ++i)
                    pp[i] = (p[i] + static_cast<double>(a.a[i])) / static_cast<double>(f.dilation().diag[i]);
                rec(pp, prod * f.mag2(pp) / norm_d, level + 1);
            }
        };
    rec(t.dbl(), 1.0, 0);
    out.value = total;
    return out;
}

double mass_envelope(const LaurentFilter& f, int k, const MassOptions& o) {
    Rat norm = mass_norm(f, o);
    auto cb = coefficient_bound(f);
    double ratio = cb.bound_sq ? to_double(*cb.bound_sq / norm)
                               : cb.bound * cb.bound / to_double(norm);
    return std::pow(ratio, k);
}

SampledWord sample_word(const LaurentFilter& f, const TorusPoint& t, int depth,
                        std::mt19937_64& rng, const MassOptions& o) {
    if (t.dim() != f.dim()) throw std::invalid_argument("dimension mismatch");
    Rat norm = mass_norm(f, o);
    double norm_d = to_double(norm);
    auto alphabet = digit_alphabet(f.dilation());
    SampledWord out;
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<double> p = t.dbl();
    std::vector<double> weights(alphabet.size());
    for (int j = 0; j < depth; ++j) {
        double sum = 0.0;
        for (size_t ai = 0; ai < alphabet.size(); ++ai) {
            std::vector<double> pp(p.size());
            for (size_t i = 0; i < p.size(); ++i)
                pp[i] = (p[i] + static_cast<double>(alphabet[ai].a[i])) /
                        static_cast<double>(f.dilation().diag[i]);
            weights[ai] = f.mag2(pp) / norm_d;
            sum += weights[ai];
        }
        if (sum <= 0.0) throw std::domain_error("conditional masses vanish along the branch");
        if (std::abs(sum - 1.0) > 1e-9) out.renormalized = true;
        double u = unif(rng) * sum;
        size_t pick = alphabet.size() - 1;
        double accum = 0.0;
        for (size_t ai = 0; ai < alphabet.size(); ++ai) {
            accum += weights[ai];
            if (u < accum) {
                pick = ai;
                break;
            }
        }
        out.word.prefix.push_back(alphabet[pick]);
        std::vector<double> pp(p.size());
        for (size_t i = 0; i < p.size(); ++i)
            pp[i] = (p[i] + static_cast<double>(alphabet[pick].a[i])) /
                    static_cast<double>(f.dilation().diag[i]);
        p = std::move(pp);
    }
    return out;
}

EventEstimate estimate_event(const LaurentFilter& f, const TorusPoint& t,
                             const std::function<bool(const DigitWord&)>& predicate, int samples,
                             int depth, uint64_t seed, const MassOptions& o) {
    if (samples <= 0) throw std::invalid_argument("need at least one sample");
    EventEstimate out;
    out.samples = samples;
    std::mt19937_64 rng(seed);
    int hits = 0;
    for (int s = 0; s < samples; ++s) {
        SampledWord w = sample_word(f, t, depth, rng, o);
        out.any_renormalized |= w.renormalized;
        if (predicate(w.word)) ++hits;
    }
    out.mean = static_cast<double>(hits) / samples;
    out.std_error = std::sqrt(out.mean * (1.0 - out.mean) / samples);
    return out;
}

}  // namespace solenoidal
