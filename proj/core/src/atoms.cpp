#include "solenoidal/atoms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace solenoidal {

namespace {

Rat atom_norm(const LaurentFilter& f, const AtomOptions& o) {
    if (o.norm) {
        if (*o.norm <= 0) throw std::invalid_argument("normalization constant must be positive");
        return *o.norm;
    }
    return Rat(f.det());
}

// finite words are read with an implicit zero tail
Digit digit_for_level(const DigitWord& w, int j, int dim) {
    if (w.resolvable(j)) return w.digit_at(j);
    return Digit{std::vector<int64_t>(static_cast<size_t>(dim), 0)};
}

std::optional<Rat> rationalize(double x, int64_t max_den, double eps) {
    // continued-fraction convergents of the fractional position
    double y = x - std::floor(x);
    int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    double v = y;
    for (int it = 0; it < 64; ++it) {
        double fl = std::floor(v);
        if (fl > 4e18) break;
        auto a = static_cast<int64_t>(fl);
        int64_t p2 = a * p1 + p0, q2 = a * q1 + q0;
        if (q2 > max_den || q2 <= 0) break;
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        double approx = static_cast<double>(p1) / static_cast<double>(q1);
        if (std::abs(approx - y) < eps) return frac_mod1(Rat(p1, q1));
        double rem = v - fl;
        if (rem < 1e-15) break;
        v = 1.0 / rem;
    }
    return std::nullopt;
}

double torus_dist(const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        double x = std::abs(a[i] - b[i]);
        x = std::min(x, 1.0 - x);
        d = std::max(d, x);
    }
    return d;
}

}  // namespace

std::vector<double> atom_partial_products(const LaurentFilter& f, const TorusPoint& t,
                                          const DigitWord& word, int n_terms,
                                          const AtomOptions& o) {
    if (t.dim() != f.dim()) throw std::invalid_argument("dimension mismatch");
    double norm_d = to_double(atom_norm(f, o));
    std::vector<double> out;
    out.reserve(static_cast<size_t>(std::max(n_terms, 0)));
    TorusPoint p = t;
    double prod = 1.0;
    for (int j = 0; j < n_terms; ++j) {
        p = refine(p, digit_for_level(word, j, f.dim()), f.dilation());
        prod *= f.mag2(p) / norm_d;
        out.push_back(prod);
    }
    return out;
}

AtomCandidate classify_atom(const LaurentFilter& f, const TorusPoint& t, const DigitWord& word,
                            int n_terms, int decay_window, const AtomOptions& o) {
    if (decay_window < 4 || n_terms < decay_window)
        throw std::invalid_argument("need n_terms >= decay_window >= 4");
    if (t.dim() != f.dim()) throw std::invalid_argument("dimension mismatch");

    AtomCandidate out;
    out.base = t;
    out.word = word;
    double norm_d = to_double(atom_norm(f, o));
    const bool exact_path = f.is_exact() && t.is_exact();

    TorusPoint p = t;
    double prod = 1.0;
    std::vector<double> factors;
    factors.reserve(static_cast<size_t>(n_terms));
    for (int j = 0; j < n_terms; ++j) {
        p = refine(p, digit_for_level(word, j, f.dim()), f.dilation());
        double fac = f.mag2(p) / norm_d;
        if (fac > 1.0 + 1e-12) out.factor_above_one = true;
        if (fac < 1e-14 && exact_path && f.mag2_trig(p.rat()).is_zero()) {
            out.mass_partial_products.resize(static_cast<size_t>(n_terms), 0.0);
            out.verdict = AtomVerdict::DecaysToZero;
            out.reason = "a factor vanishes exactly";
            return out;
        }
        factors.push_back(fac);
        prod *= fac;
        out.mass_partial_products.push_back(prod);
    }

    if (out.mass_partial_products.back() < o.mass_floor) {
        out.verdict = AtomVerdict::DecaysToZero;
        out.reason = "partial products fell below the mass floor";
        return out;
    }

    // trailing-window analysis of the log increments
    double max_inc = 0.0;
    std::vector<double> inc;
    for (int j = n_terms - decay_window; j < n_terms; ++j) {
        double d = std::abs(std::log(factors[static_cast<size_t>(j)]));
        inc.push_back(d);
        max_inc = std::max(max_inc, d);
    }
    if (max_inc <= 1e-14) {
        out.verdict = AtomVerdict::ConvergesPositive;
        out.reason = "factors flat at 1 across the window";
        return out;
    }
    double worst_ratio = 0.0;
    bool ratio_defined = false;
    for (size_t j = 0; j + 1 < inc.size(); ++j) {
        if (inc[j] <= 1e-300) continue;
        worst_ratio = std::max(worst_ratio, inc[j + 1] / inc[j]);
        ratio_defined = true;
    }
    if (ratio_defined && worst_ratio < 0.95) {
        double tail = inc.back() * worst_ratio / (1.0 - worst_ratio);
        if (tail < 1e-9) {
            out.verdict = AtomVerdict::ConvergesPositive;
            out.reason = "log increments geometrically summable";
            return out;
        }
    }
    out.verdict = AtomVerdict::Inconclusive;
    out.reason = "no geometric bound on the log increments over the window";
    return out;
}

std::optional<AtomlessCertificate> atomless_certificate(const LaurentFilter& f,
                                                        const AtomOptions& o) {
    Rat norm = atom_norm(f, o);
    CoefficientBound cb = coefficient_bound(f);
    if (cb.bound_sq) {
        if (*cb.bound_sq < norm) {
            AtomlessCertificate cert;
            cert.ratio = to_double(*cb.bound_sq / norm);
            if (cb.bound_sq_is_exact) cert.ratio_exact = *cb.bound_sq / norm;
            return cert;
        }
        return std::nullopt;
    }
    double b2 = cb.bound * cb.bound;
    double norm_d = to_double(norm);
    if (b2 < norm_d * (1.0 - 1e-12)) return AtomlessCertificate{b2 / norm_d, std::nullopt};
    return std::nullopt;
}

std::vector<ZmHit> find_Zm(const LaurentFilter& f, int grid_resolution, double tolerance,
                           const AtomOptions& o) {
    const int d = f.dim();
    int res = grid_resolution > 0 ? grid_resolution : (d == 1 ? 8192 : 128);
    Rat norm = atom_norm(f, o);
    double norm_d = to_double(norm);

    auto value_at = [&](const std::vector<double>& x) { return f.mag2(x); };

    // collect strict local maxima of |m|^2 on the cyclic grid
    std::vector<std::vector<double>> seeds;
    std::vector<int> idx(static_cast<size_t>(d), 0);
    std::vector<double> x(static_cast<size_t>(d), 0.0);
    const double h = 1.0 / res;
    while (true) {
        for (int i = 0; i < d; ++i) x[static_cast<size_t>(i)] = idx[static_cast<size_t>(i)] * h;
        double v = value_at(x);
        bool is_max = true;
        for (int i = 0; i < d && is_max; ++i) {
            for (int s : {-1, 1}) {
                std::vector<double> y = x;
                y[static_cast<size_t>(i)] =
                    std::fmod(y[static_cast<size_t>(i)] + s * h + 1.0, 1.0);
                if (value_at(y) > v) {
                    is_max = false;
                    break;
                }
            }
        }
        if (is_max && v > norm_d * 0.5) seeds.push_back(x);
        int i = d - 1;
        while (i >= 0 && ++idx[static_cast<size_t>(i)] == res) {
            idx[static_cast<size_t>(i)] = 0;
            --i;
        }
        if (i < 0) break;
    }

    // refine each seed by cyclic coordinate-wise ternary search
    std::vector<ZmHit> hits;
    for (auto& seed : seeds) {
        std::vector<double> c = seed;
        double width = 2.0 * h;
        for (int sweep = 0; sweep < 80; ++sweep) {
            for (int i = 0; i < d; ++i) {
                double lo = c[static_cast<size_t>(i)] - width / 2, hi = lo + width;
                for (int it = 0; it < 40; ++it) {
                    double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
                    std::vector<double> y1 = c, y2 = c;
                    y1[static_cast<size_t>(i)] = std::fmod(m1 + 2.0, 1.0);
                    y2[static_cast<size_t>(i)] = std::fmod(m2 + 2.0, 1.0);
                    if (value_at(y1) < value_at(y2))
                        lo = m1;
                    else
                        hi = m2;
                }
                c[static_cast<size_t>(i)] = std::fmod((lo + hi) / 2 + 2.0, 1.0);
            }
            width = std::max(width / 4, 1e-15);
        }
        double achieved = value_at(c);
        if (std::abs(achieved - norm_d) >= tolerance) continue;
        bool dup = false;
        for (const auto& hit : hits)
            if (torus_dist(hit.t.dbl(), c) < h) dup = true;
        if (dup) continue;

        ZmHit hit;
        hit.mag2 = achieved;
        hit.exact_confirmed = false;
        if (f.is_exact()) {
            std::vector<Rat> snapped;
            bool all = true;
            for (double ci : c) {
                auto r = rationalize(ci, 4096, 1e-7);
                if (!r) {
                    all = false;
                    break;
                }
                snapped.push_back(*r);
            }
            if (all) {
                TrigSum s = f.mag2_trig(snapped);
                s.add_term(Rat(0), RatC{-norm, Rat(0)});
                if (s.is_zero()) {
                    hit.t = TorusPoint::exact(snapped);
                    hit.exact_confirmed = true;
                    hit.mag2 = norm_d;
                }
            }
        }
        if (!hit.exact_confirmed) hit.t = TorusPoint::approx(c);
        hits.push_back(std::move(hit));
    }
    return hits;
}

std::vector<CycleReport> candidate_cycle_rationals(const LaurentFilter& f, int l_max,
                                                   const AtomOptions& o) {
    if (f.dim() != 1)
        throw std::invalid_argument("cycle enumeration is one-dimensional; higher d composes "
                                    "coordinatewise");
    if (l_max < 1) throw std::invalid_argument("need l_max >= 1");
    const int64_t N = f.dilation().diag[0];
    Rat norm = atom_norm(f, o);
    double norm_d = to_double(norm);

    auto orbit_in_Zm = [&](const Rat& r, int l) {
        Rat cur = r;
        for (int j = 0; j < l; ++j) {
            if (f.is_exact()) {
                TrigSum s = f.mag2_trig({cur});
                s.add_term(Rat(0), RatC{-norm, Rat(0)});
                if (!s.is_zero()) return false;
            } else {
                if (std::abs(f.mag2(std::vector<double>{to_double(cur)}) - norm_d) > 1e-9)
                    return false;
            }
            cur = frac_mod1(cur * N);
        }
        return true;
    };

    std::vector<CycleReport> out;
    for (int l = 1; l <= l_max; ++l) {
        CycleReport rep;
        rep.l = l;
        BigInt q = ipow(BigInt(N), static_cast<unsigned>(l)) - 1;
        if (q > (BigInt(1) << 40)) throw std::overflow_error("cycle denominator too large");
        int64_t qi = q.convert_to<int64_t>();
        for (int64_t p = 0; p < qi; ++p) {
            Rat r(p, qi);
            rep.rationals.push_back(r);
            if (orbit_in_Zm(r, l)) rep.in_Zm.push_back(r);
        }
        out.push_back(std::move(rep));
    }
    return out;
}

ScalingFnValue scaling_fn_hat(const LaurentFilter& f, const std::vector<double>& t_real,
                              int n_terms, const AtomOptions& o) {
    if (static_cast<int>(t_real.size()) != f.dim())
        throw std::invalid_argument("dimension mismatch");
    if (n_terms < 1) throw std::invalid_argument("need n_terms >= 1");
    Rat norm = atom_norm(f, o);
    double root_norm = std::sqrt(to_double(norm));

    ScalingFnValue out;
    out.t = t_real;
    out.n_terms = n_terms;
    std::vector<double> x = t_real;
    std::complex<double> val{1.0, 0.0};
    for (int j = 0; j < n_terms; ++j) {
        std::vector<double> w(x.size());
        for (size_t i = 0; i < x.size(); ++i) {
            x[i] /= static_cast<double>(f.dilation().diag[i]);
            w[i] = x[i] - std::floor(x[i]);
        }
        val *= f.eval(w) / root_norm;
    }
    out.value = val;

    // geometric tail bound, valid when the factors approach 1, i.e. |m(1)| = sqrt(norm)
    double m1_sq = f.mag2(std::vector<double>(x.size(), 0.0));
    if (std::abs(m1_sq - to_double(norm)) < 1e-9) {
        double lip = 0.0;
        for (const auto& term : f.filter_terms()) {
            double e2 = 0.0;
            for (int64_t e : term.exp) e2 += static_cast<double>(e) * static_cast<double>(e);
            lip += std::abs(term.approx) * std::sqrt(e2);
        }
        lip *= 2.0 * std::numbers::pi;
        double lam = static_cast<double>(
            *std::min_element(f.dilation().diag.begin(), f.dilation().diag.end()));
        double tnorm = 0.0;
        for (double ti : t_real) tnorm += ti * ti;
        tnorm = std::sqrt(tnorm);
        double tail_sum = (lip / root_norm) * tnorm * std::pow(lam, -n_terms) / (lam - 1.0);
        out.tail_bound = std::abs(val) * std::expm1(tail_sum);
    }
    return out;
}

std::vector<ClassicalAtom> classical_atom_decomposition(const LaurentFilter& f,
                                                        const TorusPoint& t, int64_t k_range,
                                                        int n_terms, const AtomOptions& o) {
    if (t.dim() != f.dim()) throw std::invalid_argument("dimension mismatch");
    if (k_range < 0) throw std::invalid_argument("need k_range >= 0");
    Rat norm = atom_norm(f, o);
    double m1_sq = f.mag2(std::vector<double>(static_cast<size_t>(f.dim()), 0.0));
    if (std::abs(m1_sq - to_double(norm)) > 1e-6)
        throw std::invalid_argument("classical decomposition needs |m(1)|^2 = norm");

    const int d = f.dim();
    int depth = 1;
    for (int i = 0; i < d; ++i) {
        int64_t cap = 1, ni = f.dilation().diag[static_cast<size_t>(i)];
        int di = 0;
        while (cap <= k_range) {
            cap *= ni;
            ++di;
        }
        depth = std::max(depth, di + 1);
    }

    std::vector<ClassicalAtom> out;
    std::vector<int64_t> k(static_cast<size_t>(d), -k_range);
    std::vector<double> base = t.dbl();
    while (true) {
        std::vector<BigInt> kb(k.begin(), k.end());
        DigitWord word = integer_to_word(kb, f.dilation(), depth);
        auto partials = atom_partial_products(f, t, word, n_terms, o);
        std::vector<double> shifted(base.size());
        for (size_t i = 0; i < base.size(); ++i)
            shifted[i] = base[i] + static_cast<double>(k[i]);
        auto phi = scaling_fn_hat(f, shifted, n_terms, o);
        out.push_back(ClassicalAtom{k, partials.empty() ? 1.0 : partials.back(),
                                    std::norm(phi.value)});
        int i = d - 1;
        while (i >= 0 && ++k[static_cast<size_t>(i)] > k_range) {
            k[static_cast<size_t>(i)] = -k_range;
            --i;
        }
        if (i < 0) break;
    }
    return out;
}

}  // namespace solenoidal
