#include "solenoidal/tau.hpp"

#include <cmath>
#include <cstdlib>
#include <map>
#include <stdexcept>
#include <vector>

#include "solenoidal/cyclotomic.hpp"

namespace solenoidal {

namespace {

Rat tau_norm(const LaurentFilter& f, const TauOptions& o) {
    if (o.norm) {
        if (*o.norm <= 0) throw std::invalid_argument("normalization constant must be positive");
        return *o.norm;
    }
    return Rat(f.det());
}

// (det/norm)^n, the per-level correction when norm != det
Rat level_scale(const LaurentFilter& f, const TauOptions& o, int n) {
    Rat factor = Rat(f.det()) / tau_norm(f, o);
    Rat out(1);
    for (int j = 0; j < n; ++j) out *= factor;
    return out;
}

std::vector<double> beta_apply(const std::vector<double>& t, const DilationSpec& spec) {
    std::vector<double> out(t.size());
    for (size_t i = 0; i < t.size(); ++i) {
        double v = t[i] * static_cast<double>(spec.diag[i]);
        out[i] = v - std::floor(v);
    }
    return out;
}

int64_t float_mag2_maxexp(const LaurentFilter& f) {
    int64_t m = 0;
    for (const auto& term : f.filter_terms())
        for (int64_t e : term.exp) m = std::max<int64_t>(m, std::llabs(e));
    return 2 * m;
}

// midpoint tensor grid iteration; fn receives t in [0,1)^d
template <typename Fn>
void for_midpoints(int d, int res, Fn&& fn) {
    std::vector<int> idx(static_cast<size_t>(d), 0);
    std::vector<double> t(static_cast<size_t>(d), 0.0);
    while (true) {
        for (int i = 0; i < d; ++i)
            t[static_cast<size_t>(i)] = (idx[static_cast<size_t>(i)] + 0.5) / res;
        fn(t);
        int i = d - 1;
        while (i >= 0 && ++idx[static_cast<size_t>(i)] == res) {
            idx[static_cast<size_t>(i)] = 0;
            --i;
        }
        if (i < 0) break;
    }
}

// resolution high enough that midpoint quadrature is exact for the
// level-n density times the test function, within a total-point budget
int quad_resolution(const LaurentFilter& f, const TrigTestFunction& test, int n,
                    const TauOptions& o, std::string& warning) {
    int64_t mm = f.is_exact() ? f.mag2_poly().max_abs_exponent() : float_mag2_maxexp(f);
    int64_t lam = 0;
    for (int64_t v : f.dilation().diag) lam = std::max(lam, v);
    double geom = 0.0;
    for (int j = 0; j < n; ++j) geom += std::pow(static_cast<double>(lam), j);
    double need = 2.0 * (static_cast<double>(test.max_abs_exponent()) +
                         static_cast<double>(mm) * geom) + 3.0;
    double res = std::max(static_cast<double>(o.grid), need);
    double budget = std::pow(2.0, 22.0 / f.dim());
    if (res > budget) {
        res = budget;
        warning += "quadrature grid clamped below the Nyquist order; ";
    }
    return static_cast<int>(res);
}

std::complex<double> pushforward_quadrature(const LaurentFilter& f, const TrigTestFunction& test,
                                            int n, int res) {
    std::complex<double> acc{0.0, 0.0};
    int64_t count = 0;
    for_midpoints(f.dim(), res, [&](const std::vector<double>& t) {
        std::complex<double> v = test.eval(t);
        std::vector<double> tj = t;
        for (int j = 0; j < n; ++j) {
            v *= f.mag2(tj);
            tj = beta_apply(tj, f.dilation());
        }
        acc += v;
        ++count;
    });
    return acc / static_cast<double>(count);
}

std::optional<LaurentPoly> density_product(const LaurentFilter& f, const TrigTestFunction& test,
                                           int n) {
    try {
        LaurentPoly p = test;
        for (int j = 0; j < n; ++j)
            p = p.mul(f.mag2_poly().compose_dilation(f.dilation().diag, j));
        return p;
    } catch (const TermCapExceeded&) {
        return std::nullopt;
    }
}

}  // namespace

IntegralValue integrate_pushforward(const LaurentFilter& f, const TrigTestFunction& test, int n,
                                    const TauOptions& o) {
    if (n < 0) throw std::invalid_argument("need n >= 0");
    if (test.dim() != f.dim()) throw std::invalid_argument("test function dimension mismatch");
    IntegralValue out;
    if (f.is_exact()) {
        auto p = density_product(f, test, n);
        if (p) {
            Rat scale = level_scale(f, o, n);
            RatC c = p->constant_coeff();
            c = RatC{c.re * scale, c.im * scale};
            out.exact = c;
            out.value = {to_double(c.re), to_double(c.im)};
            return out;
        }
        if (!o.allow_quadrature)
            throw TermCapExceeded(laurent_term_cap());
        out.warning = "term cap exceeded, fell back to quadrature; ";
    } else if (!o.allow_quadrature) {
        throw std::invalid_argument("pushforward integral needs quadrature for float filters "
                                    "and the fallback was disabled");
    }
    out.used_quadrature = true;
    int res = quad_resolution(f, test, n, o, out.warning);
    out.value = pushforward_quadrature(f, test, n, res) * to_double(level_scale(f, o, n));
    return out;
}

IntegralValue integrate_preimage_form(const LaurentFilter& f, const TrigTestFunction& test, int n,
                                      const TauOptions& o) {
    if (n < 0) throw std::invalid_argument("need n >= 0");
    if (test.dim() != f.dim()) throw std::invalid_argument("test function dimension mismatch");
    IntegralValue out;
    const int d = f.dim();

    if (f.is_exact() && n <= 6) {
        auto p = density_product(f, test, n);
        if (p) {
            // per exponent e, the sum over all depth-n words u of
            // e(e . A^-n u) collapses (coordinatewise geometric sums of
            // N_i^n-th roots) to N^n when A^n | e and to 0 otherwise; the
            // leftover base integral of e(e . A^-n t) kills all e != 0
            std::vector<BigInt> level(static_cast<size_t>(d));
            BigInt nn(1);
            for (int i = 0; i < d; ++i) {
                level[static_cast<size_t>(i)] =
                    ipow(BigInt(f.dilation().diag[static_cast<size_t>(i)]),
                         static_cast<unsigned>(n));
                nn *= level[static_cast<size_t>(i)];
            }
            Rat total_words(nn);
            Rat norm_pow(1);
            for (int j = 0; j < n; ++j) norm_pow *= tau_norm(f, o);
            RatC acc{Rat(0), Rat(0)};
            for (const auto& [e, c] : p->terms()) {
                TrigSum collapse = TrigSum::constant(RatC{Rat(1), Rat(0)});
                for (int i = 0; i < d; ++i) {
                    TrigSum s;
                    BigInt qi = level[static_cast<size_t>(i)];
                    for (BigInt u = 0; u < qi; ++u)
                        s.add_term(frac_mod1(Rat(e[static_cast<size_t>(i)] * u, qi)),
                                   RatC{Rat(1), Rat(0)});
                    collapse = collapse * s;
                }
                auto cval = collapse.as_constant();
                if (!cval)
                    throw std::logic_error("word sum failed to collapse to a constant");
                if (cval->is_zero()) continue;  // exponent not divisible by A^n
                if (!(cval->im == 0) || !(cval->re == total_words))
                    throw std::logic_error("word sum collapsed to an unexpected constant");
                bool zero_exp = true;
                for (int64_t ei : e) zero_exp = zero_exp && ei == 0;
                if (!zero_exp) continue;  // base integral of a nonzero frequency
                acc += RatC{c.re * cval->re / norm_pow, c.im * cval->re / norm_pow};
            }
            out.exact = acc;
            out.value = {to_double(acc.re), to_double(acc.im)};
            return out;
        }
        if (!o.allow_quadrature) throw TermCapExceeded(laurent_term_cap());
        out.warning = "term cap exceeded, fell back to quadrature; ";
    } else if (!o.allow_quadrature) {
        throw std::invalid_argument("preimage form is exact only for n <= 6 on Laurent filters "
                                    "and the float fallback was disabled");
    } else if (f.is_exact()) {
        out.warning = "exact word-sum collapse limited to n <= 6, fell back to quadrature; ";
    }

    // float fallback: literal preimage sum on a midpoint grid; the word
    // substitution scales every frequency down, so one level of headroom
    // covers the whole chain
    out.used_quadrature = true;
    int res = quad_resolution(f, test, 1, o, out.warning);
    std::vector<int64_t> level(static_cast<size_t>(d));
    double words = 1.0;
    for (int i = 0; i < d; ++i) {
        double li = std::pow(static_cast<double>(f.dilation().diag[static_cast<size_t>(i)]), n);
        level[static_cast<size_t>(i)] = static_cast<int64_t>(li);
        words *= li;
    }
    if (words > 1e7) throw std::invalid_argument("preimage word count too large");
    std::complex<double> acc{0.0, 0.0};
    int64_t count = 0;
    for_midpoints(d, res, [&](const std::vector<double>& t) {
        std::vector<int64_t> u(static_cast<size_t>(d), 0);
        while (true) {
            std::vector<double> w(static_cast<size_t>(d));
            for (int i = 0; i < d; ++i)
                w[static_cast<size_t>(i)] =
                    (t[static_cast<size_t>(i)] + u[static_cast<size_t>(i)]) /
                    static_cast<double>(level[static_cast<size_t>(i)]);
            std::complex<double> v = test.eval(w);
            std::vector<double> wj = w;
            for (int j = 0; j < n; ++j) {
                v *= f.mag2(wj);
                wj = beta_apply(wj, f.dilation());
            }
            acc += v;
            int i = d - 1;
            while (i >= 0 && ++u[static_cast<size_t>(i)] == level[static_cast<size_t>(i)]) {
                u[static_cast<size_t>(i)] = 0;
                --i;
            }
            if (i < 0) break;
        }
        ++count;
    });
    out.value = acc / (static_cast<double>(count) * std::pow(to_double(tau_norm(f, o)), n));
    return out;
}

RnReport radon_nikodym_residual(const LaurentFilter& f, const TrigTestFunction& test, int n,
                                RnDirection direction, const TauOptions& o) {
    if (n < 0) throw std::invalid_argument("need n >= 0");
    if (test.dim() != f.dim()) throw std::invalid_argument("test function dimension mismatch");
    RnReport rep;
    rep.direction = direction;

    if (direction == RnDirection::Inverse) {
        IntegralValue rhs = integrate_pushforward(f, test, n, o);
        rep.rhs = rhs.value;
        if (f.is_exact() && rhs.exact) {
            try {
                LaurentPoly lhs_poly = test.compose_dilation(f.dilation().diag, 1);
                lhs_poly = lhs_poly.mul(f.mag2_poly().compose_dilation(f.dilation().diag, n));
                for (int j = 0; j < n; ++j)
                    lhs_poly = lhs_poly.mul(f.mag2_poly().compose_dilation(f.dilation().diag, j));
                Rat scale = level_scale(f, o, n + 1);
                RatC lhs = lhs_poly.constant_coeff();
                lhs = RatC{lhs.re * scale, lhs.im * scale};
                rep.lhs = {to_double(lhs.re), to_double(lhs.im)};
                RatC resid = lhs - *rhs.exact;
                rep.exact_residual = resid;
                rep.residual = std::abs(std::complex<double>(to_double(resid.re),
                                                             to_double(resid.im)));
                return rep;
            } catch (const TermCapExceeded&) {
                if (!o.allow_quadrature) throw;
            }
        }
        std::string warn;
        int res = quad_resolution(f, test, n + 1, o, warn);
        std::complex<double> acc{0.0, 0.0};
        int64_t count = 0;
        for_midpoints(f.dim(), res, [&](const std::vector<double>& t) {
            std::complex<double> v = test.eval(beta_apply(t, f.dilation()));
            std::vector<double> tj = t;
            for (int j = 0; j <= n; ++j) {
                v *= f.mag2(tj);
                tj = beta_apply(tj, f.dilation());
            }
            acc += v;
            ++count;
        });
        rep.lhs = acc / static_cast<double>(count) * to_double(level_scale(f, o, n + 1));
        rep.grid = res;
        rep.residual = std::abs(rep.lhs - rep.rhs);
        return rep;
    }

    // forward: level n+1 quadrature of f(w) prod_{j<=n} |m|^2(beta^j w)
    // divided by the weight's divisor |m|^2(beta^n w); the (norm/det) in the
    // weight cancels one level of the density's (det/norm)^{n+1}
    IntegralValue rhs = integrate_pushforward(f, test, n, o);
    rep.rhs = rhs.value;
    rep.grid = o.grid;
    std::complex<double> acc{0.0, 0.0};
    int64_t count = 0;
    for_midpoints(f.dim(), o.grid, [&](const std::vector<double>& t) {
        ++count;
        std::vector<double> tj = t;
        std::complex<double> v = test.eval(t);
        double divisor = 0.0;
        for (int j = 0; j <= n; ++j) {
            double g = f.mag2(tj);
            if (j == n) divisor = g;
            v *= g;
            tj = beta_apply(tj, f.dilation());
        }
        if (divisor < 1e-8) {
            ++rep.excluded_points;
            return;
        }
        acc += v / divisor;
    });
    rep.lhs = acc / static_cast<double>(count) * to_double(level_scale(f, o, n));
    rep.residual = std::abs(rep.lhs - rep.rhs);
    return rep;
}

}  // namespace solenoidal
