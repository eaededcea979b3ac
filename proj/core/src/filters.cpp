#include "solenoidal/filters.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <stdexcept>

namespace solenoidal {

static std::complex<double> exact_term_value(int64_t a, int64_t b, int64_t K) {
    double s = std::sqrt(static_cast<double>(K));
    return {static_cast<double>(a) / s, static_cast<double>(b) / s};
}

LaurentFilter LaurentFilter::exact(DilationSpec spec, int64_t K, std::vector<Term> terms,
                                   std::string name) {
    if (K < 1) throw std::invalid_argument("K must be a positive integer");
    LaurentFilter f;
    f.spec_ = std::move(spec);
    f.K_ = K;
    f.exact_ = true;
    f.name_ = std::move(name);
    for (auto& t : terms) {
        if (static_cast<int>(t.exp.size()) != f.spec_.dim())
            throw std::invalid_argument("term exponent dimension mismatch");
        t.approx = exact_term_value(t.re_over_sqrtK, t.im_over_sqrtK, K);
    }
    f.terms_ = std::move(terms);
    return f;
}

LaurentFilter LaurentFilter::approx(DilationSpec spec, std::vector<Term> terms, std::string name) {
    LaurentFilter f;
    f.spec_ = std::move(spec);
    f.K_ = 1;
    f.exact_ = false;
    f.name_ = std::move(name);
    for (auto& t : terms)
        if (static_cast<int>(t.exp.size()) != f.spec_.dim())
            throw std::invalid_argument("term exponent dimension mismatch");
    f.terms_ = std::move(terms);
    return f;
}

LaurentFilter LaurentFilter::builtin(const std::string& name) {
    auto mk = [](std::vector<int64_t> diag, int64_t K,
                 std::vector<std::pair<std::vector<int64_t>, int64_t>> entries,
                 const std::string& nm) {
        std::vector<Term> terms;
        for (auto& [e, a] : entries) terms.push_back(Term{e, a, 0, {}});
        return LaurentFilter::exact(DilationSpec::make(std::move(diag)), K, std::move(terms), nm);
    };
    if (name == "haar2") return mk({2}, 2, {{{0}, 1}, {{1}, 1}}, name);
    if (name == "haar3") return mk({3}, 3, {{{0}, 1}, {{1}, 1}, {{2}, 1}}, name);
    if (name == "cantor3") return mk({3}, 2, {{{0}, 1}, {{2}, 1}}, name);
    if (name == "sierpinski")
        return mk({2, 2}, 4, {{{0, 0}, 1}, {{1, 0}, 1}, {{0, 1}, 1}}, name);
    throw std::invalid_argument("unknown builtin filter: " + name);
}

std::vector<std::string> LaurentFilter::builtin_names() {
    return {"haar2", "haar3", "cantor3", "sierpinski"};
}

std::complex<double> LaurentFilter::eval(const std::vector<double>& t) const {
    if (static_cast<int>(t.size()) != dim()) throw std::invalid_argument("dimension mismatch");
    std::complex<double> acc{0.0, 0.0};
    for (const auto& term : terms_) {
        double ang = 0.0;
        for (size_t i = 0; i < t.size(); ++i) ang += static_cast<double>(term.exp[i]) * t[i];
        ang *= 2.0 * std::numbers::pi;
        acc += term.approx * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    return acc;
}

const LaurentPoly& LaurentFilter::mag2_poly() const {
    if (!exact_) throw std::logic_error("|m|^2 expansion needs an exact filter");
    if (!mag2_) {
        LaurentPoly p(dim());
        Rat k(K_);
        std::vector<int64_t> e(static_cast<size_t>(dim()));
        for (const auto& u : terms_) {
            for (const auto& v : terms_) {
                for (size_t i = 0; i < e.size(); ++i) e[i] = u.exp[i] - v.exp[i];
                // c_u * conj(c_v) / K
                RatC c{Rat(u.re_over_sqrtK * v.re_over_sqrtK + u.im_over_sqrtK * v.im_over_sqrtK) / k,
                       Rat(u.im_over_sqrtK * v.re_over_sqrtK - u.re_over_sqrtK * v.im_over_sqrtK) / k};
                p.add_term(e, c);
            }
        }
        mag2_ = std::move(p);
    }
    return *mag2_;
}

double qmf_residual(const LaurentFilter& f, const std::vector<double>& t, double target) {
    auto alphabet = digit_alphabet(f.dilation());
    double sum = 0.0;
    for (const auto& a : alphabet) {
        std::vector<double> w(t.size());
        for (size_t i = 0; i < t.size(); ++i)
            w[i] = (t[i] + static_cast<double>(a.a[i])) / static_cast<double>(f.dilation().diag[i]);
        sum += f.mag2(w);
    }
    return std::abs(sum - target);
}

std::optional<RatC> qmf_residual_exact(const LaurentFilter& f, const std::vector<Rat>& t,
                                       const Rat& target) {
    TrigSum sum;
    for (const auto& a : digit_alphabet(f.dilation())) {
        std::vector<Rat> w(t.size());
        for (size_t i = 0; i < t.size(); ++i)
            w[i] = (t[i] + a.a[i]) / f.dilation().diag[i];
        sum = sum + f.mag2_trig(w);
    }
    sum.add_term(Rat(0), RatC{-target, Rat(0)});
    return sum.as_constant();
}

bool qmf_identity_exact(const LaurentFilter& f, const Rat& target) {
    // sum over preimages of |m|^2 equals det(A) * transfer(|m|^2).
    LaurentPoly lhs = f.mag2_poly().transfer(f.dilation().diag);
    LaurentPoly rhs = LaurentPoly::constant(f.dim(), RatC{target / f.det(), Rat(0)});
    return lhs == rhs;
}

QmfReport qmf_report(const LaurentFilter& f, int samples, uint64_t seed,
                     std::optional<double> target) {
    QmfReport rep;
    rep.target = target.value_or(static_cast<double>(f.det()));
    rep.sample_count = samples;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int s = 0; s < samples; ++s) {
        std::vector<double> t(static_cast<size_t>(f.dim()));
        for (auto& c : t) c = unif(rng);
        rep.max_residual = std::max(rep.max_residual, qmf_residual(f, t, rep.target));
    }
    if (f.is_exact()) {
        // exact target only meaningful when the requested one is an integer
        double r = std::round(rep.target);
        if (std::abs(rep.target - r) < 1e-12)
            rep.identity_exact = qmf_identity_exact(f, Rat(static_cast<int64_t>(r)));
    }
    return rep;
}

static BigInt ceil_sqrt(const BigInt& v) {
    BigInt r = sqrt(v);
    if (r * r < v) ++r;
    return r;
}

CoefficientBound coefficient_bound(const LaurentFilter& f) {
    CoefficientBound out;
    for (const auto& t : f.filter_terms()) out.bound += std::abs(t.approx);
    if (!f.is_exact()) return out;
    BigInt sum(0);
    bool tight = true;
    for (const auto& t : f.filter_terms()) {
        BigInt n2 = BigInt(t.re_over_sqrtK) * t.re_over_sqrtK + BigInt(t.im_over_sqrtK) * t.im_over_sqrtK;
        BigInt r = ceil_sqrt(n2);
        if (r * r != n2) tight = false;
        sum += r;
    }
    out.bound_sq = Rat(sum * sum, BigInt(f.K()));
    out.bound_sq_is_exact = tight;
    return out;
}

LowpassReport lowpass_report(const LaurentFilter& f, int grid_resolution) {
    if (grid_resolution < 2) throw std::invalid_argument("grid resolution too small");
    LowpassReport rep;
    rep.m_at_one = f.eval(std::vector<double>(static_cast<size_t>(f.dim()), 0.0));
    if (f.is_exact()) {
        int64_t sa = 0, sb = 0;
        for (const auto& t : f.filter_terms()) {
            sa += t.re_over_sqrtK;
            sb += t.im_over_sqrtK;
        }
        rep.m_at_one_exact = std::make_pair(sa, sb);
        // |m(1)|^2 = (sa^2 + sb^2)/K compared with det(A) exactly
        rep.unit_normalized = BigInt(sa) * sa + BigInt(sb) * sb == BigInt(f.det()) * f.K();
    }

    for (const auto& t : f.filter_terms()) {
        double norm2 = 0.0;
        for (int64_t e : t.exp) norm2 += static_cast<double>(e) * static_cast<double>(e);
        rep.lipschitz_bound += std::abs(t.approx) * std::sqrt(norm2);
    }
    rep.lipschitz_bound *= 2.0 * std::numbers::pi;

    // zero scan: full grid for d = 1, per-axis grid resolution shrunk for d >= 2
    int res = f.dim() == 1 ? grid_resolution : std::max(8, grid_resolution / 4);
    std::vector<int> idx(static_cast<size_t>(f.dim()), 0);
    while (true) {
        std::vector<double> t(static_cast<size_t>(f.dim()));
        for (size_t i = 0; i < t.size(); ++i) t[i] = static_cast<double>(idx[i]) / res;
        if (std::abs(f.eval(t)) < rep.zero_tol) rep.zero_samples.push_back(t);
        int i = f.dim() - 1;
        while (i >= 0 && ++idx[static_cast<size_t>(i)] == res) idx[static_cast<size_t>(i--)] = 0;
        if (i < 0) break;
    }

    // Cohen-style neighborhood diagnostic: min |m| over the centered box with
    // half-width 1/(2 N_i) in coordinate i.
    rep.cohen_min_abs = std::abs(rep.m_at_one);
    int steps = 32;
    std::vector<int> jdx(static_cast<size_t>(f.dim()), -steps);
    while (true) {
        std::vector<double> t(static_cast<size_t>(f.dim()));
        for (size_t i = 0; i < t.size(); ++i) {
            double x = static_cast<double>(jdx[i]) / steps / (2.0 * static_cast<double>(f.dilation().diag[i]));
            t[i] = x - std::floor(x);
        }
        rep.cohen_min_abs = std::min(rep.cohen_min_abs, std::abs(f.eval(t)));
        int i = f.dim() - 1;
        while (i >= 0 && ++jdx[static_cast<size_t>(i)] > steps) jdx[static_cast<size_t>(i--)] = -steps;
        if (i < 0) break;
    }
    return rep;
}

IfsFilterResult filter_from_ifs(DilationSpec spec, const std::vector<std::vector<int64_t>>& digits) {
    if (digits.empty()) throw std::invalid_argument("IFS needs at least one digit");
    IfsFilterResult out{LaurentFilter::builtin("haar2"), {}};
    std::map<std::vector<int64_t>, int64_t> merged;
    for (const auto& v : digits) {
        if (static_cast<int>(v.size()) != spec.dim())
            throw std::invalid_argument("digit vector dimension mismatch");
        if (++merged[v] == 2)
            out.warnings.push_back("duplicate digit vector merged (coefficient scaled)");
    }
    std::vector<LaurentFilter::Term> terms;
    for (const auto& [e, mult] : merged) terms.push_back({e, mult, 0, {}});
    out.filter = LaurentFilter::exact(std::move(spec), static_cast<int64_t>(digits.size()),
                                      std::move(terms), "ifs");
    return out;
}

}  // namespace solenoidal
