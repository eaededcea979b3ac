#include "solenoidal/laurent.hpp"

#include <cmath>
#include <cstdlib>
#include <numbers>

namespace solenoidal {

size_t laurent_term_cap() {
    static const size_t cap = [] {
        if (const char* env = std::getenv("SOLENOIDAL_TERM_CAP")) {
            char* end = nullptr;
            unsigned long long v = std::strtoull(env, &end, 10);
            if (end && *end == '\0' && v > 0) return static_cast<size_t>(v);
        }
        return static_cast<size_t>(1'000'000);
    }();
    return cap;
}

LaurentPoly LaurentPoly::constant(int dim, const RatC& c) {
    LaurentPoly p(dim);
    p.add_term(std::vector<int64_t>(static_cast<size_t>(dim), 0), c);
    return p;
}

LaurentPoly LaurentPoly::monomial(std::vector<int64_t> exps, const RatC& c) {
    LaurentPoly p(static_cast<int>(exps.size()));
    p.add_term(std::move(exps), c);
    return p;
}

void LaurentPoly::add_term(std::vector<int64_t> exps, const RatC& c) {
    if (static_cast<int>(exps.size()) != dim_)
        throw std::invalid_argument("exponent dimension mismatch");
    if (c.is_zero()) return;
    auto it = terms_.find(exps);
    if (it == terms_.end()) {
        terms_.emplace(std::move(exps), c);
        return;
    }
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
}

LaurentPoly LaurentPoly::operator+(const LaurentPoly& o) const {
    if (dim_ != o.dim_) throw std::invalid_argument("dimension mismatch");
    LaurentPoly out = *this;
    for (const auto& [e, c] : o.terms_) out.add_term(e, c);
    return out;
}

LaurentPoly LaurentPoly::operator-(const LaurentPoly& o) const {
    if (dim_ != o.dim_) throw std::invalid_argument("dimension mismatch");
    LaurentPoly out = *this;
    for (const auto& [e, c] : o.terms_) out.add_term(e, -c);
    return out;
}

LaurentPoly LaurentPoly::mul(const LaurentPoly& o, size_t cap) const {
    if (dim_ != o.dim_) throw std::invalid_argument("dimension mismatch");
    LaurentPoly out(dim_);
    std::vector<int64_t> e(static_cast<size_t>(dim_));
    for (const auto& [e1, c1] : terms_) {
        for (const auto& [e2, c2] : o.terms_) {
            for (size_t i = 0; i < e.size(); ++i) e[i] = e1[i] + e2[i];
            out.add_term(e, c1 * c2);
            if (out.terms_.size() > cap) throw TermCapExceeded(cap);
        }
    }
    return out;
}

LaurentPoly LaurentPoly::conj() const {
    LaurentPoly out(dim_);
    for (const auto& [e, c] : terms_) {
        std::vector<int64_t> ne(e.size());
        for (size_t i = 0; i < e.size(); ++i) ne[i] = -e[i];
        out.add_term(std::move(ne), c.conj());
    }
    return out;
}

LaurentPoly LaurentPoly::compose_dilation(const std::vector<int64_t>& diag, int k) const {
    if (static_cast<int>(diag.size()) != dim_) throw std::invalid_argument("dimension mismatch");
    LaurentPoly out(dim_);
    for (const auto& [e, c] : terms_) {
        std::vector<int64_t> ne = e;
        for (int r = 0; r < k; ++r)
            for (size_t i = 0; i < ne.size(); ++i) ne[i] *= diag[i];
        out.add_term(std::move(ne), c);
    }
    return out;
}

LaurentPoly LaurentPoly::transfer(const std::vector<int64_t>& diag) const {
    if (static_cast<int>(diag.size()) != dim_) throw std::invalid_argument("dimension mismatch");
    LaurentPoly out(dim_);
    for (const auto& [e, c] : terms_) {
        bool divisible = true;
        std::vector<int64_t> ne(e.size());
        for (size_t i = 0; i < e.size(); ++i) {
            if (e[i] % diag[i] != 0) {
                divisible = false;
                break;
            }
            ne[i] = e[i] / diag[i];
        }
        if (divisible) out.add_term(std::move(ne), c);
    }
    return out;
}

RatC LaurentPoly::constant_coeff() const {
    auto it = terms_.find(std::vector<int64_t>(static_cast<size_t>(dim_), 0));
    return it == terms_.end() ? RatC{} : it->second;
}

int64_t LaurentPoly::max_abs_exponent() const {
    int64_t m = 0;
    for (const auto& [e, c] : terms_)
        for (int64_t v : e) m = std::max(m, std::abs(v));
    return m;
}

std::complex<double> LaurentPoly::eval(const std::vector<double>& t) const {
    if (static_cast<int>(t.size()) != dim_) throw std::invalid_argument("dimension mismatch");
    std::complex<double> acc{0.0, 0.0};
    for (const auto& [e, c] : terms_) {
        double ang = 0.0;
        for (size_t i = 0; i < e.size(); ++i) ang += static_cast<double>(e[i]) * t[i];
        ang *= 2.0 * std::numbers::pi;
        acc += std::complex<double>(to_double(c.re), to_double(c.im)) *
               std::complex<double>(std::cos(ang), std::sin(ang));
    }
    return acc;
}

TrigSum LaurentPoly::eval_trig(const std::vector<Rat>& t) const {
    if (static_cast<int>(t.size()) != dim_) throw std::invalid_argument("dimension mismatch");
    TrigSum acc;
    for (const auto& [e, c] : terms_) {
        Rat r(0);
        for (size_t i = 0; i < e.size(); ++i) r += Rat(e[i]) * t[i];
        acc.add_term(r, c);
    }
    return acc;
}

}  // namespace solenoidal
