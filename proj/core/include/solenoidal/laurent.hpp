#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "solenoidal/cyclotomic.hpp"
#include "solenoidal/rational.hpp"

namespace solenoidal {

struct TermCapExceeded : std::runtime_error {
    explicit TermCapExceeded(size_t cap)
        : std::runtime_error("Laurent term count exceeded cap " + std::to_string(cap)) {}
};

/// Term cap for exact Laurent products; env SOLENOIDAL_TERM_CAP overrides
/// the built-in default of 1e6 (read once).
size_t laurent_term_cap();

/// Sparse multivariate Laurent polynomial with complex-rational coefficients.
/// Exponent keys are d-vectors (negative entries allowed).
class LaurentPoly {
  public:
    explicit LaurentPoly(int dim) : dim_(dim) {}

    static LaurentPoly constant(int dim, const RatC& c);
    static LaurentPoly monomial(std::vector<int64_t> exps, const RatC& c);

    int dim() const { return dim_; }
    const std::map<std::vector<int64_t>, RatC>& terms() const { return terms_; }
    size_t term_count() const { return terms_.size(); }

    void add_term(std::vector<int64_t> exps, const RatC& c);

    LaurentPoly operator+(const LaurentPoly& o) const;
    LaurentPoly operator-(const LaurentPoly& o) const;
    LaurentPoly mul(const LaurentPoly& o, size_t cap = laurent_term_cap()) const;
    LaurentPoly conj() const;

    /// z -> z^{A^k}: multiply every exponent by diag(N_i)^k.
    LaurentPoly compose_dilation(const std::vector<int64_t>& diag, int k) const;

    /// (1/N) sum over beta-preimages: keeps exponents divisible by the
    /// diagonal and divides them; everything else cancels exactly.
    LaurentPoly transfer(const std::vector<int64_t>& diag) const;

    RatC constant_coeff() const;
    int64_t max_abs_exponent() const;

    std::complex<double> eval(const std::vector<double>& t) const;

    /// Exact value at a rational point of the torus.
    TrigSum eval_trig(const std::vector<Rat>& t) const;

    bool operator==(const LaurentPoly& o) const {
        return dim_ == o.dim_ && terms_ == o.terms_;
    }

  private:
    int dim_;
    std::map<std::vector<int64_t>, RatC> terms_;
};

}  // namespace solenoidal
