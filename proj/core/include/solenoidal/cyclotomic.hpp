#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "solenoidal/rational.hpp"

namespace solenoidal {

/// Finite formal sum  sum_r c_r e(r)  with rational exponents r taken mod 1
/// and complex-rational coefficients: exact arithmetic for trigonometric
/// values at rational points (the field generated by all roots of unity).
/// Addition and multiplication are free; deciding whether a sum collapses to
/// a rational constant goes through reduce_to_constant below.
class TrigSum {
  public:
    TrigSum() = default;

    static TrigSum constant(const RatC& c);
    /// c * e(r)
    static TrigSum root(const Rat& r, const RatC& c = RatC{Rat(1), Rat(0)});

    void add_term(const Rat& r, const RatC& c);

    TrigSum operator+(const TrigSum& o) const;
    TrigSum operator-(const TrigSum& o) const;
    TrigSum operator*(const TrigSum& o) const;
    TrigSum conj() const;

    size_t term_count() const { return terms_.size(); }
    const std::map<Rat, RatC>& terms() const { return terms_; }

    std::complex<double> eval() const;

    /// Exact: does the sum equal 0 as a complex number?
    bool is_zero() const;

    /// Exact reduction: the value as a complex rational when the sum lies in
    /// Q(i), nullopt when it does not.
    std::optional<RatC> as_constant() const;

  private:
    std::map<Rat, RatC> terms_;  // keys in [0,1), coefficients nonzero
};

/// Exact vanishing / constant-reduction test for  sum_i c_i zeta_q^{j_i}.
/// Exponents are residues mod q (any int64 values; reduced internally).
/// Returns the constant value when the sum is rational, nullopt otherwise.
///
/// Method: peel one prime p | q per level. With s = q/p, either p | s and
/// {zeta_q^u : u < p} is a power basis over Q(zeta_s) via zeta_q^p = zeta_s,
/// or p is coprime to s and zeta_q^j splits by CRT as zeta_p^alpha
/// zeta_s^gamma, where {zeta_p^alpha : alpha <= p-2} is a basis once the
/// alpha = p-1 group is folded in through 1 + zeta_p + ... + zeta_p^{p-1} = 0.
/// Either way the sum is a constant iff the basis-0 component reduces to one
/// and every other component reduces to zero, recursively over s.
std::optional<RatC> reduce_to_constant(std::vector<std::pair<int64_t, RatC>> terms, int64_t q);

inline bool vanishes(std::vector<std::pair<int64_t, RatC>> terms, int64_t q) {
    auto c = reduce_to_constant(std::move(terms), q);
    return c.has_value() && c->is_zero();
}

}  // namespace solenoidal
