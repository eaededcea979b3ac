#pragma once

#include <complex>
#include <optional>
#include <string>

#include "solenoidal/filters.hpp"
#include "solenoidal/laurent.hpp"

namespace solenoidal {

// Integration of trigonometric polynomials against the inverse-limit measure
// whose level-n pushforward has density (det/norm)^n prod_{j<n}
// |m(beta^j z)|^2 with respect to Haar measure. Test functions are
// LaurentPoly instances read as trig polynomials f(e(t)).

using TrigTestFunction = LaurentPoly;

struct TauOptions {
    /// Per-level normalization constant; det(A) unless overridden. Filters
    /// whose preimage sums equal some other constant (the missing-digit
    /// builtin sums to 3, not det = 4) need it to make the level marginals
    /// probabilities, and the shift weights pick up the matching det/norm
    /// factor.
    std::optional<Rat> norm;
    bool allow_quadrature = true;  // permit the float fallback paths
    int grid = 256;                // midpoint tensor-grid base resolution
};

struct IntegralValue {
    std::complex<double> value{0.0, 0.0};
    std::optional<RatC> exact;  // set on the exact paths
    bool used_quadrature = false;
    std::string warning;  // nonempty when a fallback or cap was hit
};

// integral of f z-pushed through level n: constant coefficient of
// f(z) * prod_{j<n} |m|^2(z^{A^j}), exactly for Laurent filters; float
// midpoint quadrature when terms blow past the cap or the filter is float.
IntegralValue integrate_pushforward(const LaurentFilter& f, const TrigTestFunction& test, int n,
                                    const TauOptions& o = {});

// The preimage form (1/norm^n) sum over all N^n depth-n digit words u of
// f(w_u) prod_{j<n} |m(beta^j w_u)|^2, integrated in the base variable.
// Exact for n <= 6 by collapsing each exponent's word sum of roots of unity
// in cyclotomic arithmetic; the two forms must agree.
IntegralValue integrate_preimage_form(const LaurentFilter& f, const TrigTestFunction& test, int n,
                                      const TauOptions& o = {});

enum class RnDirection { Forward, Inverse };

struct RnReport {
    RnDirection direction = RnDirection::Inverse;
    std::complex<double> lhs{0.0, 0.0};
    std::complex<double> rhs{0.0, 0.0};
    double residual = 0.0;
    std::optional<RatC> exact_residual;  // inverse direction, exact filters
    int grid = 0;                        // forward: quadrature resolution used
    int excluded_points = 0;             // forward: grid points with tiny divisor
};

// Quasi-invariance checks for the level shift sigma (drop the base level).
//
// Inverse direction, an algebraic identity replayed exactly:
//   integral of (f.pi_n).sigma^{-1} (det/norm)|m(pi_0)|^2  ==  integral of
//   f.pi_n,
// where (f.pi_n).sigma^{-1} = (f.beta).pi_n and |m(pi_0)|^2 =
// (|m.beta^n|^2).pi_n. The det/norm factor is 1 for filters whose preimage
// sums equal det.
//
// Forward direction: the weight is (norm/det)/|m(pi_1)|^2, which at level
// n+1 reads against 1/|m(beta^n w)|^2 and is not a Laurent polynomial;
// checked by midpoint quadrature with near-zero divisors excluded and
// counted.
RnReport radon_nikodym_residual(const LaurentFilter& f, const TrigTestFunction& test, int n,
                                RnDirection direction, const TauOptions& o = {});

}  // namespace solenoidal
