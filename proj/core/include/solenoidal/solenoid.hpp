#pragma once

#include <vector>

#include "solenoidal/dilation.hpp"

namespace solenoidal {

/// Truncated point of the inverse limit: coordinates z_0,...,z_n of torus
/// points subject to beta(z_{j+1}) = z_j (A z_{j+1} = z_j mod 1).
struct SolenoidPoint {
    std::vector<TorusPoint> coords;

    int levels() const { return static_cast<int>(coords.size()); }
};

/// Base point plus fiber coordinates: the product-side picture T^d x Z_A.
struct ProductPoint {
    TorusPoint base;
    DigitWord word;
};

/// Cross-section through the [0,1)-representative: coordinate j is
/// A^{-j} t for t in [0,1)^d (no reduction needed).
SolenoidPoint cross_section_c(const TorusPoint& t, const DilationSpec& spec, int depth);

/// Theta(z, word): coordinate j is A^{-j}(t + sum_{i<j} A^i a_i) mod 1,
/// which multiplies the cross-section by the embedded fiber point.
/// Needs word resolvable through depth-1 digits.
SolenoidPoint theta(const ProductPoint& p, const DilationSpec& spec, int depth);

/// Inverse of theta on truncations: base = z_0 and digit
/// a_j = A z_{j+1} - z_j (an exact digit for compatible exact input; floats
/// are rounded and validated against tol).
ProductPoint theta_inverse(const SolenoidPoint& s, const DilationSpec& spec, double tol = 1e-9);

/// sigma-tilde (z, (a_j)) = (A^{-1}(z + a_0), (a_{j+1})): descend the base
/// along the first digit and shift the word left. Rejects words without a
/// first digit (empty prefix, no period).
ProductPoint shift_sigma(const ProductPoint& p, const DilationSpec& spec);

/// sigma-tilde^{-1} (z, a) = (A z mod 1, (s(z), a_0, a_1, ...)).
ProductPoint shift_sigma_inverse(const ProductPoint& p, const DilationSpec& spec);

/// Winding line w(x) = (e(A^{-j} x))_j for a real (unreduced) parameter;
/// coordinates are reduced into [0,1)^d.
SolenoidPoint winding_line(const std::vector<Rat>& x, const DilationSpec& spec, int depth);
SolenoidPoint winding_line_approx(const std::vector<double>& x, const DilationSpec& spec, int depth);

/// Max violation of A z_{j+1} = z_j mod 1 (exact points: 0 or 1 meaning
/// violated; float points: sup distance to the nearest integer).
double compatibility_defect(const SolenoidPoint& s, const DilationSpec& spec);

}  // namespace solenoidal
