#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "solenoidal/cyclotomic.hpp"
#include "solenoidal/filters.hpp"

namespace solenoidal {

/// Depth-k cylinder over a base point: the fiber points whose first k digits
/// match the prefix.
struct CylinderSet {
    TorusPoint base;
    std::vector<Digit> prefix;

    int depth() const { return static_cast<int>(prefix.size()); }
};

/// Mass with a float rendering and, when computed exactly, the exact value
/// as a trig sum (reducible to a rational when it happens to be one).
struct MassValue {
    double value = 0.0;
    std::optional<TrigSum> exact;

    std::optional<RatC> exact_rational() const {
        return exact ? exact->as_constant() : std::nullopt;
    }
};

struct MassOptions {
    /// Per-step normalization constant; det(A) unless overridden (the
    /// missing-digit workaround passes the digit count instead).
    std::optional<Rat> norm;
    /// Also compute the exact trig-sum value (needs exact filter and base).
    bool exact = false;
};

Rat mass_norm(const LaurentFilter& f, const MassOptions& o);

/// nu_z mass of the cylinder: prod_{j=1..k} (1/norm) |m(e(A^{-j}(t + S_j)))|^2
/// with S_j the digit prefix sum. Arguments are reduced exactly when the base
/// is exact; the float path mirrors with doubles.
MassValue cylinder_mass(const LaurentFilter& f, const CylinderSet& c, const MassOptions& o = {});

/// Masses of the N children cylinders (prefix extended by each digit), in
/// digit_alphabet order.
std::vector<MassValue> children_masses(const LaurentFilter& f, const CylinderSet& c,
                                       const MassOptions& o = {});

/// Exact additivity check: do the children masses sum to the parent mass as
/// algebraic numbers? Verified through sum_a |m(w_a)|^2 == norm at the
/// cylinder's endpoint (with an exactly-zero parent mass passing trivially),
/// so the answer is exact regardless of cylinder depth.
bool children_sum_to_parent_exact(const LaurentFilter& f, const CylinderSet& c,
                                  const MassOptions& o = {});

enum class TotalMassMode { Telescoping, BruteForce };

/// Sum of all depth-k cylinder masses over base t.
///
/// Telescoping: exact transfer-operator recursion T_j = (det/norm) *
/// transfer(|m|^2 * T_{j-1}) evaluated at t; the polynomial support stays
/// O(1), so the cost is O(k) exact operations. BruteForce enumerates all
/// det^k words (k <= 8) as an independent oracle.
MassValue total_mass_at_depth(const LaurentFilter& f, const TorusPoint& t, int k,
                              TotalMassMode mode = TotalMassMode::Telescoping,
                              const MassOptions& o = {});

/// Upper bound (coefficient_bound^2 / norm)^k for any depth-k cylinder mass.
double mass_envelope(const LaurentFilter& f, int k, const MassOptions& o = {});

struct SampledWord {
    DigitWord word;
    bool renormalized = false;  // conditional masses did not sum to 1
};

/// Draw a depth-`depth` digit word from nu_z by sequential conditionals
/// P(a | prefix) = |m(e(A^{-1}(p + a)))|^2 / norm at the current point p.
SampledWord sample_word(const LaurentFilter& f, const TorusPoint& t, int depth,
                        std::mt19937_64& rng, const MassOptions& o = {});

struct EventEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    int samples = 0;
    bool any_renormalized = false;
};

/// Monte Carlo estimate of nu_z(event) for a word predicate.
EventEstimate estimate_event(const LaurentFilter& f, const TorusPoint& t,
                             const std::function<bool(const DigitWord&)>& predicate, int samples,
                             int depth, uint64_t seed, const MassOptions& o = {});

}  // namespace solenoidal
