#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "solenoidal/dilation.hpp"
#include "solenoidal/fiber_measure.hpp"
#include "solenoidal/filters.hpp"

namespace solenoidal {

// A fiber point carries an atom exactly when the infinite product of
// per-level conditional masses (1/norm)|m|^2 along its digit word stays
// bounded away from zero. These routines estimate and classify that
// product and, where a closed form or a coefficient bound exists, decide
// it rigorously.

enum class AtomVerdict { ConvergesPositive, DecaysToZero, Inconclusive };

struct AtomCandidate {
    TorusPoint base;
    DigitWord word;
    std::vector<double> mass_partial_products;
    AtomVerdict verdict = AtomVerdict::Inconclusive;
    // partial products need not be monotone; set when some factor exceeds 1
    bool factor_above_one = false;
    std::string reason;
};

struct AtomOptions {
    std::optional<Rat> norm;   // defaults to det(A)
    double mass_floor = 1e-30; // below this a product is declared dead
};

// entry k is the depth-k cylinder mass along the word's k-prefix
std::vector<double> atom_partial_products(const LaurentFilter& f, const TorusPoint& t,
                                          const DigitWord& word, int n_terms,
                                          const AtomOptions& o = {});

// Heuristic classifier. ConvergesPositive requires the log partial products
// to be Cauchy with geometrically bounded increments over the trailing
// window; DecaysToZero fires on the mass floor or an exactly vanishing
// factor; everything else is Inconclusive. Only the atomless certificate
// and closed forms give rigorous answers.
AtomCandidate classify_atom(const LaurentFilter& f, const TorusPoint& t, const DigitWord& word,
                            int n_terms = 64, int decay_window = 16, const AtomOptions& o = {});

struct AtomlessCertificate {
    double ratio;                  // (sum of |coefficients|)^2 / norm, < 1
    std::optional<Rat> ratio_exact;
};

// When the coefficient sum bound gives sup|m|^2 <= b^2 < norm, every depth-k
// cylinder mass is at most (b^2/norm)^k, so no fiber measure has atoms.
std::optional<AtomlessCertificate> atomless_certificate(const LaurentFilter& f,
                                                        const AtomOptions& o = {});

struct ZmHit {
    TorusPoint t;
    double mag2;          // achieved |m(e(t))|^2 after refinement
    bool exact_confirmed; // |m|^2 == norm verified in exact arithmetic
};

// Grid scan for the peak set Z_m = { t : |m(e(t))|^2 = norm }, refined by
// local maximization and, where a hit snaps to a small rational, confirmed
// exactly through the trigonometric form of |m|^2.
std::vector<ZmHit> find_Zm(const LaurentFilter& f, int grid_resolution = 0,
                           double tolerance = 1e-9, const AtomOptions& o = {});

struct CycleReport {
    int l = 0;                     // period length
    std::vector<Rat> rationals;    // all p/(N^l - 1), 0 <= p < N^l - 1
    std::vector<Rat> in_Zm;        // subset whose whole orbit lies in Z_m
};

// d = 1 only: the beta-periodic rationals p/(N^l - 1), 0 <= p < N^l - 1,
// for each l <= l_max, tested for exact Z_m membership along their full
// multiply-by-N orbit.
std::vector<CycleReport> candidate_cycle_rationals(const LaurentFilter& f, int l_max,
                                                   const AtomOptions& o = {});

struct ScalingFnValue {
    std::vector<double> t;  // a point of R^d, not reduced mod 1
    int n_terms = 0;
    std::complex<double> value{0.0, 0.0};
    // bound on |true value - partial product|; present only for
    // unit-normalized filters (|m(1)| = sqrt(norm)), where the factors
    // approach 1 geometrically
    std::optional<double> tail_bound;
};

// Truncation of phi_hat(t) = prod_{j>=1} (1/sqrt(norm)) m(e(A^-j t)).
ScalingFnValue scaling_fn_hat(const LaurentFilter& f, const std::vector<double>& t_real,
                              int n_terms, const AtomOptions& o = {});

struct ClassicalAtom {
    std::vector<int64_t> k;
    double mass_from_word;     // limit of the partial products along integer_to_word(k)
    double mass_from_scaling;  // |phi_hat(t + k)|^2, the same product re-indexed
};

// Atom masses of the classical decomposition over the integer lattice
// |k_i| <= k_range, computed by both routes as a consistency check of the
// word / complement encoding. Requires a unit-normalized filter.
std::vector<ClassicalAtom> classical_atom_decomposition(const LaurentFilter& f,
                                                        const TorusPoint& t, int64_t k_range,
                                                        int n_terms, const AtomOptions& o = {});

}  // namespace solenoidal
