#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "solenoidal/atoms.hpp"
#include "solenoidal/dilation.hpp"
#include "solenoidal/fiber_measure.hpp"
#include "solenoidal/filters.hpp"

namespace solenoidal {

// Candidate wavelet supports live on the product coordinates (base point,
// digit word): a finite union of rational boxes in the base, each carrying
// either a finite list of eventually periodic words (atoms) or a finite
// union of cylinder prefixes.

struct TorusBox {
    std::vector<Rat> lo, hi;  // half-open: lo_i <= t_i < hi_i, inside [0,1]
    bool contains(const std::vector<double>& t) const;
    bool contains(const TorusPoint& t) const;
};

struct FiberSpec {
    std::vector<DigitWord> words;               // explicit atom words
    std::vector<std::vector<Digit>> cylinders;  // or cylinder prefixes
};

struct FiberedRegion {
    TorusBox box;
    FiberSpec fiber;
};

struct FiberedSet {
    std::vector<FiberedRegion> regions;
    // index of the region containing t, or -1
    int region_at(const std::vector<double>& t) const;
};

// throws if boxes overlap, a box exceeds [0,1]^d, or a word digit is out of range
void validate_fibered_set(const FiberedSet& e, const DilationSpec& spec);

// Piecewise evaluation rule for the multiplier lambda, one rule per region.
struct LambdaRule {
    enum class Kind { Constant, InverseScalingShift };
    Kind kind = Kind::Constant;
    std::complex<double> constant{1.0, 0.0};
    // InverseScalingShift: lambda(t) = 1 / phi_hat(t + shift), truncated at
    // the caller's depth so it cancels factor-for-factor against the mass
    std::vector<Rat> shift;
};

struct LambdaFunction {
    std::vector<LambdaRule> rules;
};

// |lambda|^2 for the rule of one region
double lambda_mag2(const LaurentFilter& f, const LambdaRule& rule, const std::vector<double>& t,
                   int depth, const AtomOptions& o = {});

// h(t) = sum over the fiber specification at t of |lambda|^2 * mass,
// masses truncated at `depth`; 0 when t lies in no region.
double h_function(const LaurentFilter& f, const FiberedSet& e, const LambdaFunction& lambda,
                  const TorusPoint& t, int depth, const AtomOptions& o = {});

struct OrthonormalityReport {
    double max_deviation = 0.0;  // max |h - 1| over the samples
    int samples = 0;
    double tol = 0.0;
    bool pass = false;
};

OrthonormalityReport orthonormality_check(const LaurentFilter& f, const FiberedSet& e,
                                          const LambdaFunction& lambda,
                                          const std::vector<TorusPoint>& sample_points, int depth,
                                          double tol, const AtomOptions& o = {});

// midpoint grid (i + 1/2)/count per coordinate, avoiding the dyadic seams
std::vector<TorusPoint> midpoint_samples(int dim, int count);

struct OverlapEstimate {
    int j = 0, k = 0;       // distinct shift exponents
    double mean = 0.0;      // Monte-Carlo estimate of the overlap measure
    double std_error = 0.0;
    int hits = 0;
};

struct DisjointnessReport {
    std::vector<OverlapEstimate> pairs;
    int samples = 0;
    int depth = 0;          // word length drawn per sample; membership is
                            // tested on the digits surviving the shifts
    uint64_t seed = 0;
    bool all_consistent_with_zero(double n_sigma = 3.0) const;
};

// Monte-Carlo tau-tilde(sigma^j E intersect sigma^k E) for j != k in
// [-j_range, j_range]: base sampled uniformly, word from the fiber sampler.
DisjointnessReport shift_disjointness_check(const LaurentFilter& f, const FiberedSet& e,
                                            int j_range, int n_samples, int depth, uint64_t seed,
                                            const AtomOptions& o = {});

enum class MsfFeasibility { AtomlessNoMSF, AtomicFeasible, Unknown };

struct MsfVerdict {
    MsfFeasibility verdict = MsfFeasibility::Unknown;
    std::optional<AtomlessCertificate> certificate;  // AtomlessNoMSF evidence
    struct Witness {
        TorusPoint t;
        std::vector<int64_t> k;
        double mass = 0.0;
    };
    std::vector<Witness> witnesses;  // one atom per sampled fiber when feasible
    std::string note;
};

// AtomlessNoMSF when the coefficient bound certifies sup|m|^2 < norm (no
// fiber has atoms, so no generalized MSF); AtomicFeasible when every sampled
// fiber exhibits a convergent atom among the classical candidates; Unknown
// otherwise.
MsfVerdict msf_feasibility(const LaurentFilter& f, int fiber_samples = 16, int depth = 48,
                           uint64_t seed = 20260819, const AtomOptions& o = {});

struct ShannonExample {
    LaurentFilter filter;  // haar2
    FiberedSet E;
    LambdaFunction lambda;
};

// The Shannon wavelet set W = [-1,-1/2) u [1/2,1) wound onto the dyadic
// solenoid, in base-[0,1) section coordinates: t in [0,1/2) pairs with the
// all-ones word and lambda = 1/phi_hat(t-1); t in [1/2,1) pairs with the
// all-zeros word and lambda = 1/phi_hat(t). Each pairing makes
// |lambda|^2 * mass telescope to 1, which is the h = 1 requirement.
ShannonExample shannon_example();

}  // namespace solenoidal
