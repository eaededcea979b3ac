#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "solenoidal/dilation.hpp"
#include "solenoidal/laurent.hpp"

namespace solenoidal {

/// Low-pass style Laurent filter m(z) = sum_v c_v z^v attached to a diagonal
/// dilation. Exact filters carry coefficients (a + ib)/sqrt(K) with integer
/// a, b, so |m|^2 is a Laurent polynomial with rational coefficients over
/// 1/K; float filters carry plain complex coefficients.
class LaurentFilter {
  public:
    struct Term {
        std::vector<int64_t> exp;
        // exact mode: integer pair over sqrt(K); float mode: ignored
        int64_t re_over_sqrtK = 0;
        int64_t im_over_sqrtK = 0;
        std::complex<double> approx;  // always populated
    };

    static LaurentFilter exact(DilationSpec spec, int64_t K, std::vector<Term> terms,
                               std::string name = "custom");
    static LaurentFilter approx(DilationSpec spec, std::vector<Term> terms,
                                std::string name = "custom");

    /// haar2, haar3, cantor3, sierpinski.
    static LaurentFilter builtin(const std::string& name);
    static std::vector<std::string> builtin_names();

    const DilationSpec& dilation() const { return spec_; }
    int dim() const { return spec_.dim(); }
    int64_t det() const { return spec_.det(); }
    int64_t K() const { return K_; }
    bool is_exact() const { return exact_; }
    const std::vector<Term>& filter_terms() const { return terms_; }
    const std::string& name() const { return name_; }

    std::complex<double> eval(const std::vector<double>& t) const;
    std::complex<double> eval(const TorusPoint& t) const { return eval(t.dbl()); }
    double mag2(const std::vector<double>& t) const { return std::norm(eval(t)); }
    double mag2(const TorusPoint& t) const { return std::norm(eval(t)); }

    /// |m|^2 as an exact Laurent polynomial. Pre: exact filter.
    const LaurentPoly& mag2_poly() const;

    /// Exact |m(e(t))|^2 at a rational point.
    TrigSum mag2_trig(const std::vector<Rat>& t) const { return mag2_poly().eval_trig(t); }

  private:
    DilationSpec spec_{{2}};
    int64_t K_ = 1;
    bool exact_ = true;
    std::vector<Term> terms_;
    std::string name_;
    mutable std::optional<LaurentPoly> mag2_;
};

struct QmfReport {
    double target = 0.0;               // constant the preimage sums are checked against
    double max_residual = 0.0;         // over the float sample set
    int sample_count = 0;
    std::optional<bool> identity_exact;  // exact filters: polynomial-identity verdict
    bool passes(double tol = 1e-9) const { return max_residual < tol; }
};

/// Float residual  | sum_{beta(w)=e(t)} |m(w)|^2 - target |  at one point.
double qmf_residual(const LaurentFilter& f, const std::vector<double>& t, double target);

/// Exact residual at a rational point, as a reduced constant when the
/// residual is rational (it is 0 for a QMF filter at every rational point).
std::optional<RatC> qmf_residual_exact(const LaurentFilter& f, const std::vector<Rat>& t,
                                       const Rat& target);

/// True iff  sum_{beta(w)=z} |m(w)|^2 == target  holds as a Laurent
/// polynomial identity (checked through the exact transfer operator).
bool qmf_identity_exact(const LaurentFilter& f, const Rat& target);

QmfReport qmf_report(const LaurentFilter& f, int samples, uint64_t seed,
                     std::optional<double> target = std::nullopt);

struct CoefficientBound {
    double bound = 0.0;                // sum_v |c_v|
    std::optional<Rat> bound_sq;       // exact (or outward-rounded) bound^2
    bool bound_sq_is_exact = false;
};

/// sup |m| <= sum |c_v|; the exact square is available for exact filters
/// (outward-rounded upward when coefficients are properly complex).
CoefficientBound coefficient_bound(const LaurentFilter& f);

struct LowpassReport {
    std::complex<double> m_at_one;
    std::optional<std::pair<int64_t, int64_t>> m_at_one_exact;  // (sum a, sum b) over sqrt K
    bool unit_normalized = false;      // |m(1)| == sqrt(det) exactly (exact filters)
    std::vector<std::vector<double>> zero_samples;  // grid points with |m| below tol
    double zero_tol = 1e-9;
    double lipschitz_bound = 0.0;      // 2 pi sum |c_v| |v|_2
    double cohen_min_abs = 0.0;        // min |m| over the centered 1/(2N_i) box
};

LowpassReport lowpass_report(const LaurentFilter& f, int grid_resolution = 256);

struct IfsFilterResult {
    LaurentFilter filter;
    std::vector<std::string> warnings;  // duplicate digit vectors, etc.
};

/// m(z) = (1/sqrt(K)) sum_i z^{v_i} from an IFS digit list (K = #digits).
/// Duplicate exponents merge coefficients and are flagged.
IfsFilterResult filter_from_ifs(DilationSpec spec, const std::vector<std::vector<int64_t>>& digits);

}  // namespace solenoidal
