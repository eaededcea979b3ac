#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "solenoidal/rational.hpp"

namespace solenoidal {

/// Diagonal integer dilation A = diag(N_1,...,N_d), every N_i >= 2.
struct DilationSpec {
    std::vector<int64_t> diag;

    int dim() const { return static_cast<int>(diag.size()); }

    /// det A = product of the diagonal entries.
    int64_t det() const {
        int64_t n = 1;
        for (int64_t v : diag) n *= v;
        return n;
    }

    static DilationSpec make(std::vector<int64_t> diag);
};

/// One digit of the product alphabet: a_i in [0, N_i).
struct Digit {
    std::vector<int64_t> a;

    bool operator==(const Digit&) const = default;
};

/// Eventually periodic digit word. Digits beyond the prefix repeat `period`
/// (when present); a word without period has no digits past its prefix.
struct DigitWord {
    std::vector<Digit> prefix;
    std::vector<Digit> period;  // empty = purely finite word

    int depth() const { return static_cast<int>(prefix.size()); }
    bool has_period() const { return !period.empty(); }
    bool zero_period() const;  // period present and all zero

    const Digit& digit_at(int j) const;  // throws past a period-free prefix
    bool resolvable(int j) const { return has_period() || j < depth(); }

    /// Digitwise equality through depth k (requires both resolvable there).
    bool agrees_through(const DigitWord& other, int k) const;
};

/// Point of [0,1)^d carried either as exact rationals or as doubles.
class TorusPoint {
  public:
    static TorusPoint exact(std::vector<Rat> coords);
    static TorusPoint approx(std::vector<double> coords);

    bool is_exact() const { return exact_.has_value(); }
    int dim() const;

    const std::vector<Rat>& rat() const;  // throws when float-backed
    std::vector<double> dbl() const;

    bool operator==(const TorusPoint& o) const;

  private:
    std::optional<std::vector<Rat>> exact_;
    std::vector<double> approx_;
};

/// All det(A) digits in lexicographic order (last coordinate fastest).
std::vector<Digit> digit_alphabet(const DilationSpec& spec);

/// Sum of A^i a_i over the prefix. Pre: word is finite (no period, or an
/// all-zero period). Rejects words carrying a nonzero periodic tail.
std::vector<BigInt> word_to_integer(const DigitWord& w, const DilationSpec& spec);

/// Canonical word of the integer vector k: digits of k mod A^depth, with a
/// constant period digit (0 for k_i >= 0, N_i - 1 for k_i < 0). Negative
/// coordinates follow the complement expansion, so for d = 1 and a_0 != 0
/// the word of -k has b_0 = N - a_0 and b_j = N - 1 - a_j thereafter.
/// Pre: |k_i| <= N_i^depth.
DigitWord integer_to_word(const std::vector<BigInt>& k, const DilationSpec& spec, int depth);

/// Group addition word + v with carries propagating to the right. The carry
/// entering the periodic tail either dies within one period cycle or flips a
/// constant extreme tail (all N_i - 1 plus carry -> all 0, and conversely
/// under borrow); anything else cannot sustain a carry.
DigitWord odometer_add(const DigitWord& w, const std::vector<BigInt>& v, const DilationSpec& spec);

/// The digit s(t) with components floor(N_i t_i); half-open cells, so
/// t_i in [k/N_i, (k+1)/N_i) maps to k.
Digit s_of_t(const TorusPoint& t, const DilationSpec& spec);

/// A^{-1}(t + a), the beta-preimage of e(t) selected by digit a. Lands in
/// [0,1)^d without reduction.
TorusPoint refine(const TorusPoint& t, const Digit& a, const DilationSpec& spec);

/// A t mod 1, the base-level image under beta.
TorusPoint coarsen(const TorusPoint& t, const DilationSpec& spec);

/// A^{-j}(t) componentwise (no reduction needed for t in [0,1)^d).
TorusPoint scale_down(const TorusPoint& t, const DilationSpec& spec, int j);

}  // namespace solenoidal
