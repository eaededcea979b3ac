#include "solenoidal/dilation.hpp"

#include <cmath>
#include <stdexcept>

namespace solenoidal {

DilationSpec DilationSpec::make(std::vector<int64_t> diag) {
    if (diag.empty()) throw std::invalid_argument("dilation needs at least one diagonal entry");
    for (int64_t v : diag)
        if (v < 2) throw std::invalid_argument("diagonal entries must be integers >= 2");
    return DilationSpec{std::move(diag)};
}

bool DigitWord::zero_period() const {
    if (period.empty()) return false;
    for (const auto& p : period)
        for (int64_t c : p.a)
            if (c != 0) return false;
    return true;
}

const Digit& DigitWord::digit_at(int j) const {
    if (j < 0) throw std::out_of_range("negative digit index");
    if (j < depth()) return prefix[static_cast<size_t>(j)];
    if (period.empty()) throw std::out_of_range("word has no digits past its prefix");
    return period[static_cast<size_t>(j - depth()) % period.size()];
}

bool DigitWord::agrees_through(const DigitWord& other, int k) const {
    for (int j = 0; j < k; ++j)
        if (!(digit_at(j) == other.digit_at(j))) return false;
    return true;
}

TorusPoint TorusPoint::exact(std::vector<Rat> coords) {
    TorusPoint p;
    for (auto& c : coords) {
        if (c < 0 || c >= 1) throw std::invalid_argument("torus coordinate outside [0,1)");
    }
    p.exact_ = std::move(coords);
    return p;
}

TorusPoint TorusPoint::approx(std::vector<double> coords) {
    TorusPoint p;
    for (double c : coords) {
        if (!(c >= 0.0 && c < 1.0)) throw std::invalid_argument("torus coordinate outside [0,1)");
    }
    p.approx_ = std::move(coords);
    return p;
}

int TorusPoint::dim() const {
    return exact_ ? static_cast<int>(exact_->size()) : static_cast<int>(approx_.size());
}

const std::vector<Rat>& TorusPoint::rat() const {
    if (!exact_) throw std::logic_error("float-backed torus point has no exact coordinates");
    return *exact_;
}

std::vector<double> TorusPoint::dbl() const {
    if (!exact_) return approx_;
    std::vector<double> out;
    out.reserve(exact_->size());
    for (const auto& c : *exact_) out.push_back(to_double(c));
    return out;
}

bool TorusPoint::operator==(const TorusPoint& o) const {
    if (is_exact() != o.is_exact()) return false;
    if (is_exact()) return *exact_ == *o.exact_;
    return approx_ == o.approx_;
}

std::vector<Digit> digit_alphabet(const DilationSpec& spec) {
    std::vector<Digit> out;
    out.reserve(static_cast<size_t>(spec.det()));
    Digit cur{std::vector<int64_t>(spec.diag.size(), 0)};
    while (true) {
        out.push_back(cur);
        int i = spec.dim() - 1;
        while (i >= 0) {
            if (++cur.a[static_cast<size_t>(i)] < spec.diag[static_cast<size_t>(i)]) break;
            cur.a[static_cast<size_t>(i)] = 0;
            --i;
        }
        if (i < 0) break;
    }
    return out;
}

static void check_digit(const Digit& a, const DilationSpec& spec) {
    if (static_cast<int>(a.a.size()) != spec.dim())
        throw std::invalid_argument("digit dimension mismatch");
    for (int i = 0; i < spec.dim(); ++i)
        if (a.a[static_cast<size_t>(i)] < 0 || a.a[static_cast<size_t>(i)] >= spec.diag[static_cast<size_t>(i)])
            throw std::invalid_argument("digit component out of range");
}

std::vector<BigInt> word_to_integer(const DigitWord& w, const DilationSpec& spec) {
    if (w.has_period() && !w.zero_period())
        throw std::invalid_argument("word with a nonzero periodic tail is not an integer vector");
    std::vector<BigInt> out(static_cast<size_t>(spec.dim()), BigInt(0));
    std::vector<BigInt> pw(static_cast<size_t>(spec.dim()), BigInt(1));
    for (const auto& dg : w.prefix) {
        check_digit(dg, spec);
        for (int i = 0; i < spec.dim(); ++i) {
            out[static_cast<size_t>(i)] += pw[static_cast<size_t>(i)] * dg.a[static_cast<size_t>(i)];
            pw[static_cast<size_t>(i)] *= spec.diag[static_cast<size_t>(i)];
        }
    }
    return out;
}

DigitWord integer_to_word(const std::vector<BigInt>& k, const DilationSpec& spec, int depth) {
    if (static_cast<int>(k.size()) != spec.dim())
        throw std::invalid_argument("integer vector dimension mismatch");
    if (depth < 0) throw std::invalid_argument("negative depth");
    DigitWord w;
    Digit tail{std::vector<int64_t>(k.size(), 0)};
    // Per coordinate: digits of k_i mod N_i^depth, i.e. of N_i^depth + k_i
    // when k_i < 0, which is the complement expansion; the remaining tail is
    // constant 0 or N_i - 1 provided |k_i| <= N_i^depth.
    std::vector<BigInt> rem(k.size());
    for (size_t i = 0; i < k.size(); ++i) {
        BigInt cap = ipow(BigInt(spec.diag[i]), static_cast<unsigned>(depth));
        if (abs(k[i]) > cap) throw std::invalid_argument("insufficient depth for integer word");
        rem[i] = k[i] < 0 ? cap + k[i] : k[i];
        if (k[i] < 0) tail.a[i] = spec.diag[i] - 1;
    }
    for (int j = 0; j < depth; ++j) {
        Digit dg{std::vector<int64_t>(k.size(), 0)};
        for (size_t i = 0; i < k.size(); ++i) {
            BigInt q = rem[i] % spec.diag[i];
            dg.a[i] = q.convert_to<int64_t>();
            rem[i] /= spec.diag[i];
        }
        w.prefix.push_back(std::move(dg));
    }
    // A positive k_i == N_i^depth leaves rem == 1, which the constant-0 tail
    // cannot absorb.
    for (size_t i = 0; i < k.size(); ++i)
        if (rem[i] != 0) throw std::invalid_argument("insufficient depth for integer word");
    w.period.push_back(std::move(tail));
    return w;
}

DigitWord odometer_add(const DigitWord& w, const std::vector<BigInt>& v, const DilationSpec& spec) {
    if (static_cast<int>(v.size()) != spec.dim())
        throw std::invalid_argument("integer vector dimension mismatch");
    for (const auto& dg : w.prefix) check_digit(dg, spec);
    for (const auto& dg : w.period) check_digit(dg, spec);

    DigitWord out = w;
    std::vector<BigInt> carry(v);
    size_t j = 0;
    auto step = [&](Digit& dg) {
        bool live = false;
        for (size_t i = 0; i < carry.size(); ++i) {
            if (carry[i] == 0) continue;
            BigInt total = BigInt(dg.a[i]) + carry[i];
            BigInt n(spec.diag[i]);
            BigInt digit = total - floor_div(total, n) * n;
            dg.a[i] = digit.convert_to<int64_t>();
            carry[i] = floor_div(total, n);
            if (carry[i] != 0) live = true;
        }
        return live;
    };

    for (; j < out.prefix.size(); ++j)
        if (!step(out.prefix[j])) return out;

    if (out.period.empty())
        throw std::invalid_argument("carry ran past a period-free prefix");

    // Work through unrolled period copies. After one full cycle a coordinate
    // can still carry only if every digit it saw was extreme (all N_i - 1
    // under carry +1, all 0 under borrow -1); flipping the tail resolves it.
    std::vector<Digit> unrolled;
    for (size_t cycle = 0; cycle < out.period.size() + 1; ++cycle) {
        bool live = false;
        for (const auto& pd : out.period) {
            Digit dg = pd;
            live = step(dg);
            unrolled.push_back(std::move(dg));
            if (!live) break;
        }
        if (!live) {
            out.prefix.insert(out.prefix.end(), unrolled.begin(), unrolled.end());
            return out;
        }
        if (cycle == 0) continue;
        // A carry that survives two full cycles is the uniform +-1 flip.
        break;
    }
    std::vector<Digit> flipped = out.period;
    for (auto& pd : flipped) {
        for (size_t i = 0; i < carry.size(); ++i) {
            if (carry[i] == 0) continue;
            if (carry[i] == 1 && pd.a[i] == spec.diag[i] - 1) { pd.a[i] = 0; continue; }
            if (carry[i] == -1 && pd.a[i] == 0) { pd.a[i] = spec.diag[i] - 1; continue; }
            throw std::logic_error("unresolvable carry in periodic tail");
        }
    }
    out.prefix.insert(out.prefix.end(), unrolled.begin(), unrolled.end());
    out.period = std::move(flipped);
    return out;
}

Digit s_of_t(const TorusPoint& t, const DilationSpec& spec) {
    if (t.dim() != spec.dim()) throw std::invalid_argument("point dimension mismatch");
    Digit dg{std::vector<int64_t>(static_cast<size_t>(spec.dim()), 0)};
    if (t.is_exact()) {
        for (int i = 0; i < spec.dim(); ++i) {
            Rat scaled = t.rat()[static_cast<size_t>(i)] * spec.diag[static_cast<size_t>(i)];
            dg.a[static_cast<size_t>(i)] = floor_rat(scaled).convert_to<int64_t>();
        }
    } else {
        auto d = t.dbl();
        for (int i = 0; i < spec.dim(); ++i)
            dg.a[static_cast<size_t>(i)] =
                static_cast<int64_t>(std::floor(d[static_cast<size_t>(i)] * static_cast<double>(spec.diag[static_cast<size_t>(i)])));
    }
    return dg;
}

TorusPoint refine(const TorusPoint& t, const Digit& a, const DilationSpec& spec) {
    check_digit(a, spec);
    if (t.dim() != spec.dim()) throw std::invalid_argument("point dimension mismatch");
    if (t.is_exact()) {
        std::vector<Rat> out;
        out.reserve(a.a.size());
        for (size_t i = 0; i < a.a.size(); ++i)
            out.push_back((t.rat()[i] + a.a[i]) / spec.diag[i]);
        return TorusPoint::exact(std::move(out));
    }
    std::vector<double> out;
    auto d = t.dbl();
    for (size_t i = 0; i < a.a.size(); ++i) {
        double v = (d[i] + static_cast<double>(a.a[i])) / static_cast<double>(spec.diag[i]);
        // (t_i + a_i) / N_i < 1 holds exactly, but the sum can round up to
        // N_i when t_i is within an ulp of 1 (orbits attracted to 1 get there)
        if (v >= 1.0) v = std::nextafter(1.0, 0.0);
        out.push_back(v);
    }
    return TorusPoint::approx(std::move(out));
}

TorusPoint coarsen(const TorusPoint& t, const DilationSpec& spec) {
    if (t.dim() != spec.dim()) throw std::invalid_argument("point dimension mismatch");
    if (t.is_exact()) {
        std::vector<Rat> out;
        for (size_t i = 0; i < t.rat().size(); ++i)
            out.push_back(frac_mod1(t.rat()[i] * spec.diag[i]));
        return TorusPoint::exact(std::move(out));
    }
    std::vector<double> out;
    for (size_t i = 0; i < t.dbl().size(); ++i) {
        double v = t.dbl()[i] * static_cast<double>(spec.diag[i]);
        v -= std::floor(v);
        if (v >= 1.0) v = 0.0;  // guard against floor rounding at the seam
        out.push_back(v);
    }
    return TorusPoint::approx(std::move(out));
}

TorusPoint scale_down(const TorusPoint& t, const DilationSpec& spec, int j) {
    if (j < 0) throw std::invalid_argument("negative scale");
    if (t.is_exact()) {
        std::vector<Rat> out = t.rat();
        for (size_t i = 0; i < out.size(); ++i) {
            BigInt p = ipow(BigInt(spec.diag[i]), static_cast<unsigned>(j));
            out[i] = out[i] / Rat(p);
        }
        return TorusPoint::exact(std::move(out));
    }
    std::vector<double> out = t.dbl();
    for (size_t i = 0; i < out.size(); ++i)
        out[i] /= std::pow(static_cast<double>(spec.diag[i]), j);
    return TorusPoint::approx(std::move(out));
}

}  // namespace solenoidal
