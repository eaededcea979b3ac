#include "solenoidal/solenoid.hpp"

#include <cmath>
#include <stdexcept>

namespace solenoidal {

SolenoidPoint cross_section_c(const TorusPoint& t, const DilationSpec& spec, int depth) {
    if (depth < 0) throw std::invalid_argument("negative depth");
    SolenoidPoint s;
    s.coords.reserve(static_cast<size_t>(depth) + 1);
    for (int j = 0; j <= depth; ++j) s.coords.push_back(scale_down(t, spec, j));
    return s;
}

SolenoidPoint theta(const ProductPoint& p, const DilationSpec& spec, int depth) {
    if (depth < 0) throw std::invalid_argument("negative depth");
    if (depth > 0 && !p.word.resolvable(depth - 1))
        throw std::invalid_argument("word too shallow for requested depth");
    SolenoidPoint s;
    s.coords.push_back(p.base);
    // z_{j+1} = A^{-1}(z_j + a_j) reproduces A^{-(j+1)}(t + sum A^i a_i).
    TorusPoint cur = p.base;
    for (int j = 0; j < depth; ++j) {
        cur = refine(cur, p.word.digit_at(j), spec);
        s.coords.push_back(cur);
    }
    return s;
}

ProductPoint theta_inverse(const SolenoidPoint& s, const DilationSpec& spec, double tol) {
    if (s.coords.empty()) throw std::invalid_argument("empty solenoid point");
    ProductPoint p;
    p.base = s.coords.front();
    for (size_t j = 0; j + 1 < s.coords.size(); ++j) {
        const TorusPoint& zj = s.coords[j];
        const TorusPoint& zj1 = s.coords[j + 1];
        if (zj.dim() != spec.dim() || zj1.dim() != spec.dim())
            throw std::invalid_argument("coordinate dimension mismatch");
        Digit dg{std::vector<int64_t>(static_cast<size_t>(spec.dim()), 0)};
        if (zj.is_exact() && zj1.is_exact()) {
            for (int i = 0; i < spec.dim(); ++i) {
                Rat diff = zj1.rat()[static_cast<size_t>(i)] * spec.diag[static_cast<size_t>(i)] -
                           zj.rat()[static_cast<size_t>(i)];
                if (denominator(diff) != 1)
                    throw std::invalid_argument("incompatible coordinates (A z_{j+1} - z_j not integral)");
                BigInt k = numerator(diff);
                if (k < 0 || k >= spec.diag[static_cast<size_t>(i)])
                    throw std::invalid_argument("incompatible coordinates (digit out of range)");
                dg.a[static_cast<size_t>(i)] = k.convert_to<int64_t>();
            }
        } else {
            auto dj = zj.dbl();
            auto dj1 = zj1.dbl();
            for (int i = 0; i < spec.dim(); ++i) {
                double diff = dj1[static_cast<size_t>(i)] * static_cast<double>(spec.diag[static_cast<size_t>(i)]) -
                              dj[static_cast<size_t>(i)];
                double k = std::round(diff);
                if (std::abs(diff - k) > tol)
                    throw std::invalid_argument("incompatible coordinates (A z_{j+1} - z_j not integral)");
                int64_t ki = static_cast<int64_t>(k);
                // the rounded digit may land on N_i at the wrap seam
                if (ki == spec.diag[static_cast<size_t>(i)]) ki = 0;
                if (ki < 0 || ki >= spec.diag[static_cast<size_t>(i)])
                    throw std::invalid_argument("incompatible coordinates (digit out of range)");
                dg.a[static_cast<size_t>(i)] = ki;
            }
        }
        p.word.prefix.push_back(std::move(dg));
    }
    return p;
}

ProductPoint shift_sigma(const ProductPoint& p, const DilationSpec& spec) {
    if (p.word.depth() == 0 && !p.word.has_period())
        throw std::invalid_argument("cannot shift a word with no digits");
    ProductPoint out;
    out.base = refine(p.base, p.word.digit_at(0), spec);
    if (p.word.depth() > 0) {
        out.word.prefix.assign(p.word.prefix.begin() + 1, p.word.prefix.end());
        out.word.period = p.word.period;
    } else {
        // purely periodic: rotate the period left
        out.word.period.assign(p.word.period.begin() + 1, p.word.period.end());
        out.word.period.push_back(p.word.period.front());
    }
    return out;
}

ProductPoint shift_sigma_inverse(const ProductPoint& p, const DilationSpec& spec) {
    ProductPoint out;
    out.base = coarsen(p.base, spec);
    out.word.prefix.reserve(p.word.prefix.size() + 1);
    out.word.prefix.push_back(s_of_t(p.base, spec));
    out.word.prefix.insert(out.word.prefix.end(), p.word.prefix.begin(), p.word.prefix.end());
    out.word.period = p.word.period;
    return out;
}

SolenoidPoint winding_line(const std::vector<Rat>& x, const DilationSpec& spec, int depth) {
    if (static_cast<int>(x.size()) != spec.dim()) throw std::invalid_argument("dimension mismatch");
    if (depth < 0) throw std::invalid_argument("negative depth");
    SolenoidPoint s;
    std::vector<Rat> cur = x;
    for (int j = 0; j <= depth; ++j) {
        std::vector<Rat> red(cur.size());
        for (size_t i = 0; i < cur.size(); ++i) red[i] = frac_mod1(cur[i]);
        s.coords.push_back(TorusPoint::exact(std::move(red)));
        for (size_t i = 0; i < cur.size(); ++i) cur[i] /= spec.diag[i];
    }
    return s;
}

SolenoidPoint winding_line_approx(const std::vector<double>& x, const DilationSpec& spec, int depth) {
    if (static_cast<int>(x.size()) != spec.dim()) throw std::invalid_argument("dimension mismatch");
    if (depth < 0) throw std::invalid_argument("negative depth");
    SolenoidPoint s;
    std::vector<double> cur = x;
    for (int j = 0; j <= depth; ++j) {
        std::vector<double> red(cur.size());
        for (size_t i = 0; i < cur.size(); ++i) {
            red[i] = cur[i] - std::floor(cur[i]);
            if (red[i] >= 1.0) red[i] = 0.0;
        }
        s.coords.push_back(TorusPoint::approx(std::move(red)));
        for (size_t i = 0; i < cur.size(); ++i) cur[i] /= static_cast<double>(spec.diag[i]);
    }
    return s;
}

double compatibility_defect(const SolenoidPoint& s, const DilationSpec& spec) {
    double worst = 0.0;
    for (size_t j = 0; j + 1 < s.coords.size(); ++j) {
        const TorusPoint& zj = s.coords[j];
        const TorusPoint& zj1 = s.coords[j + 1];
        if (zj.is_exact() && zj1.is_exact()) {
            for (int i = 0; i < spec.dim(); ++i) {
                Rat diff = zj1.rat()[static_cast<size_t>(i)] * spec.diag[static_cast<size_t>(i)] -
                           zj.rat()[static_cast<size_t>(i)];
                if (frac_mod1(diff) != 0) worst = std::max(worst, 1.0);
            }
        } else {
            auto dj = zj.dbl();
            auto dj1 = zj1.dbl();
            for (int i = 0; i < spec.dim(); ++i) {
                double diff = dj1[static_cast<size_t>(i)] * static_cast<double>(spec.diag[static_cast<size_t>(i)]) -
                              dj[static_cast<size_t>(i)];
                double frac = std::abs(diff - std::round(diff));
                worst = std::max(worst, frac);
            }
        }
    }
    return worst;
}

}  // namespace solenoidal
