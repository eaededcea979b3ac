#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>

namespace solenoidal {

using BigInt = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline double to_double(const Rat& x) { return x.template convert_to<double>(); }
inline double to_double(const BigInt& x) { return x.template convert_to<double>(); }

/// Floor of p/q for exact integers (cpp_int division truncates toward zero).
inline BigInt floor_div(const BigInt& p, const BigInt& q) {
    BigInt t = p / q;
    if (t * q != p && ((p < 0) != (q < 0))) --t;
    return t;
}

inline BigInt floor_rat(const Rat& x) {
    return floor_div(numerator(x), denominator(x));
}

/// Reduce x into [0,1).
inline Rat frac_mod1(const Rat& x) {
    return x - Rat(floor_rat(x));
}

inline BigInt ipow(BigInt base, unsigned e) {
    BigInt r(1);
    while (e) {
        if (e & 1u) r *= base;
        base *= base;
        e >>= 1u;
    }
    return r;
}

/// Parses "p/q", "p", or a plain decimal like "-0.375" into an exact rational.
inline Rat parse_rat(const std::string& s) {
    auto bad = [&]() -> Rat { throw std::invalid_argument("not a rational: '" + s + "'"); };
    if (s.empty()) return bad();
    try {
        auto slash = s.find('/');
        if (slash != std::string::npos) {
            BigInt p(s.substr(0, slash));
            BigInt q(s.substr(slash + 1));
            if (q == 0) return bad();
            return Rat(p, q);
        }
        auto dot = s.find('.');
        if (dot == std::string::npos) return Rat(BigInt(s));
        std::string head = s.substr(0, dot), tail = s.substr(dot + 1);
        if (!tail.empty() && tail.find_first_not_of("0123456789") != std::string::npos) return bad();
        bool neg = !head.empty() && head[0] == '-';
        if (head.empty() || head == "-" || head == "+") head += "0";
        BigInt whole(head);
        BigInt den = ipow(BigInt(10), static_cast<unsigned>(tail.size()));
        BigInt num = abs(whole) * den + (tail.empty() ? BigInt(0) : BigInt(tail));
        return Rat(neg ? -num : num, den);
    } catch (const std::runtime_error&) {
        return bad();
    }
}

/// Renders as "p/q" ("p" when the denominator is 1).
inline std::string format_rat(const Rat& x) {
    std::string s = numerator(x).str();
    if (denominator(x) != 1) s += "/" + denominator(x).str();
    return s;
}

/// Complex number with exact rational parts.
struct RatC {
    Rat re{0};
    Rat im{0};

    bool operator==(const RatC&) const = default;
    bool is_zero() const { return re == 0 && im == 0; }

    RatC operator+(const RatC& o) const { return {re + o.re, im + o.im}; }
    RatC operator-(const RatC& o) const { return {re - o.re, im - o.im}; }
    RatC operator-() const { return {-re, -im}; }
    RatC operator*(const RatC& o) const {
        return {re * o.re - im * o.im, re * o.im + im * o.re};
    }
    RatC conj() const { return {re, -im}; }

    RatC& operator+=(const RatC& o) {
        re += o.re;
        im += o.im;
        return *this;
    }
};

inline RatC ratc(long re, long im = 0) { return RatC{Rat(re), Rat(im)}; }

}  // namespace solenoidal
