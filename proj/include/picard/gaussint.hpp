#pragma once

// Exact arithmetic in Z[i], the entry ring of the Picard group.
//
// Components are 64-bit integers with overflow checks: every arithmetic
// operation that could wrap throws std::overflow_error instead.  Counting
// at desk scales (X <= 1e4) keeps all norms far below the 2^63 limit, but
// no call site is allowed to assume that silently.

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace picard {

inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r))
        throw std::overflow_error("GaussInt: integer overflow in addition");
    return r;
}

inline std::int64_t checked_sub(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_sub_overflow(a, b, &r))
        throw std::overflow_error("GaussInt: integer overflow in subtraction");
    return r;
}

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r))
        throw std::overflow_error("GaussInt: integer overflow in multiplication");
    return r;
}

inline std::int64_t checked_neg(std::int64_t a) {
    return checked_sub(0, a);
}

/// Gaussian integer a + bi.
struct GaussInt {
    std::int64_t re = 0;
    std::int64_t im = 0;

    constexpr GaussInt() = default;
    constexpr GaussInt(std::int64_t r, std::int64_t i = 0) : re(r), im(i) {}

    bool is_zero() const { return re == 0 && im == 0; }
    /// True when norm == 1, i.e. one of {1, -1, i, -i}.
    bool is_unit() const {
        return (re == 0 && (im == 1 || im == -1)) ||
               (im == 0 && (re == 1 || re == -1));
    }

    GaussInt conj() const { return {re, checked_neg(im)}; }

    friend GaussInt operator+(const GaussInt& a, const GaussInt& b) {
        return {checked_add(a.re, b.re), checked_add(a.im, b.im)};
    }
    friend GaussInt operator-(const GaussInt& a, const GaussInt& b) {
        return {checked_sub(a.re, b.re), checked_sub(a.im, b.im)};
    }
    friend GaussInt operator*(const GaussInt& a, const GaussInt& b) {
        return {checked_sub(checked_mul(a.re, b.re), checked_mul(a.im, b.im)),
                checked_add(checked_mul(a.re, b.im), checked_mul(a.im, b.re))};
    }
    GaussInt operator-() const { return {checked_neg(re), checked_neg(im)}; }

    friend bool operator==(const GaussInt& a, const GaussInt& b) {
        return a.re == b.re && a.im == b.im;
    }
    friend bool operator!=(const GaussInt& a, const GaussInt& b) { return !(a == b); }

    std::string str() const;
};

/// norm(a+bi) = a^2 + b^2.  Nonnegative; zero exactly for the zero element.
std::int64_t norm(const GaussInt& g);

/// Nearest-Gaussian-integer quotient of n/d, each coordinate rounded
/// half-up.  The remainder n - q*d then has norm <= norm(d)/2.
GaussInt round_div(const GaussInt& n, const GaussInt& d);

/// True iff d divides n exactly in Z[i] (d != 0).
bool divides(const GaussInt& d, const GaussInt& n);

/// Exact quotient n/d; throws std::domain_error if d = 0 or d does not divide n.
GaussInt exact_div(const GaussInt& n, const GaussInt& d);

struct ExtGcdResult {
    GaussInt g;  // a greatest common divisor (unique up to units)
    GaussInt u;  // Bezout coefficients: g = u*c + v*d
    GaussInt v;
};

/// Extended Euclidean algorithm in Z[i].  Requires (c,d) != (0,0).
ExtGcdResult ext_gcd(const GaussInt& c, const GaussInt& d);

/// Solves a*d - b*c = 1 for (a,b) given the bottom row (c,d) of a
/// candidate unimodular matrix.  Returns nullopt when gcd(c,d) is not a
/// unit (no solution exists), and on (0,0).
std::optional<std::pair<GaussInt, GaussInt>> solve_det_one(const GaussInt& c,
                                                           const GaussInt& d);

}  // namespace picard

template <>
struct std::hash<picard::GaussInt> {
    std::size_t operator()(const picard::GaussInt& g) const noexcept {
        std::size_t h = std::hash<std::int64_t>{}(g.re);
        return h ^ (std::hash<std::int64_t>{}(g.im) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
    }
};
