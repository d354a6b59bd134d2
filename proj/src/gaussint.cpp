#include "picard/gaussint.hpp"

namespace picard {

std::string GaussInt::str() const {
    std::string s = std::to_string(re);
    if (im >= 0)
        s += "+" + std::to_string(im) + "i";
    else
        s += std::to_string(im) + "i";
    return s;
}

std::int64_t norm(const GaussInt& g) {
    return checked_add(checked_mul(g.re, g.re), checked_mul(g.im, g.im));
}

namespace {

// Half-up rounding of p/q for q > 0: round(p/q) = floor((2p + q) / (2q)).
// The intermediate 2p is taken in 128-bit so the full int64 input range is safe.
std::int64_t round_half_up_128(__int128 p, __int128 q) {
    __int128 num = 2 * p + q;
    __int128 den = 2 * q;
    __int128 quo = num / den;
    if (num % den != 0 && (num < 0) != (den < 0)) --quo;  // floor semantics
    if (quo > INT64_MAX || quo < INT64_MIN)
        throw std::overflow_error("GaussInt: quotient overflow in round_div");
    return static_cast<std::int64_t>(quo);
}

}  // namespace

GaussInt round_div(const GaussInt& n, const GaussInt& d) {
    if (d.is_zero()) throw std::domain_error("GaussInt: division by zero");
    // n/d = n * conj(d) / norm(d), computed in 128-bit before rounding.
    __int128 nre = n.re, nim = n.im, dre = d.re, dim = d.im;
    __int128 pre = nre * dre + nim * dim;
    __int128 pim = nim * dre - nre * dim;
    __int128 nd = dre * dre + dim * dim;
    return {round_half_up_128(pre, nd), round_half_up_128(pim, nd)};
}

bool divides(const GaussInt& d, const GaussInt& n) {
    if (d.is_zero()) return n.is_zero();
    __int128 nre = n.re, nim = n.im, dre = d.re, dim = d.im;
    __int128 pre = nre * dre + nim * dim;
    __int128 pim = nim * dre - nre * dim;
    __int128 nd = dre * dre + dim * dim;
    return pre % nd == 0 && pim % nd == 0;
}

GaussInt exact_div(const GaussInt& n, const GaussInt& d) {
    if (d.is_zero()) throw std::domain_error("GaussInt: division by zero");
    __int128 nre = n.re, nim = n.im, dre = d.re, dim = d.im;
    __int128 pre = nre * dre + nim * dim;
    __int128 pim = nim * dre - nre * dim;
    __int128 nd = dre * dre + dim * dim;
    if (pre % nd != 0 || pim % nd != 0)
        throw std::domain_error("GaussInt: inexact division");
    __int128 qre = pre / nd, qim = pim / nd;
    if (qre > INT64_MAX || qre < INT64_MIN || qim > INT64_MAX || qim < INT64_MIN)
        throw std::overflow_error("GaussInt: quotient overflow in exact_div");
    return {static_cast<std::int64_t>(qre), static_cast<std::int64_t>(qim)};
}

ExtGcdResult ext_gcd(const GaussInt& c, const GaussInt& d) {
    if (c.is_zero() && d.is_zero())
        throw std::domain_error("ext_gcd: both arguments are zero");
    // Invariant: r0 = u0*c + v0*d and r1 = u1*c + v1*d throughout.
    GaussInt r0 = c, r1 = d;
    GaussInt u0{1, 0}, u1{0, 0};
    GaussInt v0{0, 0}, v1{1, 0};
    while (!r1.is_zero()) {
        GaussInt q = round_div(r0, r1);
        GaussInt r2 = r0 - q * r1;
        GaussInt u2 = u0 - q * u1;
        GaussInt v2 = v0 - q * v1;
        r0 = r1; r1 = r2;
        u0 = u1; u1 = u2;
        v0 = v1; v1 = v2;
    }
    return {r0, u0, v0};
}

std::optional<std::pair<GaussInt, GaussInt>> solve_det_one(const GaussInt& c,
                                                           const GaussInt& d) {
    if (c.is_zero() && d.is_zero()) return std::nullopt;
    ExtGcdResult e = ext_gcd(c, d);
    if (!e.g.is_unit()) return std::nullopt;
    // u*c + v*d = g with g a unit; multiplying by g^{-1} = conj(g) gives
    // (u g^{-1}) c + (v g^{-1}) d = 1, so a = v g^{-1}, b = -u g^{-1}
    // satisfy a*d - b*c = 1.
    GaussInt ginv = e.g.conj();
    GaussInt a = e.v * ginv;
    GaussInt b = -(e.u * ginv);
    return std::make_pair(a, b);
}

}  // namespace picard
