#pragma once

// Upper half-space model of H^3: points z = x + yj with x complex and
// y > 0, the point-pair invariant delta (the cosh of hyperbolic distance),
// the action of PSL_2(Z[i]) by linear fractional transformations, ball
// volumes and reduction into the standard fundamental domain.

#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>

#include "picard/gaussint.hpp"

namespace picard {

/// Axis-aligned box in (x1, x2, y).
struct Box3 {
    double x1_lo, x1_hi;
    double x2_lo, x2_hi;
    double y_lo, y_hi;
};

struct PointH3 {
    std::complex<double> x;  // horizontal coordinate x1 + i*x2
    double y;                // height, strictly positive

    PointH3(std::complex<double> x_, double y_) : x(x_), y(y_) {
        if (!(y > 0.0))
            throw std::domain_error("PointH3: y must be strictly positive");
    }
    PointH3(double x1, double x2, double y_) : PointH3({x1, x2}, y_) {}

    double x1() const { return x.real(); }
    double x2() const { return x.imag(); }
};

/// The special point j = (0, 0, 1).
inline PointH3 point_j() { return PointH3(0.0, 0.0, 1.0); }

/// delta(z,w) = (|x_z - x_w|^2 + y_z^2 + y_w^2) / (2 y_z y_w) = cosh d(z,w).
/// Always >= 1, with equality iff z = w.
double delta(const PointH3& z, const PointH3& w);

/// Hyperbolic distance, acosh(delta).
double dist(const PointH3& z, const PointH3& w);

/// Volume of a hyperbolic ball of radius R: pi (sinh 2R - 2R).
double ball_volume(double R);

/// Element of PSL_2(Z[i]): a unimodular matrix (a b; c d) identified with
/// its negation.  Construction enforces ad - bc = 1 exactly.
struct Motion {
    GaussInt a, b, c, d;

    Motion(GaussInt a_, GaussInt b_, GaussInt c_, GaussInt d_);

    static Motion identity() { return Motion({1, 0}, {0, 0}, {0, 0}, {1, 0}); }
    /// (1 t; 0 1): x -> x + t.
    static Motion translation(const GaussInt& t) {
        return Motion({1, 0}, t, {0, 0}, {1, 0});
    }
    /// (0 -1; 1 0): z -> -z^{-1}.
    static Motion inversion() { return Motion({0, 0}, {-1, 0}, {1, 0}, {0, 0}); }
    /// (i 0; 0 -i): x -> -x.
    static Motion point_rotation() {
        return Motion({0, 1}, {0, 0}, {0, 0}, {0, -1});
    }

    Motion inverse() const { return Motion(d, -b, -c, a); }
    friend Motion operator*(const Motion& m1, const Motion& m2);

    /// Sign-normalized representative: the first nonzero entry coordinate
    /// of (a,b,c,d) is made positive.  PSL identification key.
    Motion canonical() const;

    friend bool operator==(const Motion& m1, const Motion& m2);
    friend bool operator!=(const Motion& m1, const Motion& m2) { return !(m1 == m2); }
};

/// gamma z = (az+b)(cz+d)^{-1} in quaternions, written out in coordinates:
/// with Q = |cx+d|^2 + |c|^2 y^2,
///   x' = ((ax+b) conj(cx+d) + a conj(c) y^2) / Q,   y' = y / Q.
PointH3 apply(const Motion& m, const PointH3& z);

/// Membership in the closed standard fundamental domain
/// |x1| <= 1/2, 0 <= x2 <= 1/2, |x|^2 + y^2 >= 1, with slack at the faces.
bool in_fundamental_domain(const PointH3& z, double slack = 1e-9);

struct ReduceResult {
    PointH3 z0;    // representative in the fundamental domain
    Motion gamma;  // z0 = gamma z
};

/// Moves z into the standard fundamental domain.  Ties on the vertical
/// faces are broken toward the lexicographically smaller (x1, x2).
/// Throws std::runtime_error when the iteration budget is exhausted
/// (numerical degeneracy near the domain boundary).
ReduceResult reduce(const PointH3& z);

}  // namespace picard

template <>
struct std::hash<picard::Motion> {
    std::size_t operator()(const picard::Motion& m) const noexcept {
        picard::Motion c = m.canonical();
        std::hash<picard::GaussInt> h;
        std::size_t s = h(c.a);
        auto mix = [&s](std::size_t v) { s ^= v + 0x9e3779b97f4a7c15ULL + (s << 6) + (s >> 2); };
        mix(h(c.b));
        mix(h(c.c));
        mix(h(c.d));
        return s;
    }
};
