#include "picard/geometry.hpp"

#include <cmath>
#include <utility>

namespace picard {

double delta(const PointH3& z, const PointH3& w) {
    double dx = std::norm(z.x - w.x);  // |x_z - x_w|^2
    return (dx + z.y * z.y + w.y * w.y) / (2.0 * z.y * w.y);
}

double dist(const PointH3& z, const PointH3& w) {
    double d = delta(z, w);
    return std::acosh(d < 1.0 ? 1.0 : d);
}

double ball_volume(double R) {
    if (R < 0.0 || std::isnan(R))
        throw std::domain_error("ball_volume: radius must be nonnegative");
    return M_PI * (std::sinh(2.0 * R) - 2.0 * R);
}

Motion::Motion(GaussInt a_, GaussInt b_, GaussInt c_, GaussInt d_)
    : a(a_), b(b_), c(c_), d(d_) {
    if (a * d - b * c != GaussInt{1, 0})
        throw std::invalid_argument("Motion: determinant must be exactly 1");
}

Motion operator*(const Motion& m1, const Motion& m2) {
    return Motion(m1.a * m2.a + m1.b * m2.c, m1.a * m2.b + m1.b * m2.d,
                  m1.c * m2.a + m1.d * m2.c, m1.c * m2.b + m1.d * m2.d);
}

Motion Motion::canonical() const {
    const std::int64_t sig[8] = {a.re, a.im, b.re, b.im, c.re, c.im, d.re, d.im};
    for (std::int64_t v : sig) {
        if (v > 0) return *this;
        if (v < 0) return Motion(-a, -b, -c, -d);
    }
    return *this;  // unreachable for det 1
}

bool operator==(const Motion& m1, const Motion& m2) {
    Motion c1 = m1.canonical(), c2 = m2.canonical();
    return c1.a == c2.a && c1.b == c2.b && c1.c == c2.c && c1.d == c2.d;
}

PointH3 apply(const Motion& m, const PointH3& z) {
    auto cplx = [](const GaussInt& g) {
        return std::complex<double>(static_cast<double>(g.re), static_cast<double>(g.im));
    };
    std::complex<double> a = cplx(m.a), b = cplx(m.b), c = cplx(m.c), d = cplx(m.d);
    std::complex<double> cxd = c * z.x + d;
    double y2 = z.y * z.y;
    double Q = std::norm(cxd) + std::norm(c) * y2;
    std::complex<double> xp = ((a * z.x + b) * std::conj(cxd) + a * std::conj(c) * y2) / Q;
    return PointH3(xp, z.y / Q);
}

bool in_fundamental_domain(const PointH3& z, double slack) {
    if (std::fabs(z.x1()) > 0.5 + slack) return false;
    if (z.x2() < -slack || z.x2() > 0.5 + slack) return false;
    return std::norm(z.x) + z.y * z.y >= 1.0 - slack;
}

namespace {

// Integer translation bringing x1, x2 into [-1/2, 1/2); updates cur and acc.
void box_translate(PointH3& cur, Motion& acc) {
    double t1 = std::floor(cur.x1() + 0.5);
    double t2 = std::floor(cur.x2() + 0.5);
    if (t1 != 0.0 || t2 != 0.0) {
        Motion t = Motion::translation(
            GaussInt(-static_cast<std::int64_t>(t1), -static_cast<std::int64_t>(t2)));
        cur = apply(t, cur);
        acc = t * acc;
    }
}

// Normalizes the box part after the sphere condition holds: flips x2 >= 0
// and resolves the x1 = +1/2 face toward -1/2 (lex-smaller representative).
void box_normalize(PointH3& cur, Motion& acc) {
    box_translate(cur, acc);
    if (cur.x2() < 0.0) {
        Motion u = Motion::point_rotation();
        cur = apply(u, cur);
        acc = u * acc;
    }
    if (cur.x1() >= 0.5) {
        Motion t = Motion::translation(GaussInt(-1, 0));
        cur = apply(t, cur);
        acc = t * acc;
    }
}

}  // namespace

ReduceResult reduce(const PointH3& z) {
    constexpr int kBudget = 100000;
    PointH3 cur = z;
    Motion acc = Motion::identity();
    int iter = 0;
    for (;; ++iter) {
        if (iter >= kBudget)
            throw std::runtime_error(
                "reduce: iteration budget exceeded (numerical degeneracy near the "
                "domain boundary)");
        box_translate(cur, acc);
        double n = std::norm(cur.x) + cur.y * cur.y;
        if (n < 1.0 - 1e-15) {
            Motion s = Motion::inversion();
            cur = apply(s, cur);
            acc = s * acc;
            continue;
        }
        break;
    }
    box_normalize(cur, acc);

    // On the sphere face both sides of the inversion are admissible; prefer
    // the lexicographically smaller (x1, x2).
    double n = std::norm(cur.x) + cur.y * cur.y;
    if (std::fabs(n - 1.0) <= 1e-12) {
        PointH3 alt = cur;
        Motion acc_alt = acc;
        Motion s = Motion::inversion();
        alt = apply(s, alt);
        acc_alt = s * acc_alt;
        box_normalize(alt, acc_alt);
        bool smaller = alt.x1() < cur.x1() - 1e-15 ||
                       (std::fabs(alt.x1() - cur.x1()) <= 1e-15 &&
                        alt.x2() < cur.x2() - 1e-15);
        if (smaller && in_fundamental_domain(alt, 1e-9)) {
            cur = alt;
            acc = acc_alt;
        }
    }
    return {cur, acc};
}

}  // namespace picard
