#include "picard/lattice_count.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <thread>

#include "picard/quadrature.hpp"

// Coset algorithm
// ---------------
// Every unimodular row (c,d) with gcd(c,d) a unit carries the solution
// family (a0 + t c, b0 + t d), t in Z[i], of ad - bc = 1, and
// (a0+tc b0+td; c d) = (1 t; 0 1) (a0 b0; c d), so the image x-coordinate
// is x'(t) = x'(0) + t while y' = y/Q is fixed, Q = |cx+d|^2 + |c|^2 y^2.
// The condition delta(z, gamma z) <= X therefore cuts a Euclidean disc in
// the t-lattice,
//     |t - w0|^2 <= rho^2,  w0 = x - x'(0),  rho^2 = 2X y y' - y^2 - y'^2,
// which is counted scanline by scanline.  Admissible rows are pruned by
// delta >= (Q + 1/Q)/2, i.e. Q in [X - sqrt(X^2-1), X + sqrt(X^2-1)].
//
// At the special point j the whole computation is integral: Q = |c|^2+|d|^2
// and the disc condition becomes |Qt + m|^2 <= 2XQ - Q^2 - 1 with
// m = b0 conj(d) + a0 conj(c) in Z[i], so scanlines use exact integer
// square roots.  Away from j the scan runs in doubles with a guard band;
// candidates within 1e-9 (relative to rho^2) of the disc boundary are
// re-decided by evaluating delta directly in extended precision.

namespace picard {

namespace {

// ---- lightweight unchecked Z[i] ops for the enumeration core ----
// All operands here are bounded by the Q-window (coordinates O(sqrt(X))),
// which count_exact caps at 1e6, so int64 intermediates cannot wrap.

struct GI {
    std::int64_t re, im;
};

inline GI gi_sub(GI a, GI b) { return {a.re - b.re, a.im - b.im}; }
inline GI gi_mul(GI a, GI b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
inline GI gi_conj(GI a) { return {a.re, -a.im}; }
inline std::int64_t gi_norm(GI a) { return a.re * a.re + a.im * a.im; }
inline bool gi_zero(GI a) { return a.re == 0 && a.im == 0; }

inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b, r = a % b;
    return (r != 0 && ((r < 0) != (b < 0))) ? q - 1 : q;
}
inline std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }

inline std::int64_t round_half_up(std::int64_t p, std::int64_t q) {  // q > 0
    return floor_div(2 * p + q, 2 * q);
}

inline GI gi_round_div(GI n, GI d) {
    std::int64_t nd = gi_norm(d);
    std::int64_t pre = n.re * d.re + n.im * d.im;
    std::int64_t pim = n.im * d.re - n.re * d.im;
    return {round_half_up(pre, nd), round_half_up(pim, nd)};
}

inline bool gi_coprime_unit(GI c, GI d) {
    while (!gi_zero(d)) {
        GI q = gi_round_div(c, d);
        GI r = gi_sub(c, gi_mul(q, d));
        c = d;
        d = r;
    }
    return gi_norm(c) == 1;
}

// Base solution of a*d - b*c = 1 for a coprime row; caller guarantees the
// gcd is a unit.  Bezout u is tracked through the loop, v recovered once.
inline void gi_solve_det(GI c, GI d, GI& a0, GI& b0) {
    GI r0 = c, r1 = d;
    GI u0{1, 0}, u1{0, 0};
    while (!gi_zero(r1)) {
        GI q = gi_round_div(r0, r1);
        GI r2 = gi_sub(r0, gi_mul(q, r1));
        GI u2 = gi_sub(u0, gi_mul(q, u1));
        r0 = r1; r1 = r2;
        u0 = u1; u1 = u2;
    }
    GI g = r0, u = u0, v;
    if (gi_zero(d)) {
        v = {0, 0};
    } else {
        // v = (g - u*c)/d, exact by the Bezout identity
        GI num = gi_sub(g, gi_mul(u, c));
        std::int64_t nd = gi_norm(d);
        v = {(num.re * d.re + num.im * d.im) / nd, (num.im * d.re - num.re * d.im) / nd};
    }
    GI ginv = gi_conj(g);  // g is a unit
    a0 = gi_mul(v, ginv);
    GI ub = gi_mul(u, ginv);
    b0 = {-ub.re, -ub.im};
}

inline std::int64_t isqrt64(std::int64_t n) {
    if (n < 0) return -1;
    auto s = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
    while (s > 0 && s * s > n) --s;
    while ((s + 1) * (s + 1) <= n) ++s;
    return s;
}

// #{t in Z[i] : |t|^2 <= M}
inline std::int64_t disc_points_origin(std::int64_t M) {
    if (M < 0) return 0;
    std::int64_t s = isqrt64(M);
    std::int64_t cnt = 0;
    for (std::int64_t t2 = -s; t2 <= s; ++t2) cnt += 2 * isqrt64(M - t2 * t2) + 1;
    return cnt;
}

int resolve_threads(int threads) {
    if (threads > 0) return threads;
    unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(hc) : 1;
}

// Inclusive boundary guard for real X: integer n passes "n <= v" when
// n <= floor(v + guard).  Keeps delta == X orbits counted when v is an
// integer up to roundoff.
constexpr double kFloorGuard = 1e-7;

// ------------------------------------------------------------------
// Exact counting at z = j.  SL_2 count via the 4-fold unit symmetry
// (c,d) -> (uc, ud): bottom rows are enumerated over the sector
// {c = 0 rep} + {re c >= 1, im c >= 0} and each contributes 4 rows of
// equal disc count (whole-orbit Frobenius norms coincide).
// ------------------------------------------------------------------

std::int64_t count_sl2_at_j(double X, int threads) {
    const bool integral_X = (X == std::floor(X));
    const auto Xi = static_cast<std::int64_t>(X);
    const double qhi_f = X + std::sqrt(X * X - 1.0);
    const auto Qhi = static_cast<std::int64_t>(std::floor(qhi_f + kFloorGuard));

    // c = 0 representative (0,1): gamma = (1 t; 0 1), delta = (|t|^2+2)/2.
    const std::int64_t M0 = integral_X
        ? 2 * Xi - 2
        : static_cast<std::int64_t>(std::floor(2.0 * X - 2.0 + kFloorGuard));
    std::int64_t total = 4 * disc_points_origin(M0);

    const std::int64_t cre_max = isqrt64(Qhi);
    const int nthreads = std::min<std::int64_t>(resolve_threads(threads),
                                                std::max<std::int64_t>(cre_max, 1));

    auto worker = [&](int tid) -> std::int64_t {
        std::int64_t acc = 0;
        for (std::int64_t cre = 1 + tid; cre <= cre_max; cre += nthreads) {
            const std::int64_t cim_max = isqrt64(Qhi - cre * cre);
            for (std::int64_t cim = 0; cim <= cim_max; ++cim) {
                const GI c{cre, cim};
                const std::int64_t nc = cre * cre + cim * cim;
                const std::int64_t dn_max = Qhi - nc;
                const std::int64_t dre_max = isqrt64(dn_max);
                for (std::int64_t dre = -dre_max; dre <= dre_max; ++dre) {
                    const std::int64_t dim_max = isqrt64(dn_max - dre * dre);
                    for (std::int64_t dim = -dim_max; dim <= dim_max; ++dim) {
                        const GI d{dre, dim};
                        const std::int64_t Q = nc + dre * dre + dim * dim;
                        const std::int64_t M = integral_X
                            ? 2 * Xi * Q - Q * Q - 1
                            : static_cast<std::int64_t>(
                                  std::floor(2.0 * X * Q - static_cast<double>(Q) * Q -
                                             1.0 + kFloorGuard));
                        if (M < 0) continue;
                        if (!gi_coprime_unit(c, d)) continue;
                        GI a0, b0;
                        gi_solve_det(c, d, a0, b0);
                        // disc center offset m = b0 conj(d) + a0 conj(c), reduced
                        // to the balanced residue mod Q (a t-lattice shift);
                        // 128-bit accumulation keeps oversized Bezout bases safe
                        auto balance = [Q](__int128 v) {
                            auto r = static_cast<std::int64_t>(v % Q);
                            if (r < 0) r += Q;
                            if (2 * r > Q) r -= Q;
                            return r;
                        };
                        GI m{balance(static_cast<__int128>(b0.re) * d.re +
                                     static_cast<__int128>(b0.im) * d.im +
                                     static_cast<__int128>(a0.re) * c.re +
                                     static_cast<__int128>(a0.im) * c.im),
                             balance(static_cast<__int128>(b0.im) * d.re -
                                     static_cast<__int128>(b0.re) * d.im +
                                     static_cast<__int128>(a0.im) * c.re -
                                     static_cast<__int128>(a0.re) * c.im)};
                        // #{t : |Qt + m|^2 <= M}, exact integer scanlines
                        const std::int64_t s = isqrt64(M);
                        const std::int64_t t2_lo = ceil_div(-m.im - s, Q);
                        const std::int64_t t2_hi = floor_div(-m.im + s, Q);
                        std::int64_t cnt = 0;
                        for (std::int64_t t2 = t2_lo; t2 <= t2_hi; ++t2) {
                            const std::int64_t v = Q * t2 + m.im;
                            const std::int64_t s1 = isqrt64(M - v * v);
                            const std::int64_t lo = ceil_div(-m.re - s1, Q);
                            const std::int64_t hi = floor_div(-m.re + s1, Q);
                            if (hi >= lo) cnt += hi - lo + 1;
                        }
                        acc += 4 * cnt;
                    }
                }
            }
        }
        return acc;
    };

    if (nthreads <= 1) {
        total += worker(0);
    } else {
        std::vector<std::int64_t> partial(nthreads, 0);
        std::vector<std::thread> pool;
        pool.reserve(nthreads);
        for (int t = 0; t < nthreads; ++t)
            pool.emplace_back([&, t] { partial[t] = worker(t); });
        for (auto& th : pool) th.join();
        for (std::int64_t p : partial) total += p;
    }
    return total;
}

// ------------------------------------------------------------------
// Generic z: double-precision disc scan with guarded boundaries.
// ------------------------------------------------------------------

long double delta_direct_ld(GI a, GI b, GI c, GI d, const PointH3& z) {
    using C = std::complex<long double>;
    const C x(z.x.real(), z.x.imag());
    const long double y = z.y;
    const C A(static_cast<long double>(a.re), static_cast<long double>(a.im));
    const C B(static_cast<long double>(b.re), static_cast<long double>(b.im));
    const C Cc(static_cast<long double>(c.re), static_cast<long double>(c.im));
    const C D(static_cast<long double>(d.re), static_cast<long double>(d.im));
    const C cxd = Cc * x + D;
    const long double Q = std::norm(cxd) + std::norm(Cc) * y * y;
    const C xp = ((A * x + B) * std::conj(cxd) + A * std::conj(Cc) * y * y) / Q;
    const long double yp = y / Q;
    const long double dx = std::norm(x - xp);
    return (dx + y * y + yp * yp) / (2.0L * y * yp);
}

struct CosetPair {
    GI c, d, a0, b0;             // base solution, recentered so w0 is small
    double yp;                   // image height y/Q
    std::complex<double> w0;     // disc center for the t-shift
    double rho2;                 // disc radius squared (>= 0 when reached)
};

// counts the admissible t-shifts of one coset pair, guarded at the disc
// boundary by direct extended-precision evaluation
std::int64_t scan_pair(const CosetPair& p, double X, const PointH3& z) {
    const double eps = 1e-9 * std::max(1.0, p.rho2);
    if (p.rho2 < -eps) return 0;
    std::int64_t acc = 0;
    const double rho_w = std::sqrt(std::max(p.rho2 + eps, 0.0));
    const auto t2_lo = static_cast<std::int64_t>(std::ceil(p.w0.imag() - rho_w));
    const auto t2_hi = static_cast<std::int64_t>(std::floor(p.w0.imag() + rho_w));
    for (std::int64_t t2 = t2_lo; t2 <= t2_hi; ++t2) {
        const double dy = static_cast<double>(t2) - p.w0.imag();
        const double rem = p.rho2 - dy * dy;
        if (rem < -eps) continue;
        const double hw = std::sqrt(std::max(rem + eps, 0.0));
        const auto lo = static_cast<std::int64_t>(std::ceil(p.w0.real() - hw));
        const auto hi = static_cast<std::int64_t>(std::floor(p.w0.real() + hw));
        for (std::int64_t t1 = lo; t1 <= hi; ++t1) {
            const double dx = static_cast<double>(t1) - p.w0.real();
            const double r2 = dx * dx + dy * dy;
            if (r2 <= p.rho2 - eps) {
                ++acc;
            } else if (r2 <= p.rho2 + eps) {
                // boundary band: decide by direct evaluation
                const GI t{t1, t2};
                const GI a{p.a0.re + t.re * p.c.re - t.im * p.c.im,
                           p.a0.im + t.re * p.c.im + t.im * p.c.re};
                const GI b{p.b0.re + t.re * p.d.re - t.im * p.d.im,
                           p.b0.im + t.re * p.d.im + t.im * p.d.re};
                if (delta_direct_ld(a, b, p.c, p.d, z) <=
                    static_cast<long double>(X) * (1.0L + 1e-12L))
                    ++acc;
            }
        }
    }
    return acc;
}

// image data of a base row at z; returns false when the disc is empty
bool make_pair_geometry(GI c, GI d, GI a0, GI b0, double X, const PointH3& z,
                        CosetPair& out) {
    const double y = z.y, y2 = y * y;
    const std::complex<double> x = z.x;
    const std::complex<double> cd(static_cast<double>(c.re), static_cast<double>(c.im));
    const std::complex<double> dd(static_cast<double>(d.re), static_cast<double>(d.im));
    const std::complex<double> ad(static_cast<double>(a0.re), static_cast<double>(a0.im));
    const std::complex<double> bd(static_cast<double>(b0.re), static_cast<double>(b0.im));
    const std::complex<double> cxd = cd * x + dd;
    const double Q = std::norm(cxd) + std::norm(cd) * y2;
    // coarse window precheck: rho2 >= 0 iff Q^2 - 2XQ + 1 <= 0; a margin of
    // 1 keeps every boundary-grazing pair on the exact path below
    if (Q * (Q - 2.0 * X) + 1.0 > 1.0) return false;
    const double yp = y / Q;
    const double rho2 = 2.0 * X * y * yp - y2 - yp * yp;
    if (rho2 < -1e-9 * std::max(1.0, std::fabs(rho2))) return false;
    std::complex<double> xp = ((ad * x + bd) * std::conj(cxd) + ad * std::conj(cd) * y2) / Q;
    std::complex<double> w0 = x - xp;
    const auto t0re = static_cast<std::int64_t>(std::llround(w0.real()));
    const auto t0im = static_cast<std::int64_t>(std::llround(w0.imag()));
    if (t0re != 0 || t0im != 0) {
        const GI t0{t0re, t0im};
        a0 = GI{a0.re + (t0.re * c.re - t0.im * c.im), a0.im + (t0.re * c.im + t0.im * c.re)};
        b0 = GI{b0.re + (t0.re * d.re - t0.im * d.im), b0.im + (t0.re * d.im + t0.im * d.re)};
        w0 -= std::complex<double>(static_cast<double>(t0re), static_cast<double>(t0im));
    }
    out = CosetPair{c, d, a0, b0, yp, w0, rho2};
    return true;
}

// Enumerates coprime rows (c,d) within the Q-window for delta <= X at z,
// restricted to c.re stripes (offset, offset+stride, ...) for threading.
template <class F>
void for_each_coset_pair(double X, const PointH3& z, std::int64_t offset,
                         std::int64_t stride, F&& f) {
    const double y = z.y, y2 = y * y;
    const std::complex<double> x = z.x;
    const double qhi = X + std::sqrt(X * X - 1.0) + 1e-9;
    const auto cre_max = static_cast<std::int64_t>(std::floor(std::sqrt(qhi) / y + 1e-9));

    for (std::int64_t cre = -cre_max + offset; cre <= cre_max; cre += stride) {
        const double rem_c = qhi / y2 - static_cast<double>(cre) * cre;
        if (rem_c < 0.0) continue;
        const auto cim_max = static_cast<std::int64_t>(std::floor(std::sqrt(rem_c) + 1e-9));
        for (std::int64_t cim = -cim_max; cim <= cim_max; ++cim) {
            const GI c{cre, cim};
            const double nc = static_cast<double>(cre) * cre + static_cast<double>(cim) * cim;
            const double rd2 = qhi - nc * y2;
            if (rd2 < 0.0) continue;
            const double rd = std::sqrt(rd2) + 1e-9;
            const std::complex<double> dc = -std::complex<double>(static_cast<double>(cre),
                                                                  static_cast<double>(cim)) * x;
            const auto dre_lo = static_cast<std::int64_t>(std::ceil(dc.real() - rd));
            const auto dre_hi = static_cast<std::int64_t>(std::floor(dc.real() + rd));
            for (std::int64_t dre = dre_lo; dre <= dre_hi; ++dre) {
                const double ddx = static_cast<double>(dre) - dc.real();
                const double h2 = rd * rd - ddx * ddx;
                if (h2 < 0.0) continue;
                const double h = std::sqrt(h2);
                const auto dim_lo = static_cast<std::int64_t>(std::ceil(dc.imag() - h));
                const auto dim_hi = static_cast<std::int64_t>(std::floor(dc.imag() + h));
                for (std::int64_t dim = dim_lo; dim <= dim_hi; ++dim) {
                    const GI d{dre, dim};
                    if (!gi_coprime_unit(c, d)) continue;
                    GI a0, b0;
                    gi_solve_det(c, d, a0, b0);
                    CosetPair p;
                    if (make_pair_geometry(c, d, a0, b0, X, z, p)) f(p);
                }
            }
        }
    }
}

std::int64_t count_sl2_generic(double X, const PointH3& z, int threads) {
    const int nthreads = resolve_threads(threads);

    auto worker = [&](int tid) -> std::int64_t {
        std::int64_t acc = 0;
        for_each_coset_pair(X, z, tid, nthreads,
                            [&](const CosetPair& p) { acc += scan_pair(p, X, z); });
        return acc;
    };

    if (nthreads <= 1) return worker(0);
    std::vector<std::int64_t> partial(nthreads, 0);
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (int t = 0; t < nthreads; ++t)
        pool.emplace_back([&, t] { partial[t] = worker(t); });
    for (auto& th : pool) th.join();
    std::int64_t total = 0;
    for (std::int64_t p : partial) total += p;
    return total;
}

bool is_special_point_j(const PointH3& z) {
    return z.x.real() == 0.0 && z.x.imag() == 0.0 && z.y == 1.0;
}

}  // namespace

CountResult count_exact(double X, const PointH3& z, int threads) {
    if (!(X >= 1.0)) throw std::domain_error("count_exact: X must be >= 1");
    if (X > 1e6)
        throw std::invalid_argument("count_exact: X exceeds the supported desk-scale range");
    std::int64_t sl2 = is_special_point_j(z) ? count_sl2_at_j(X, threads)
                                             : count_sl2_generic(X, z, threads);
    if (sl2 % 2 != 0)
        throw std::runtime_error("count_exact: internal error, odd SL2 count");
    const std::int64_t n = sl2 / 2;
    const double main = kCountCoeff * X * X;
    return CountResult{X, z, n, main, static_cast<double>(n) - main};
}

BoxCounter::BoxCounter(double X, const Box3& box) : X_(X), box_(box) {
    if (!(X >= 1.0)) throw std::domain_error("BoxCounter: X must be >= 1");
    if (!(box.y_lo > 0.0) || box.y_hi < box.y_lo || box.x1_hi < box.x1_lo ||
        box.x2_hi < box.x2_lo)
        throw std::domain_error("BoxCounter: malformed box");
    if (X > 1e6)
        throw std::invalid_argument("BoxCounter: X exceeds the supported desk-scale range");

    // Candidate rows for every point of the box: |c| <= sqrt(Qhi)/y_lo, and
    // d inside the union over the box of the per-point discs around -c*x.
    // The union is covered by the bounding box of the four mapped corners
    // (the map x -> -c*x is linear) expanded by the largest disc radius.
    const double qhi = X + std::sqrt(X * X - 1.0) + 1e-9;
    const double y_lo2 = box.y_lo * box.y_lo;
    const auto cre_max = static_cast<std::int64_t>(std::floor(std::sqrt(qhi) / box.y_lo + 1e-9));
    const std::complex<double> corners[4] = {{box.x1_lo, box.x2_lo},
                                             {box.x1_lo, box.x2_hi},
                                             {box.x1_hi, box.x2_lo},
                                             {box.x1_hi, box.x2_hi}};
    for (std::int64_t cre = -cre_max; cre <= cre_max; ++cre)
        for (std::int64_t cim = -cre_max; cim <= cre_max; ++cim) {
            const GI c{cre, cim};
            const double nc = static_cast<double>(cre) * cre + static_cast<double>(cim) * cim;
            const double rd2 = qhi - nc * y_lo2;
            if (rd2 < 0.0) continue;
            const double rd = std::sqrt(rd2) + 1e-9;
            const std::complex<double> cc(static_cast<double>(cre), static_cast<double>(cim));
            double re_lo = 1e300, re_hi = -1e300, im_lo = 1e300, im_hi = -1e300;
            for (const auto& x : corners) {
                const std::complex<double> m = -cc * x;
                re_lo = std::min(re_lo, m.real());
                re_hi = std::max(re_hi, m.real());
                im_lo = std::min(im_lo, m.imag());
                im_hi = std::max(im_hi, m.imag());
            }
            const auto dre_lo = static_cast<std::int64_t>(std::ceil(re_lo - rd));
            const auto dre_hi = static_cast<std::int64_t>(std::floor(re_hi + rd));
            const auto dim_lo = static_cast<std::int64_t>(std::ceil(im_lo - rd));
            const auto dim_hi = static_cast<std::int64_t>(std::floor(im_hi + rd));
            for (std::int64_t dre = dre_lo; dre <= dre_hi; ++dre)
                for (std::int64_t dim = dim_lo; dim <= dim_hi; ++dim) {
                    const GI d{dre, dim};
                    if (!gi_coprime_unit(c, d)) continue;
                    GI a0, b0;
                    gi_solve_det(c, d, a0, b0);
                    pairs_.push_back(
                        Row{c.re, c.im, d.re, d.im, a0.re, a0.im, b0.re, b0.im});
                }
        }
}

std::int64_t BoxCounter::count(const PointH3& z) const {
    constexpr double kSlack = 1e-9;
    if (z.x1() < box_.x1_lo - kSlack || z.x1() > box_.x1_hi + kSlack ||
        z.x2() < box_.x2_lo - kSlack || z.x2() > box_.x2_hi + kSlack ||
        z.y < box_.y_lo - kSlack || z.y > box_.y_hi + kSlack)
        throw std::domain_error("BoxCounter: point outside the construction box");
    std::int64_t sl2 = 0;
    for (const Row& row : pairs_) {
        CosetPair p;
        if (make_pair_geometry(GI{row.cre, row.cim}, GI{row.dre, row.dim},
                               GI{row.are, row.aim}, GI{row.bre, row.bim}, X_, z, p))
            sl2 += scan_pair(p, X_, z);
    }
    if (sl2 % 2 != 0) throw std::runtime_error("BoxCounter: internal error, odd SL2 count");
    return sl2 / 2;
}

std::int64_t count_naive(double X, const PointH3& z, double cap) {
    if (!(X >= 1.0)) throw std::domain_error("count_naive: X must be >= 1");
    if (X > cap)
        throw std::invalid_argument("count_naive: X above the oracle cap (" +
                                    std::to_string(cap) + "); the oracle is small-scale");

    std::int64_t sl2 = 0;

    if (is_special_point_j(z)) {
        // delta(j, gamma j) = (|a|^2+|b|^2+|c|^2+|d|^2)/2; enumerate the
        // Frobenius ball norm-sum <= 2X and solve the determinant per (a,b,c).
        const auto B = static_cast<std::int64_t>(std::floor(2.0 * X + kFloorGuard));
        const std::int64_t rmax = isqrt64(B);
        for (std::int64_t are = -rmax; are <= rmax; ++are)
            for (std::int64_t aim = -isqrt64(B - are * are); aim * aim <= B - are * are; ++aim) {
                const GaussInt a{are, aim};
                const std::int64_t na = are * are + aim * aim;
                const std::int64_t rb = isqrt64(B - na);
                for (std::int64_t bre = -rb; bre <= rb; ++bre)
                    for (std::int64_t bim = -isqrt64(B - na - bre * bre);
                         bim * bim <= B - na - bre * bre; ++bim) {
                        const GaussInt b{bre, bim};
                        const std::int64_t nb = bre * bre + bim * bim;
                        const std::int64_t rc = isqrt64(B - na - nb);
                        for (std::int64_t cre = -rc; cre <= rc; ++cre)
                            for (std::int64_t cim = -isqrt64(B - na - nb - cre * cre);
                                 cim * cim <= B - na - nb - cre * cre; ++cim) {
                                const GaussInt c{cre, cim};
                                const std::int64_t ncc = cre * cre + cim * cim;
                                if (!a.is_zero()) {
                                    const GaussInt num = GaussInt{1, 0} + b * c;
                                    if (!divides(a, num)) continue;
                                    const GaussInt d = exact_div(num, a);
                                    if (na + nb + ncc + norm(d) <= B) ++sl2;
                                } else {
                                    // a = 0 forces -bc = 1; then d is free.
                                    if (b * c != GaussInt{-1, 0}) continue;
                                    sl2 += disc_points_origin(B - na - nb - ncc);
                                }
                            }
                    }
            }
    } else {
        const double y = z.y, y2 = y * y;
        const std::complex<double> x = z.x;
        const double qhi = X + std::sqrt(X * X - 1.0) + 1e-9;
        const double znorm = std::sqrt(std::norm(x) + y2);
        const double tbound = y * std::sqrt(std::max(2.0 * (X - 1.0), 0.0)) + 1e-9;
        const long double xguard = static_cast<long double>(X) * (1.0L + 1e-12L);

        auto for_disc = [](std::complex<double> center, double radius, auto&& fn) {
            const auto re_lo = static_cast<std::int64_t>(std::ceil(center.real() - radius));
            const auto re_hi = static_cast<std::int64_t>(std::floor(center.real() + radius));
            for (std::int64_t re = re_lo; re <= re_hi; ++re) {
                const double dx = static_cast<double>(re) - center.real();
                const double h2 = radius * radius - dx * dx;
                if (h2 < 0.0) continue;
                const double h = std::sqrt(h2);
                const auto im_lo = static_cast<std::int64_t>(std::ceil(center.imag() - h));
                const auto im_hi = static_cast<std::int64_t>(std::floor(center.imag() + h));
                for (std::int64_t im = im_lo; im <= im_hi; ++im) fn(re, im);
            }
        };

        for_disc({0.0, 0.0}, std::sqrt(qhi) / y + 1e-9, [&](std::int64_t cre, std::int64_t cim) {
            const GaussInt c{cre, cim};
            const double nc = static_cast<double>(cre) * cre + static_cast<double>(cim) * cim;
            const double rd2 = qhi - nc * y2;
            if (rd2 < 0.0) return;
            const std::complex<double> cc(static_cast<double>(cre), static_cast<double>(cim));
            for_disc(-cc * x, std::sqrt(rd2) + 1e-9, [&](std::int64_t dre, std::int64_t dim) {
                const GaussInt d{dre, dim};
                if (c.is_zero()) {
                    if (!d.is_unit()) return;
                    const GaussInt a = d.conj();  // a = d^{-1}
                    const double bb = 2.0 * znorm + tbound;
                    for_disc({0.0, 0.0}, bb, [&](std::int64_t bre, std::int64_t bim) {
                        const GaussInt b{bre, bim};
                        if (delta_direct_ld({a.re, a.im}, {b.re, b.im}, {0, 0},
                                            {d.re, d.im}, z) <= xguard)
                            ++sl2;
                    });
                    return;
                }
                // the inverse row (-c, a) obeys the same window, bounding a
                for_disc(cc * x, std::sqrt(rd2) + 1e-9, [&](std::int64_t are, std::int64_t aim) {
                    const GaussInt a{are, aim};
                    const GaussInt num = a * d - GaussInt{1, 0};
                    if (!divides(c, num)) return;
                    const GaussInt b = exact_div(num, c);
                    if (delta_direct_ld({a.re, a.im}, {b.re, b.im}, {c.re, c.im},
                                        {d.re, d.im}, z) <= xguard)
                        ++sl2;
                });
            });
        });
    }

    if (sl2 % 2 != 0) throw std::runtime_error("count_naive: internal error, odd SL2 count");
    return sl2 / 2;
}

// ------------------------------------------------------------------
// Smoothed kernels
// ------------------------------------------------------------------

namespace detail {

double ball_intersection_volume(double d, double ra, double rb) {
    if (d >= ra + rb) return 0.0;
    if (d <= std::fabs(ra - rb)) return ball_volume(std::min(ra, rb));
    // Fermi coordinates along the axis through the centers: the slice at
    // axial position s is a disc of perpendicular radius r with
    // cosh r = cosh(rho_i)/cosh(s - s_i), and the slice area integrates to
    //   V = pi * Integral (min_i cosh^2 rho_i / cosh^2(s - s_i) - 1) ds.
    const double s_lo = std::max(-ra, d - rb);
    const double s_hi = std::min(ra, d + rb);
    const double cha = std::cosh(ra), chb = std::cosh(rb);
    auto integrand = [&](double s) {
        const double q1 = cha / std::cosh(s);
        const double q2 = chb / std::cosh(s - d);
        const double q = std::min(q1, q2);
        return std::max(q * q - 1.0, 0.0);
    };
    // single crossover of the two constraints; split there for the quadrature
    const double tc = (cha * std::cosh(d) - chb) / (cha * std::sinh(d));
    double sc = s_hi;
    if (tc <= -1.0)
        sc = s_lo;
    else if (tc < 1.0)
        sc = std::clamp(std::atanh(tc), s_lo, s_hi);
    const double tol = 0.5e-9 / M_PI;
    double v = 0.0;
    if (sc > s_lo) v += adaptive_simpson(integrand, s_lo, sc, tol);
    if (s_hi > sc) v += adaptive_simpson(integrand, sc, s_hi, tol);
    return M_PI * v;
}

}  // namespace detail

double smoothed_kernel(double t, const SmoothedKernelSpec& spec) {
    if (!(t >= 1.0)) throw std::domain_error("smoothed_kernel: t must be >= 1");
    const double d = std::acosh(std::max(t, 1.0));
    if (d <= spec.inner_radius()) return 1.0;
    if (d >= spec.outer_radius()) return 0.0;
    const double v = detail::ball_intersection_volume(d, spec.rho(), spec.eta) /
                     ball_volume(spec.eta);
    return std::clamp(v, 0.0, 1.0);
}

SmoothedKernel::SmoothedKernel(const SmoothedKernelSpec& spec, int grid_size)
    : spec_(spec) {
    d_lo_ = std::max(spec.inner_radius(), 0.0);
    d_hi_ = spec.outer_radius();
    const int n = std::max(grid_size, 16);
    step_ = (d_hi_ - d_lo_) / n;
    values_.resize(n + 1);
    for (int i = 0; i <= n; ++i) {
        const double d = d_lo_ + i * step_;
        values_[i] = smoothed_kernel(std::cosh(d), spec);
    }
    values_.front() = spec.inner_radius() >= 0.0 ? 1.0 : values_.front();
    values_.back() = 0.0;
}

double SmoothedKernel::operator()(double t) const {
    if (!(t >= 1.0)) throw std::domain_error("SmoothedKernel: t must be >= 1");
    const double d = std::acosh(std::max(t, 1.0));
    if (d <= spec_.inner_radius()) return 1.0;
    if (d >= d_hi_) return 0.0;
    if (d <= d_lo_) return values_.front();
    const double u = (d - d_lo_) / step_;
    const auto i = std::min(static_cast<std::size_t>(u), values_.size() - 2);
    const double frac = u - static_cast<double>(i);
    // linear interpolation of monotone samples stays monotone and in [0,1]
    return values_[i] + frac * (values_[i + 1] - values_[i]);
}

double count_smoothed(const SmoothedKernelSpec& spec, const PointH3& z) {
    const SmoothedKernel kernel(spec);
    const double Xs = std::cosh(spec.outer_radius());
    const double y = z.y;
    double acc = 0.0;
    // identity coset (c,d)=(0,1) and everything else arrive through the
    // generic pair enumeration; serial order keeps the sum reproducible
    for_each_coset_pair(Xs, z, 0, 1, [&](const CosetPair& p) {
        if (p.rho2 < 0.0) return;
        const double inv2yyp = 1.0 / (2.0 * y * p.yp);
        const double base = y * y + p.yp * p.yp;
        const double rho = std::sqrt(p.rho2);
        const auto t2_lo = static_cast<std::int64_t>(std::ceil(p.w0.imag() - rho));
        const auto t2_hi = static_cast<std::int64_t>(std::floor(p.w0.imag() + rho));
        for (std::int64_t t2 = t2_lo; t2 <= t2_hi; ++t2) {
            const double dy = static_cast<double>(t2) - p.w0.imag();
            const double rem = p.rho2 - dy * dy;
            if (rem < 0.0) continue;
            const double hw = std::sqrt(rem);
            const auto lo = static_cast<std::int64_t>(std::ceil(p.w0.real() - hw));
            const auto hi = static_cast<std::int64_t>(std::floor(p.w0.real() + hw));
            for (std::int64_t t1 = lo; t1 <= hi; ++t1) {
                const double dx = static_cast<double>(t1) - p.w0.real();
                // clamp against roundoff at the identity orbit (delta = 1)
                const double t = std::max(1.0, (dx * dx + dy * dy + base) * inv2yyp);
                acc += kernel(t);
            }
        }
    });
    return acc / 2.0;
}

std::string to_csv_row(const CountResult& r) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%.17g,%lld,%.17g,%.17g", r.X,
                  static_cast<long long>(r.count), r.main_term, r.remainder);
    return buf;
}

nlohmann::json CountResult::to_json() const {
    return nlohmann::json{{"X", X},
                          {"z", {z.x1(), z.x2(), z.y}},
                          {"count", count},
                          {"main_term", main_term},
                          {"remainder", remainder}};
}

}  // namespace picard
