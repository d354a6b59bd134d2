#include "picard/local_average.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <thread>

#include "picard/quadrature.hpp"

namespace picard {

TestFunction::TestFunction(const PointH3& center, double radius, double sharpness,
                           double amplitude, double cusp_cutoff)
    : center_(center), radius_(radius), sharpness_(sharpness), amplitude_(amplitude) {
    if (!(radius > 0.0)) throw std::invalid_argument("TestFunction: radius must be positive");
    if (!(sharpness > 0.0))
        throw std::invalid_argument("TestFunction: sharpness must be positive");
    if (!(cusp_cutoff > 0.0))
        throw std::invalid_argument("TestFunction: cusp cutoff must be positive");

    // The geodesic ball is the Euclidean ball with center (x, y cosh rho)
    // and radius y sinh rho; it must clear every face of the fundamental
    // domain by a positive margin and stay below the cusp cutoff.
    constexpr double kMargin = 1e-9;
    const double ec_y = center.y * std::cosh(radius);
    const double er = center.y * std::sinh(radius);
    if (center.y > cusp_cutoff || center.y * std::exp(radius) > cusp_cutoff)
        throw std::invalid_argument(
            "TestFunction: support exceeds the cusp cutoff y <= " +
            std::to_string(cusp_cutoff));
    if (std::fabs(center.x1()) + er >= 0.5 - kMargin)
        throw std::invalid_argument("TestFunction: support touches the |x1| = 1/2 face");
    if (center.x2() - er <= kMargin || center.x2() + er >= 0.5 - kMargin)
        throw std::invalid_argument("TestFunction: support touches an x2 face");
    const double ec_norm = std::sqrt(center.x1() * center.x1() +
                                     center.x2() * center.x2() + ec_y * ec_y);
    if (ec_norm - er <= 1.0 + kMargin)
        throw std::invalid_argument("TestFunction: support touches the unit sphere face");
}

double TestFunction::operator()(const PointH3& z) const {
    const double d = dist(center_, z);
    const double u = d / radius_;
    if (u >= 1.0) return 0.0;
    return amplitude_ * std::exp(-sharpness_ / (1.0 - u * u));
}

Box3 TestFunction::support_box() const {
    const double er = center_.y * std::sinh(radius_);
    return {center_.x1() - er, center_.x1() + er,
            center_.x2() - er, center_.x2() + er,
            center_.y * std::exp(-radius_), center_.y * std::exp(radius_)};
}

namespace {

struct Node {
    PointH3 z;
    double w;  // quadrature weight including the hyperbolic y^{-3}
};

// Tensor Gauss-Legendre nodes at refinement level l (axis split into
// 2^{l-1} segments, n nodes per segment per axis).
std::vector<Node> make_nodes(const Box3& box, int nodes_per_axis, int level) {
    const auto& gl = gauss_legendre(nodes_per_axis);
    const int segs = 1 << (level - 1);

    auto axis_nodes = [&](double lo, double hi) {
        std::vector<std::pair<double, double>> out;
        out.reserve(static_cast<std::size_t>(segs) * gl.size());
        const double w = (hi - lo) / segs;
        for (int s = 0; s < segs; ++s) {
            const double a = lo + s * w, m = a + 0.5 * w;
            for (auto [x, wt] : gl) out.emplace_back(m + 0.5 * w * x, 0.5 * w * wt);
        }
        return out;
    };

    const auto ax1 = axis_nodes(box.x1_lo, box.x1_hi);
    const auto ax2 = axis_nodes(box.x2_lo, box.x2_hi);
    const auto ay = axis_nodes(box.y_lo, box.y_hi);

    std::vector<Node> nodes;
    nodes.reserve(ax1.size() * ax2.size() * ay.size());
    for (auto [x1, w1] : ax1)
        for (auto [x2, w2] : ax2)
            for (auto [y, wy] : ay)
                nodes.push_back({PointH3(x1, x2, y), w1 * w2 * wy / (y * y * y)});
    return nodes;
}

int resolve_threads(int threads) {
    if (threads > 0) return threads;
    unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(hc) : 1;
}

// Evaluates values[i] = eval(nodes[i]) in parallel, then reduces in a
// fixed pairwise tree; the result is independent of the thread count.
template <class Eval>
double quadrature_pass(const std::vector<Node>& nodes, int threads, Eval&& eval) {
    std::vector<double> vals(nodes.size(), 0.0);
    const int nt = std::min<std::size_t>(resolve_threads(threads), std::max<std::size_t>(nodes.size(), 1));
    if (nt <= 1) {
        for (std::size_t i = 0; i < nodes.size(); ++i) vals[i] = eval(nodes[i]);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(nt);
        for (int t = 0; t < nt; ++t)
            pool.emplace_back([&, t] {
                for (std::size_t i = t; i < nodes.size(); i += nt) vals[i] = eval(nodes[i]);
            });
        for (auto& th : pool) th.join();
    }
    return pairwise_sum(vals);
}

}  // namespace

double integral_f(const TestFunction& f, const QuadratureSpec& quad, double rel_tol) {
    const Box3 box = f.support_box();
    // f evaluations are cheap, so the dyadic refinement extends past the
    // requested budget (up to ~3e7 nodes) until node-doubling converges
    int max_level = quad.refinement_levels;
    while (max_level < 9) {
        const double per_axis = quad.nodes_per_axis * std::pow(2.0, max_level);
        if (per_axis * per_axis * per_axis > 3.4e7) break;
        ++max_level;
    }
    double prev = 0.0, cur = 0.0;
    for (int level = 1; level <= max_level; ++level) {
        const auto nodes = make_nodes(box, quad.nodes_per_axis, level);
        prev = cur;
        cur = quadrature_pass(nodes, 1, [&](const Node& n) { return n.w * f(n.z); });
        if (level > 1 && std::fabs(cur - prev) <= rel_tol * std::fabs(cur)) return cur;
    }
    if (max_level == 1) return cur;
    throw QuadratureError("integral_f: node-doubling did not converge", cur,
                          std::fabs(cur - prev) / std::max(std::fabs(cur), 1e-300));
}

double average_value(const TestFunction& f, const QuadratureSpec& quad) {
    return integral_f(f, quad) / kPicardVolume;
}

std::vector<double> local_average_levels(double X, const TestFunction& f,
                                         const QuadratureSpec& quad, int threads,
                                         double node_budget) {
    if (!(X >= 1.0)) throw std::domain_error("local_average: X must be >= 1");
    const Box3 box = f.support_box();

    // enumeration work per node grows like (2X)^2 / y^2; refuse nodes that
    // would blow the budget before starting
    {
        const double y_min = box.y_lo;
        const double est = M_PI * M_PI * (2.0 * X) * (2.0 * X) / (2.0 * y_min * y_min);
        if (est > node_budget) {
            char msg[200];
            std::snprintf(msg, sizeof(msg),
                          "local_average: enumeration budget exceeded at node y=%.6g "
                          "(estimated %.3g pair visits > budget %.3g)",
                          y_min, est, node_budget);
            throw std::runtime_error(msg);
        }
    }

    // one candidate-row enumeration amortized across every node of the grid
    const BoxCounter counter(X, box);
    std::vector<double> levels;
    for (int level = 1; level <= quad.refinement_levels; ++level) {
        const auto nodes = make_nodes(box, quad.nodes_per_axis, level);
        levels.push_back(quadrature_pass(nodes, threads, [&](const Node& n) {
            const double fv = f(n.z);
            if (fv == 0.0) return 0.0;  // outside the support ball
            return n.w * fv * static_cast<double>(counter.count(n.z));
        }));
    }
    return levels;
}

double local_average(double X, const TestFunction& f, const QuadratureSpec& quad,
                     int threads, double node_budget) {
    return local_average_levels(X, f, quad, threads, node_budget).back();
}

RemainderCurve remainder_curve(const std::vector<double>& X_grid, const TestFunction& f,
                               const QuadratureSpec& quad, int threads) {
    const double F = integral_f(f, quad);
    RemainderCurve curve{{}, 0.0, 0};
    curve.points.reserve(X_grid.size());
    std::vector<double> lx, lr;
    for (double X : X_grid) {
        const double la = local_average(X, f, quad, threads);
        const double main = kCountCoeff * X * X * F;
        const double rem = la - main;
        curve.points.push_back({X, la, main, rem});
        if (rem == 0.0) {
            ++curve.zero_points_excluded;
        } else {
            lx.push_back(std::log(X));
            lr.push_back(std::log(std::fabs(rem)));
        }
    }
    // least-squares slope of log|remainder| against log X
    if (lx.size() >= 2) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const auto n = static_cast<double>(lx.size());
        for (std::size_t i = 0; i < lx.size(); ++i) {
            sx += lx[i];
            sy += lr[i];
            sxx += lx[i] * lx[i];
            sxy += lx[i] * lr[i];
        }
        curve.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    } else {
        curve.slope = std::numeric_limits<double>::quiet_NaN();
    }
    return curve;
}

}  // namespace picard
