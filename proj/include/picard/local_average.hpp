#pragma once

// Local averages of the counting function: integration of N(X,z) against
// smooth compactly supported bumps over the fundamental domain, average
// values f-bar, remainder curves and empirical slope fits.

#include <cstdint>
#include <string>
#include <vector>

#include "picard/lattice_count.hpp"

namespace picard {

/// Smooth bump on the quotient: amplitude * exp(-s / (1 - (d/radius)^2))
/// inside the geodesic ball of the given radius around the center, zero
/// outside; vanishes to all orders at the support boundary.
///
/// Construction rejects supports that are not strictly inside the compact
/// part of the fundamental domain (cusp cut at y <= cusp_cutoff).
class TestFunction {
  public:
    TestFunction(const PointH3& center, double radius, double sharpness,
                 double amplitude = 1.0, double cusp_cutoff = 4.0);

    double operator()(const PointH3& z) const;

    const PointH3& center() const { return center_; }
    double radius() const { return radius_; }
    double sharpness() const { return sharpness_; }
    double amplitude() const { return amplitude_; }

    /// Bounding box of the support ball (a Euclidean ball in the model).
    Box3 support_box() const;

  private:
    PointH3 center_;
    double radius_;
    double sharpness_;
    double amplitude_;
};

struct QuadratureSpec {
    int nodes_per_axis = 4;
    int refinement_levels = 3;

    QuadratureSpec() = default;
    QuadratureSpec(int nodes, int levels) : nodes_per_axis(nodes), refinement_levels(levels) {
        if (nodes_per_axis < 4)
            throw std::domain_error("QuadratureSpec: nodes_per_axis must be >= 4");
        if (refinement_levels < 1)
            throw std::domain_error("QuadratureSpec: refinement_levels must be >= 1");
    }
};

/// Int f dmu over the support (tensor Gauss-Legendre with the hyperbolic
/// weight y^{-3}, dyadically refined).  Converged per node-doubling to the
/// given relative tolerance, else throws QuadratureError with the achieved
/// estimate.
double integral_f(const TestFunction& f, const QuadratureSpec& quad,
                  double rel_tol = 1e-4);

/// f-bar = (Int f dmu) / vol(Picard manifold), vol = Catalan/3.
double average_value(const TestFunction& f, const QuadratureSpec& quad);

/// Quadrature of N(X,z) f(z) y^{-3} over the support box at the finest
/// refinement level.  Deterministic for a fixed QuadratureSpec and any
/// thread count (per-node values are reduced in a fixed order).
/// The per-node enumeration cost is estimated up front; nodes exceeding
/// the budget raise an error naming the node.
double local_average(double X, const TestFunction& f, const QuadratureSpec& quad,
                     int threads = 0, double node_budget = 5e8);

/// Successive refinement values I_1 .. I_L of the local average (for
/// self-convergence checks).
std::vector<double> local_average_levels(double X, const TestFunction& f,
                                         const QuadratureSpec& quad, int threads = 0,
                                         double node_budget = 5e8);

struct RemainderPoint {
    double X;
    double local_avg;
    double main_term;  // c_Gamma X^2 Int f dmu
    double remainder;
};

struct RemainderCurve {
    std::vector<RemainderPoint> points;
    double slope;            // least-squares slope of log|remainder| vs log X
    int zero_points_excluded;
};

RemainderCurve remainder_curve(const std::vector<double>& X_grid, const TestFunction& f,
                               const QuadratureSpec& quad, int threads = 0);

}  // namespace picard
