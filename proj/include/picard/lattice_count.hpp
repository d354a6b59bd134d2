#pragma once

// Counting Picard-group translates in hyperbolic balls.
//
//   count_exact    exact N(X,z) by coset enumeration over coprime bottom
//                  rows (c,d); see lattice_count.cpp for the algorithm
//   count_naive    small-scale exhaustive oracle, independent of the
//                  coset machinery
//   smoothed_kernel / count_smoothed
//                  the convolution-smoothed kernels k_pm and the sums
//                  N_pm(R,z) squeezing N between smooth majorants

#include <cstdint>
#include <string>
#include <vector>

#include "picard/geometry.hpp"

#include <json.hpp>

namespace picard {

/// Catalan's constant.
inline constexpr double kCatalan = 0.9159655941772190150546035149324;
/// c_Gamma = 3 pi / (2 C) = pi / (2 vol): the coefficient of e^{2R} in the
/// R-normalized count N(R,z) ~ c_Gamma e^{2R}.
inline const double kCGamma = 3.0 * M_PI / (2.0 * kCatalan);
/// Volume of the Picard manifold: C / 3.
inline const double kPicardVolume = kCatalan / 3.0;
/// Coefficient of X^2 in the cosh-normalized count #{cosh d <= X}:
/// mu(B_R)/vol ~ 2 pi X^2 / vol, i.e. 6 pi / C = 4 c_Gamma
/// (e^{2R} = (X + sqrt(X^2-1))^2 ~ 4 X^2).
inline const double kCountCoeff = 6.0 * M_PI / kCatalan;

struct CountResult {
    double X;
    PointH3 z;
    std::int64_t count;
    double main_term;  // kCountCoeff * X^2 = (2 pi / vol) X^2
    double remainder;  // count - main_term

    nlohmann::json to_json() const;
};

inline const char* count_csv_header() { return "X,count,main_term,remainder"; }
std::string to_csv_row(const CountResult& r);

/// Exact N(X,z) = #{gamma in PSL_2(Z[i]) : delta(z, gamma z) <= X}.
/// X >= 1 required.  threads = 0 picks the hardware concurrency; the
/// reduction is an exact integer sum, so the result is identical for any
/// thread count.
CountResult count_exact(double X, const PointH3& z, int threads = 0);

/// Exhaustive small-scale oracle: enumerates unimodular matrices inside a
/// rigorous Frobenius-type box, tests delta directly, halves the +-gamma
/// double count.  Refuses X above the cap.
std::int64_t count_naive(double X, const PointH3& z, double cap = 50.0);

/// Counter that amortizes the coprime-row enumeration across many base
/// points inside a box (quadrature grids): the candidate (c,d) list with
/// solved base rows is a superset valid for every point of the box, and
/// count() applies the exact per-point window and disc tests.
class BoxCounter {
  public:
    BoxCounter(double X, const Box3& box);
    /// N(X,z) for z inside the construction box; identical to count_exact.
    std::int64_t count(const PointH3& z) const;
    double X() const { return X_; }
    std::size_t candidates() const { return pairs_.size(); }

  private:
    struct Row {
        std::int64_t cre, cim, dre, dim, are, aim, bre, bim;
    };
    double X_;
    Box3 box_;
    std::vector<Row> pairs_;
};

enum class Sign { plus, minus };

/// Parameters (R, eta, sign) of the smoothed kernels k_pm.
struct SmoothedKernelSpec {
    double R;
    double eta;
    Sign sign;

    SmoothedKernelSpec(double R_, double eta_, Sign sign_) : R(R_), eta(eta_), sign(sign_) {
        if (!(R >= 1.0)) throw std::domain_error("SmoothedKernelSpec: R must be >= 1");
        if (!(eta > 0.0 && eta < 1.0))
            throw std::domain_error("SmoothedKernelSpec: eta must lie in (0,1)");
    }

    /// Radius of the large ball, R +- eta.
    double rho() const { return sign == Sign::plus ? R + eta : R - eta; }
    /// Kernel is exactly 1 for d <= rho - eta (empty for rho < eta).
    double inner_radius() const { return rho() - eta; }
    /// Kernel is exactly 0 for d >= rho + eta.
    double outer_radius() const { return rho() + eta; }
};

/// k_pm as a function of t = cosh d(z,w): the intersection volume
/// mu(B_rho(z) cap B_eta(w)) / mu(B_eta).  Exactly 1 inside the inner
/// radius, exactly 0 beyond the outer radius, monotone nonincreasing.
double smoothed_kernel(double t, const SmoothedKernelSpec& spec);

/// Precomputed kernel on a grid in distance with monotone interpolation,
/// for the sum over the group.  Values clamped to [0,1], support cutoffs
/// exact.
class SmoothedKernel {
  public:
    explicit SmoothedKernel(const SmoothedKernelSpec& spec, int grid_size = 2048);
    double operator()(double t) const;
    const SmoothedKernelSpec& spec() const { return spec_; }

  private:
    SmoothedKernelSpec spec_;
    double d_lo_, d_hi_, step_;
    std::vector<double> values_;
};

/// N_pm(R,z) = sum over gamma of k_pm(delta(z, gamma z)); the sum
/// truncates exactly at the kernel support.  Satisfies
/// N_minus <= N(cosh R, z) <= N_plus.
double count_smoothed(const SmoothedKernelSpec& spec, const PointH3& z);

namespace detail {

/// Lens volume mu(B_ra(z1) cap B_rb(z2)) at center distance d, by adaptive
/// Simpson over geodesic cross-sections.
double ball_intersection_volume(double d, double ra, double rb);

}  // namespace detail

}  // namespace picard
