#pragma once

// Selberg transforms on H^3: the closed form h_R for the ball indicator,
// the smoothed transforms h_pm = h_{R+-eta} h_eta / mu(B_eta), a numeric
// transform for arbitrary compactly supported kernels, the oscillatory
// A/B coefficient decomposition on r >= 1, and envelope-ratio reports
// for the decay bound of h_pm.

#include <complex>
#include <functional>
#include <vector>

#include "picard/lattice_count.hpp"

#include <json.hpp>

namespace picard {

/// Selberg transform of the ball indicator of radius R:
///   h_R(r) = 2 pi sinh(R(1+ir)) / (ir(1+ir)) - 2 pi sinh(R(1-ir)) / (ir(1-ir)),
/// with the removable singularities at r in {0, +-i} filled in by series:
///   h_R(0) = 4 pi (R cosh R - sinh R),  h_R(+-i) = pi (sinh 2R - 2R).
/// Defined here for |Im r| < 2; outside the strip -> domain error.
std::complex<double> h_ball(double R, std::complex<double> r);

/// h_pm(r) = h_{R +- eta}(r) h_eta(r) / mu(B_eta).
std::complex<double> h_pm(const SmoothedKernelSpec& spec, std::complex<double> r);

/// Numeric Selberg transform h(r) = (4 pi / r) Int_0^inf k(cosh u) sin(ru) sinh u du
/// for a kernel supported in u <= u_max; r = 0 is the limiting integrand
/// 4 pi u sinh(u) k(cosh u).  Adaptive Simpson, panels sized to resolve
/// the sin(ru) oscillation (>= 20 nodes per period).
double selberg_numeric(const std::function<double(double)>& k, double r, double u_max,
                       double abs_tol = 1e-8);

struct ABCoefficients {
    std::complex<double> A;
    std::complex<double> B;
};

/// Oscillatory decomposition h_pm(r) = A e^{ir(R+-eta)} + B e^{-ir(R+-eta)}
/// for real r >= 1, by expanding both sinh factors into exponentials and
/// collecting phases:  A = P(R+-eta, r) h_eta(r) / mu(B_eta) with
/// P(rho, r) = -2 pi (r sinh rho + i cosh rho) / (r (1+r^2)), and B the
/// conjugate collection.
ABCoefficients ab_decomposition(const SmoothedKernelSpec& spec, double r);

/// d/dr of the A coefficient (closed form), used by the Abel-summation
/// evaluation of spectral sums.
std::complex<double> ab_A_derivative(const SmoothedKernelSpec& spec, double r);

struct BoundReport {
    double R;
    double eta;
    Sign sign;
    double max_ratio;   // max over grid of |h_pm| (1+|r|)^2 (1+eta|r|)^2 / (R e^R)
    std::size_t grid_size;
    bool flagged;       // max_ratio exceeded the configured constant

    nlohmann::json to_json() const;
};

/// Envelope-ratio report for |h_pm(r)| <= C R e^R / ((1+|r|)^2 (1+eta|r|)^2).
BoundReport bound_check_hpm(const SmoothedKernelSpec& spec,
                            const std::vector<double>& r_grid,
                            double flag_constant = 100.0);

namespace detail {
// both evaluation branches, exposed for the overlap agreement tests
std::complex<double> h_ball_quotient(double R, std::complex<double> r);
std::complex<double> h_ball_series0(double R, std::complex<double> r);
}  // namespace detail

}  // namespace picard
