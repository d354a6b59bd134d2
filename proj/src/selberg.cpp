#include "picard/selberg.hpp"

#include <cmath>

#include "picard/quadrature.hpp"

namespace picard {

namespace {

using cplx = std::complex<double>;
constexpr cplx kI{0.0, 1.0};

// sinh(R w)/w, with a series branch when the argument underflows the
// quotient: sinh(Rw)/w = R (1 + (Rw)^2/6 + (Rw)^4/120 + (Rw)^6/5040 + ...)
cplx sinhc(double R, cplx w) {
    cplx rw = R * w;
    if (std::abs(w) < 1e-4 || std::abs(rw) < 1e-3) {
        cplx rw2 = rw * rw;
        return R * (1.0 + rw2 / 6.0 * (1.0 + rw2 / 20.0 * (1.0 + rw2 / 42.0)));
    }
    return std::sinh(rw) / w;
}

}  // namespace

namespace detail {

cplx h_ball_quotient(double R, cplx r) {
    const cplx wp = 1.0 + kI * r;
    const cplx wm = 1.0 - kI * r;
    return 2.0 * M_PI * (sinhc(R, wp) - sinhc(R, wm)) / (kI * r);
}

// Even Taylor expansion around r = 0: with F(w) = sinh(Rw)/w,
//   h_R(r) = 4 pi sum_{n>=0} F^{(2n+1)}(1) / (2n+1)! * (ir)^{2n},
// four terms kept; F^{(m)}(1) summed from the entire series of F.
cplx h_ball_series0(double R, cplx r) {
    auto fderiv = [R](int m) {
        double sum = 0.0;
        double rpow = R;  // R^{2k+1}
        for (int k = 0;; ++k) {
            if (2 * k >= m) {
                // R^{2k+1} * (2k)(2k-1)...(2k-m+1) / (2k+1)!
                double term = rpow;
                for (int j = 0; j < m; ++j) term *= static_cast<double>(2 * k - j);
                double fact = 1.0;
                for (int j = 2; j <= 2 * k + 1; ++j) fact *= j;
                term /= fact;
                sum += term;
                if (k > m && std::fabs(term) < 1e-18 * (std::fabs(sum) + 1e-300)) break;
            }
            rpow *= R * R;
            if (k > 200) break;
        }
        return sum;
    };
    const cplx eps2 = -r * r;  // (ir)^2
    cplx acc = 0.0;
    cplx p = 1.0;
    double fact = 1.0;
    for (int n = 0; n < 4; ++n) {
        const int m = 2 * n + 1;
        if (n > 0) fact *= static_cast<double>(m - 1) * m;
        acc += fderiv(m) / fact * p;
        p *= eps2;
    }
    return 4.0 * M_PI * acc;
}

}  // namespace detail

std::complex<double> h_ball(double R, std::complex<double> r) {
    if (!(R > 0.0)) throw std::domain_error("h_ball: R must be positive");
    if (!(std::fabs(r.imag()) < 2.0))
        throw std::domain_error("h_ball: spectral parameter outside the strip |Im r| < 2");
    if (std::abs(r) < 1e-4) return detail::h_ball_series0(R, r);
    return detail::h_ball_quotient(R, r);
}

std::complex<double> h_pm(const SmoothedKernelSpec& spec, std::complex<double> r) {
    return h_ball(spec.rho(), r) * h_ball(spec.eta, r) / ball_volume(spec.eta);
}

double selberg_numeric(const std::function<double(double)>& k, double r, double u_max,
                       double abs_tol) {
    if (!(u_max > 0.0)) throw std::domain_error("selberg_numeric: u_max must be positive");
    auto integrand = [&](double u) {
        const double phase = (r == 0.0) ? u : std::sin(r * u) / r;
        return 4.0 * M_PI * k(std::cosh(u)) * phase * std::sinh(u);
    };
    // panel width resolves the oscillation: >= 20 nodes per sin period
    const double period = 2.0 * M_PI / std::max(std::fabs(r), 1.0);
    const int n_panels =
        std::max(8, static_cast<int>(std::ceil(u_max / (period / 10.0))));
    const double w = u_max / n_panels;
    const double tol = abs_tol / n_panels;
    double total = 0.0;
    for (int i = 0; i < n_panels; ++i)
        total += adaptive_simpson(integrand, i * w, (i + 1) * w, tol);
    return total;
}

namespace {

// e^{i rho r} coefficient of h_rho on real r:
// h_rho(r) = P(rho,r) e^{i rho r} + conj(P(rho,r)) e^{-i rho r}.
cplx phase_coefficient(double rho, double r) {
    return -2.0 * M_PI * (r * std::sinh(rho) + kI * std::cosh(rho)) / (r * (1.0 + r * r));
}

cplx phase_coefficient_drv(double rho, double r) {
    // d/dr of the above: -2 pi [ sinh(rho)/ (1+r^2) + i cosh(rho)/(r(1+r^2)) ]'
    const double r2 = r * r;
    const double d_inv1 = -2.0 * r / ((1.0 + r2) * (1.0 + r2));
    const double d_inv2 = -(1.0 + 3.0 * r2) / (r2 * (1.0 + r2) * (1.0 + r2));
    return -2.0 * M_PI * (std::sinh(rho) * d_inv1 + kI * std::cosh(rho) * d_inv2);
}

// real form of h_eta on real r (Selberg transform of the small ball)
double h_real(double rho, double r) {
    if (std::fabs(r) < 1e-4) return detail::h_ball_series0(rho, r).real();
    return 4.0 * M_PI *
           (std::cosh(rho) * std::sin(rho * r) - r * std::sinh(rho) * std::cos(rho * r)) /
           (r * (1.0 + r * r));
}

double h_real_drv(double rho, double r) {
    const double N = std::cosh(rho) * std::sin(rho * r) - r * std::sinh(rho) * std::cos(rho * r);
    const double Np = rho * std::cosh(rho) * std::cos(rho * r) -
                      std::sinh(rho) * std::cos(rho * r) +
                      r * rho * std::sinh(rho) * std::sin(rho * r);
    const double D = r * (1.0 + r * r);
    const double Dp = 1.0 + 3.0 * r * r;
    return 4.0 * M_PI * (Np * D - N * Dp) / (D * D);
}

}  // namespace

ABCoefficients ab_decomposition(const SmoothedKernelSpec& spec, double r) {
    if (!(r >= 1.0)) throw std::domain_error("ab_decomposition: r must be >= 1");
    const double rho = spec.rho();
    const double scale = h_real(spec.eta, r) / ball_volume(spec.eta);
    const cplx P = phase_coefficient(rho, r);
    return {P * scale, std::conj(P) * scale};
}

std::complex<double> ab_A_derivative(const SmoothedKernelSpec& spec, double r) {
    if (!(r >= 1.0)) throw std::domain_error("ab_A_derivative: r must be >= 1");
    const double rho = spec.rho();
    const double mu = ball_volume(spec.eta);
    return phase_coefficient_drv(rho, r) * (h_real(spec.eta, r) / mu) +
           phase_coefficient(rho, r) * (h_real_drv(spec.eta, r) / mu);
}

BoundReport bound_check_hpm(const SmoothedKernelSpec& spec,
                            const std::vector<double>& r_grid, double flag_constant) {
    double max_ratio = 0.0;
    const double denom = spec.R * std::exp(spec.R);
    for (double r : r_grid) {
        const double ar = std::fabs(r);
        const double env = denom / ((1.0 + ar) * (1.0 + ar) * (1.0 + spec.eta * ar) *
                                    (1.0 + spec.eta * ar));
        const double ratio = std::abs(h_pm(spec, r)) / env;
        max_ratio = std::max(max_ratio, ratio);
    }
    return {spec.R,     spec.eta,        spec.sign,
            max_ratio,  r_grid.size(),   max_ratio > flag_constant};
}

nlohmann::json BoundReport::to_json() const {
    return nlohmann::json{
        {"spec", {{"R", R}, {"eta", eta}, {"sign", sign == Sign::plus ? "+" : "-"}}},
        {"max_ratio", max_ratio},
        {"grid_size", grid_size},
        {"flagged", flagged}};
}

}  // namespace picard
