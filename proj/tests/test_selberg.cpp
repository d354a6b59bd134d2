#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "picard/selberg.hpp"

using namespace picard;
using cplx = std::complex<double>;

namespace {
double rel_err(double a, double b) {
    return std::fabs(a - b) / std::max({std::fabs(a), std::fabs(b), 1e-300});
}
[[maybe_unused]] double rel_err(cplx a, cplx b) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}
}  // namespace

TEST_CASE("h_ball: special values") {
    // h_R(0) = 4 pi (R cosh R - sinh R); at R = 1 this is 4 pi / e
    CHECK(h_ball(1.0, 0.0).real() == doctest::Approx(4.0 * M_PI / M_E).epsilon(1e-12));
    CHECK(h_ball(1.0, 0.0).real() == doctest::Approx(4.6229).epsilon(1e-4));
    CHECK(h_ball(2.0, 0.0).real() ==
          doctest::Approx(4.0 * M_PI * (2.0 * std::cosh(2.0) - std::sinh(2.0))).epsilon(1e-12));
    // h_R(+-i) = mu(B_R)
    CHECK(h_ball(1.0, cplx(0, 1)).real() == doctest::Approx(ball_volume(1.0)).epsilon(1e-12));
    CHECK(h_ball(1.0, cplx(0, -1)).real() == doctest::Approx(ball_volume(1.0)).epsilon(1e-12));
    CHECK(std::fabs(h_ball(1.0, cplx(0, 1)).imag()) < 1e-12);
    CHECK_THROWS_AS(h_ball(1.0, cplx(0.0, 2.5)), std::domain_error);
}

TEST_CASE("h_ball: the real trigonometric form") {
    // 4 pi (cosh R sin(R r) - r sinh R cos(R r)) / (r (1 + r^2))
    auto real_form = [](double R, double r) {
        return 4.0 * M_PI *
               (std::cosh(R) * std::sin(R * r) - r * std::sinh(R) * std::cos(R * r)) /
               (r * (1.0 + r * r));
    };
    CHECK(h_ball(2.0, 1.5).real() == doctest::Approx(real_form(2.0, 1.5)).epsilon(1e-10));
    std::mt19937_64 rng(61);
    std::uniform_real_distribution<double> uR(0.1, 6.0), ur(0.01, 50.0);
    for (int i = 0; i < 500; ++i) {
        const double R = uR(rng), r = ur(rng);
        const cplx h = h_ball(R, r);
        CHECK(rel_err(h.real(), real_form(R, r)) <= 1e-9);
        CHECK(std::fabs(h.imag()) <= 1e-12 * (1.0 + std::fabs(h.real())));
    }
}

TEST_CASE("h_ball: even, real on real input, dominated by r = 0") {
    std::mt19937_64 rng(67);
    std::uniform_real_distribution<double> uR(0.2, 5.0), ur(-40.0, 40.0), ui(-1.9, 1.9);
    for (int i = 0; i < 400; ++i) {
        const double R = uR(rng);
        const cplx r(ur(rng), ui(rng));
        CHECK(std::abs(h_ball(R, r) - h_ball(R, -r)) <=
              1e-12 * (1.0 + std::abs(h_ball(R, r))));
    }
    for (int i = 0; i < 400; ++i) {
        const double R = uR(rng), r = ur(rng);
        const cplx h = h_ball(R, r);
        CHECK(std::fabs(h.imag()) <= 1e-12 * (1.0 + std::fabs(h.real())));
        CHECK(std::fabs(h.real()) <= h_ball(R, 0.0).real() + 1e-9);
        CHECK(h_ball(R, 0.0).real() <= ball_volume(R) + 1e-9);
    }
}

TEST_CASE("h_ball: removable singularities are seamless") {
    for (double R : {0.5, 1.0, 3.0}) {
        // r -> 0
        const double h0 = h_ball(R, 0.0).real();
        CHECK(rel_err(h_ball(R, 1e-6).real(), h0) <= 1e-8);
        CHECK(rel_err(h_ball(R, cplx(0.0, 1e-6)).real(), h0) <= 1e-8);
        // r -> +-i: h'(i) != 0, so one-sided offsets differ from h(i) at the
        // true Taylor order ~1e-6; the symmetric average cancels the linear
        // term and isolates the evaluation error near the singular point
        const double hi = h_ball(R, cplx(0, 1)).real();
        CHECK(rel_err(h_ball(R, cplx(0.0, 1.0 - 1e-6)).real(), hi) <= 1e-5);
        CHECK(rel_err(h_ball(R, cplx(1e-7, 1.0)).real(), hi) <= 1e-5);
        const double sym = 0.5 * (h_ball(R, cplx(0.0, 1.0 - 1e-6)).real() +
                                  h_ball(R, cplx(0.0, 1.0 + 1e-6)).real());
        CHECK(rel_err(sym, hi) <= 1e-8);
        // branch overlap at the series threshold
        CHECK(rel_err(detail::h_ball_series0(R, 0.99e-4).real(),
                      detail::h_ball_quotient(R, 1.01e-4).real()) <= 1e-9);
    }
}

TEST_CASE("h_pm: composition and the value at r = i") {
    const SmoothedKernelSpec spec(2.0, 0.5, Sign::plus);
    // at r = i the eta factor equals mu(B_eta), so h_pm(i) = h_{R+-eta}(i)
    CHECK(rel_err(h_pm(spec, cplx(0, 1)).real(), h_ball(spec.rho(), cplx(0, 1)).real()) <=
          1e-12);
    // r = 0 composition
    const double expect0 =
        h_ball(2.5, 0.0).real() * h_ball(0.5, 0.0).real() / ball_volume(0.5);
    CHECK(rel_err(h_pm(spec, 0.0).real(), expect0) <= 1e-12);
    // |h_pm(5)| <= h_pm(0)
    const SmoothedKernelSpec spec2(3.0, 0.2, Sign::minus);
    CHECK(std::abs(h_pm(spec2, 5.0)) <= h_pm(spec2, 0.0).real() + 1e-9);
}

TEST_CASE("selberg_numeric: indicator kernel reproduces the closed form") {
    auto indicator = [](double t) { return t <= std::cosh(1.0) ? 1.0 : 0.0; };
    const double numeric = selberg_numeric(indicator, 0.5, 1.0 + 1e-6);
    CHECK(rel_err(numeric, h_ball(1.0, 0.5).real()) <= 1e-6);
    const double at0 = selberg_numeric(indicator, 0.0, 1.0 + 1e-6);
    CHECK(rel_err(at0, h_ball(1.0, 0.0).real()) <= 1e-6);
    auto zero = [](double) { return 0.0; };
    CHECK(selberg_numeric(zero, 1.0, 2.0) == 0.0);
}

TEST_CASE("convolution theorem: numeric transform of k_pm equals h_pm") {
    const SmoothedKernelSpec spec(1.5, 0.3, Sign::plus);
    const SmoothedKernel kern(spec);
    auto k = [&](double t) { return kern(t); };
    const double u_max = spec.outer_radius() + 1e-9;
    const double numeric = selberg_numeric(k, 2.0, u_max, 1e-8);
    const double closed = h_pm(spec, 2.0).real();
    CHECK(std::fabs(numeric - closed) <=
          1e-4 * std::max(1.0, std::fabs(closed)));
    // two more (R, eta, r) triples; the acceptance suite sweeps ten
    const SmoothedKernelSpec spec2(2.2, 0.6, Sign::minus);
    const SmoothedKernel kern2(spec2);
    CHECK(std::fabs(selberg_numeric([&](double t) { return kern2(t); }, 4.5,
                                    spec2.outer_radius() + 1e-9) -
                    h_pm(spec2, 4.5).real()) <= 1e-4);
    const SmoothedKernelSpec spec3(1.0, 0.15, Sign::plus);
    const SmoothedKernel kern3(spec3);
    CHECK(std::fabs(selberg_numeric([&](double t) { return kern3(t); }, 0.0,
                                    spec3.outer_radius() + 1e-9) -
                    h_pm(spec3, 0.0).real()) <= 1e-4);
}

TEST_CASE("ab_decomposition: reconstruction identity") {
    std::mt19937_64 rng(71);
    std::uniform_real_distribution<double> uR(1.0, 5.0), ue(0.05, 0.95), ur(1.0, 1000.0);
    for (int i = 0; i < 300; ++i) {
        const SmoothedKernelSpec spec(uR(rng), ue(rng),
                                      i % 2 == 0 ? Sign::plus : Sign::minus);
        const double r = ur(rng);
        const auto [A, B] = ab_decomposition(spec, r);
        const double rho = spec.rho();
        const cplx recon = A * std::polar(1.0, r * rho) + B * std::polar(1.0, -r * rho);
        const double href = h_pm(spec, r).real();
        const double scale = std::max(std::fabs(href), std::abs(A) + std::abs(B));
        CHECK(std::abs(recon - href) <= 1e-10 * std::max(scale, 1e-30));
        CHECK(std::fabs(recon.imag()) <= 1e-12 * std::max(scale, 1e-30));
    }
    CHECK_THROWS_AS(ab_decomposition(SmoothedKernelSpec(2, .2, Sign::plus), 0.5),
                    std::domain_error);
}

TEST_CASE("ab_decomposition: envelope bounds with a generous constant") {
    // |A|, |B| <= C e^R r^{-2} min(1, (eta r)^{-2})
    for (double R : {1.0, 3.0, 5.0})
        for (double eta : {0.05, 0.3, 0.9}) {
            const SmoothedKernelSpec spec(R, eta, Sign::plus);
            for (int k = 0; k <= 60; ++k) {
                const double r = std::pow(10.0, 3.0 * k / 60.0);
                const auto [A, B] = ab_decomposition(spec, r);
                const double env = std::exp(R) / (r * r) *
                                   std::min(1.0, 1.0 / (eta * r * eta * r));
                CHECK(std::abs(A) <= 100.0 * env);
                CHECK(std::abs(B) <= 100.0 * env);
            }
        }
}

TEST_CASE("ab_A_derivative: matches finite differences and its envelope") {
    const SmoothedKernelSpec spec(5.0, 0.1, Sign::plus);
    for (int k = 0; k <= 30; ++k) {
        const double r = std::pow(10.0, 3.0 * k / 30.0);
        const double h = std::min(1e-6 * std::max(1.0, r), 0.49 * (r - 1.0) + 1e-12);
        const cplx an = ab_A_derivative(spec, r);
        if (h > 1e-9) {
            const cplx fd =
                (ab_decomposition(spec, r + h).A - ab_decomposition(spec, r - h).A) /
                (2.0 * h);
            CHECK(std::abs(fd - an) <= 1e-4 * std::max(std::abs(an), 1e-12));
        }
        // derivative envelope e^R r^{-3} min(1, (eta r)^{-1})
        const double env = std::exp(spec.R) / (r * r * r) *
                           std::min(1.0, 1.0 / (spec.eta * r));
        CHECK(std::abs(an) <= 100.0 * env);
    }
}

TEST_CASE("bound_check_hpm: envelope ratios and evenness") {
    std::vector<double> grid;
    for (int k = 0; k <= 199; ++k) grid.push_back(std::pow(10.0, 3.0 * k / 199.0));
    const SmoothedKernelSpec spec(3.0, 0.2, Sign::plus);
    const auto rep = bound_check_hpm(spec, grid);
    CHECK(rep.max_ratio > 0.0);
    CHECK_FALSE(rep.flagged);
    CHECK(rep.grid_size == grid.size());
    // evenness on the grid
    for (double r : {1.0, 7.7, 123.0})
        CHECK(std::abs(h_pm(spec, r) - h_pm(spec, -r)) <= 1e-14 * std::abs(h_pm(spec, r)));
    // |h_pm(0)| <= R e^R x constant
    const SmoothedKernelSpec tight(1.0, 0.9, Sign::plus);
    CHECK(std::abs(h_pm(tight, 0.0)) <= 100.0 * tight.R * std::exp(tight.R));
    const auto js = rep.to_json();
    CHECK(js["flagged"] == false);
    CHECK(js["grid_size"] == grid.size());
}
