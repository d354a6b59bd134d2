#pragma once

// Shared 1-D quadrature: adaptive Simpson with an error budget, and
// Gauss-Legendre node tables for the tensor-product volume quadrature.

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace picard {

class QuadratureError : public std::runtime_error {
  public:
    QuadratureError(const std::string& what, double value, double achieved)
        : std::runtime_error(what + " (value " + std::to_string(value) +
                             ", achieved tolerance " + std::to_string(achieved) + ")"),
          value_(value), achieved_(achieved) {}
    double value() const { return value_; }
    double achieved_tolerance() const { return achieved_; }

  private:
    double value_;
    double achieved_;
};

namespace detail {

template <class F>
double simpson_rec(const F& f, double a, double m, double b, double fa, double fm,
                   double fb, double whole, double tol, int depth, double& unmet) {
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double h6 = (b - a) / 12.0;
    double left = h6 * (fa + 4.0 * flm + fm);
    double right = h6 * (fm + 4.0 * frm + fb);
    double err = (left + right - whole) / 15.0;
    if (std::fabs(err) <= tol || depth <= 0) {
        if (depth <= 0 && std::fabs(err) > tol) unmet += std::fabs(err) - tol;
        return left + right + err;
    }
    return simpson_rec(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1, unmet) +
           simpson_rec(f, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1, unmet);
}

}  // namespace detail

/// Adaptive Simpson on [a,b] to absolute tolerance abs_tol.  Throws
/// QuadratureError with the achieved tolerance when the recursion budget
/// is exhausted before the requested accuracy is met.
template <class F>
double adaptive_simpson(const F& f, double a, double b, double abs_tol,
                        int max_depth = 48) {
    if (a == b) return 0.0;
    double m = 0.5 * (a + b);
    double fa = f(a), fm = f(m), fb = f(b);
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    double unmet = 0.0;
    double v = detail::simpson_rec(f, a, m, b, fa, fm, fb, whole, abs_tol, max_depth, unmet);
    // leaves that hit the depth cap accumulate their residual error; only a
    // residual that actually blows the budget is a failure
    if (unmet > abs_tol)
        throw QuadratureError("adaptive_simpson: tolerance not met within depth budget",
                              v, abs_tol + unmet);
    return v;
}

/// Gauss-Legendre nodes and weights on [-1, 1] (n >= 1), Newton iteration
/// on the Legendre recurrence.  Results are cached per n.
const std::vector<std::pair<double, double>>& gauss_legendre(int n);

/// Fixed-tree pairwise sum; deterministic for a given input order.
double pairwise_sum(const std::vector<double>& v);

}  // namespace picard
