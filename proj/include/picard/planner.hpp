#pragma once

// Exact exponent calculus for the local-average remainder: interpolation
// of spectral-sum exponent pairs, the crossover between the two remainder
// terms, the balancing choices of T and eta, and the final exponent
//   max((6-4 theta)/(5-4 theta), 2q/(q+1)).
// All arithmetic is exact rational so the published endpoint values are
// reproduced identically, not to tolerance.

#include <string>
#include <vector>

#include "picard/rational.hpp"

namespace picard {

/// Hypothesis exponents: theta in [0, 1/4] (spectral-sum subconvexity),
/// q in [1, 3] (quantum variance).
struct HypothesisParams {
    Rational theta;
    Rational q;

    HypothesisParams(Rational theta_, Rational q_) : theta(theta_), q(q_) {
        if (theta < Rational(0) || theta > Rational(1, 4))
            throw std::domain_error("HypothesisParams: theta must lie in [0, 1/4]");
        if (q < Rational(1) || q > Rational(3))
            throw std::domain_error("HypothesisParams: q must lie in [1, 3]");
    }
};

struct StxPair {
    Rational alpha;
    Rational beta;
};

/// Interpolates the trivial pair (3,0) with (7/4 + theta, 1/4) so the
/// T-exponent drops to 2: returns (2, (1-4 theta)/(5-4 theta)).
StxPair interpolate_stx(const Rational& theta);

/// Remainder exponent of the local average:
/// max((6-4 theta)/(5-4 theta), 2q/(q+1)).
Rational remainder_exponent(const HypothesisParams& p);

/// The q above which the quantum-variance term dominates:
/// (3-2 theta)/(2-2 theta).
Rational crossover_q(const Rational& theta);

struct BalanceResult {
    Rational T_exponent;  // T = X^{2/(q+1)}
    double eta;           // e^{-2R/(q+1)}
};

/// Balancing choices for given hypotheses at smoothing scale R >= 1.
BalanceResult balance(const HypothesisParams& p, double R);

/// Exponent produced by an arbitrary spectral-sum pair (alpha < 3, beta):
/// interpolation against (3,0) to T-exponent 2 gives the X-exponent
/// 1 + beta/(3-alpha), compared with the quantum-variance term 2q/(q+1).
Rational exponent_from_pair(const StxPair& pair, const Rational& q);

/// Named scenario presets from the literature on S(T,X); "7/4+theta,1/4"
/// takes the theta argument, the others ignore it.
/// Names: "3,0", "2,1/4", "7/4+theta,1/4", "15/8,1/4", "2,0".
StxPair stx_preset(const std::string& name, const Rational& theta = Rational(0));
std::vector<std::string> stx_preset_names();

}  // namespace picard
