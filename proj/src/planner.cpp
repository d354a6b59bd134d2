#include "picard/planner.hpp"

#include <cmath>

namespace picard {

Rational Rational::parse(const std::string& s) {
    const auto slash = s.find('/');
    try {
        std::size_t pos = 0;
        if (slash == std::string::npos) {
            const std::int64_t n = std::stoll(s, &pos);
            if (pos != s.size()) throw std::invalid_argument("trailing characters");
            return Rational(n);
        }
        const std::int64_t n = std::stoll(s.substr(0, slash), &pos);
        if (pos != slash) throw std::invalid_argument("trailing characters");
        const std::int64_t d = std::stoll(s.substr(slash + 1), &pos);
        if (pos != s.size() - slash - 1) throw std::invalid_argument("trailing characters");
        return Rational(n, d);
    } catch (const std::domain_error&) {
        throw;
    } catch (const std::exception&) {
        throw std::invalid_argument("Rational: cannot parse \"" + s + "\"");
    }
}

StxPair interpolate_stx(const Rational& theta) {
    if (theta < Rational(0) || theta > Rational(1, 4))
        throw std::domain_error("interpolate_stx: theta must lie in [0, 1/4]");
    const Rational four_theta = Rational(4) * theta;
    return {Rational(2), (Rational(1) - four_theta) / (Rational(5) - four_theta)};
}

Rational remainder_exponent(const HypothesisParams& p) {
    const Rational four_theta = Rational(4) * p.theta;
    const Rational stx_term = (Rational(6) - four_theta) / (Rational(5) - four_theta);
    const Rational qv_term = (Rational(2) * p.q) / (p.q + Rational(1));
    return max(stx_term, qv_term);
}

Rational crossover_q(const Rational& theta) {
    if (theta < Rational(0) || theta > Rational(1, 4))
        throw std::domain_error("crossover_q: theta must lie in [0, 1/4]");
    const Rational two_theta = Rational(2) * theta;
    return (Rational(3) - two_theta) / (Rational(2) - two_theta);
}

BalanceResult balance(const HypothesisParams& p, double R) {
    if (!(R >= 1.0)) throw std::domain_error("balance: R must be >= 1");
    const Rational t_exp = Rational(2) / (p.q + Rational(1));
    const double eta = std::exp(-2.0 * R / (p.q.value() + 1.0));
    return {t_exp, eta};
}

Rational exponent_from_pair(const StxPair& pair, const Rational& q) {
    if (q < Rational(1) || q > Rational(3))
        throw std::domain_error("exponent_from_pair: q must lie in [1, 3]");
    if (!(pair.alpha < Rational(3)))
        throw std::domain_error("exponent_from_pair: alpha must be < 3 to interpolate");
    const Rational x_exp = Rational(1) + pair.beta / (Rational(3) - pair.alpha);
    const Rational qv_term = (Rational(2) * q) / (q + Rational(1));
    return max(x_exp, qv_term);
}

StxPair stx_preset(const std::string& name, const Rational& theta) {
    if (name == "3,0") return {Rational(3), Rational(0)};
    if (name == "2,1/4") return {Rational(2), Rational(1, 4)};
    if (name == "7/4+theta,1/4") return {Rational(7, 4) + theta, Rational(1, 4)};
    if (name == "15/8,1/4") return {Rational(15, 8), Rational(1, 4)};
    if (name == "2,0") return {Rational(2), Rational(0)};
    throw std::invalid_argument("stx_preset: unknown preset \"" + name + "\"");
}

std::vector<std::string> stx_preset_names() {
    return {"3,0", "2,1/4", "7/4+theta,1/4", "15/8,1/4", "2,0"};
}

}  // namespace picard
