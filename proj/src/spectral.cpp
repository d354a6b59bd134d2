#include "picard/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>

#include "picard/quadrature.hpp"
#include "picard/selberg.hpp"

namespace picard {

namespace {

void validate_entries(const std::vector<double>& r) {
    double prev = 1.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (!(r[i] > 1.0))
            throw std::invalid_argument(
                "EigenvalueTable: spectral parameters must exceed 1 (no small "
                "eigenvalues), got " + std::to_string(r[i]));
        if (r[i] < prev)
            throw std::invalid_argument("EigenvalueTable: entries must be ascending");
        prev = r[i];
    }
}

}  // namespace

EigenvalueTable::EigenvalueTable(std::vector<double> entries, std::string source)
    : r_(std::move(entries)), source_(std::move(source)) {
    validate_entries(r_);
}

EigenvalueTable EigenvalueTable::ingest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("EigenvalueTable: cannot open " + path.string());
    std::vector<double> r;
    std::string line;
    int lineno = 0;
    bool saw_header = false;
    double prev = 1.0;
    while (std::getline(in, line)) {
        ++lineno;
        // trim whitespace / CR
        auto b = line.find_first_not_of(" \t\r\n");
        auto e = line.find_last_not_of(" \t\r\n");
        if (b == std::string::npos) continue;
        std::string tok = line.substr(b, e - b + 1);
        if (!saw_header) {
            if (tok != "r") throw TableFormatError(lineno, "expected header \"r\"");
            saw_header = true;
            continue;
        }
        std::size_t pos = 0;
        double v;
        try {
            v = std::stod(tok, &pos);
        } catch (const std::exception&) {
            throw TableFormatError(lineno, "not a number: \"" + tok + "\"");
        }
        if (pos != tok.size())
            throw TableFormatError(lineno, "trailing characters after value: \"" + tok + "\"");
        if (!(v > 1.0))
            throw TableFormatError(lineno,
                                   "spectral parameter must be > 1 (no small eigenvalues)");
        if (v < prev) throw TableFormatError(lineno, "entries must be ascending");
        prev = v;
        r.push_back(v);
    }
    EigenvalueTable t;
    t.r_ = std::move(r);
    t.source_ = path.string();
    return t;
}

EigenvalueTable EigenvalueTable::synthetic_weyl(std::size_t n, std::string source) {
    std::vector<double> r(n);
    const double c = 3.0 * std::pow(M_PI, 4);
    for (std::size_t j = 1; j <= n; ++j)
        r[j - 1] = std::cbrt(c * static_cast<double>(j));
    EigenvalueTable t;
    t.r_ = std::move(r);
    t.source_ = std::move(source);
    return t;
}

std::size_t EigenvalueTable::count_below(double T) const {
    return static_cast<std::size_t>(
        std::upper_bound(r_.begin(), r_.end(), T) - r_.begin());
}

void EigenvalueTable::write_csv(const std::filesystem::path& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("EigenvalueTable: cannot write " + path.string());
    out << "r\n";
    char buf[64];
    for (double v : r_) {
        std::snprintf(buf, sizeof(buf), "%.17g\n", v);
        out << buf;
    }
}

double weyl_ratio(const EigenvalueTable& table, double T) {
    if (!(T > 1.0)) throw std::domain_error("weyl_ratio: T must exceed 1");
    const double predicted = T * T * T / (3.0 * std::pow(M_PI, 4));
    return static_cast<double>(table.count_below(T)) / predicted;
}

std::complex<double> spectral_sum(const EigenvalueTable& table, double T, double X) {
    if (!(T > 0.0)) throw std::domain_error("spectral_sum: T must be positive");
    if (!(X > 1.0)) throw std::domain_error("spectral_sum: X must exceed 1");
    const double lx = std::log(X);
    const std::size_t n = table.count_below(T);
    const auto& r = table.entries();
    std::vector<double> re(n), im(n);
    for (std::size_t j = 0; j < n; ++j) {
        re[j] = std::cos(r[j] * lx);
        im[j] = std::sin(r[j] * lx);
    }
    return {pairwise_sum(re), pairwise_sum(im)};
}

EnvelopeReport stx_envelope(const EigenvalueTable& table, double alpha, double beta,
                            const std::vector<std::pair<double, double>>& grid) {
    EnvelopeReport rep{alpha, beta, 0.0, {}, table.max_r()};
    rep.points.reserve(grid.size());
    for (auto [T, X] : grid) {
        const double s = std::abs(spectral_sum(table, T, X));
        const double env = std::pow(T, alpha) * std::pow(X, beta) + T * T;
        const double ratio = s / env;
        rep.points.push_back({T, X, ratio});
        rep.max_ratio = std::max(rep.max_ratio, ratio);
    }
    return rep;
}

nlohmann::json EnvelopeReport::to_json() const {
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& p : points) pts.push_back({{"T", p.T}, {"X", p.X}, {"ratio", p.ratio}});
    return nlohmann::json{{"alpha", alpha},
                          {"beta", beta},
                          {"max_ratio", max_ratio},
                          {"points", pts},
                          {"truncated_at", table_max_r},
                          {"truncation_note",
                           "S(T,X) is summed over a finite table; contributions from "
                           "r_j above truncated_at are absent"}};
}

SumHResult sum_h_direct(const EigenvalueTable& table, const SmoothedKernelSpec& spec) {
    const auto& r = table.entries();
    std::vector<double> terms(r.size());
    for (std::size_t j = 0; j < r.size(); ++j)
        terms[j] = h_pm(spec, r[j]).real();
    const double sum = pairwise_sum(terms);
    // tail: envelope R e^R / ((1+u)^2 (1+eta u)^2) against density u^2/pi^4,
    // bounded by the (eta u)^{-2} regime integral R e^R / (pi^4 eta^2 u^2)
    const double t0 = std::max(table.max_r(), 1.0);
    const double tail =
        spec.R * std::exp(spec.R) / (std::pow(M_PI, 4) * spec.eta * spec.eta * t0);
    return {sum, tail};
}

double sum_h_parts(const EigenvalueTable& table, const SmoothedKernelSpec& spec) {
    if (table.empty()) return 0.0;
    const auto& r = table.entries();
    const double Y = std::exp(spec.rho());
    const double lY = std::log(Y);

    // prefix phases: S(u, Y) = prefix[count_below(u)]
    std::vector<std::complex<double>> prefix(r.size() + 1, {0.0, 0.0});
    for (std::size_t j = 0; j < r.size(); ++j)
        prefix[j + 1] = prefix[j] + std::polar(1.0, r[j] * lY);
    auto S_at = [&](double u) { return prefix[table.count_below(u)]; };

    auto A_of = [&](double u) { return ab_decomposition(spec, u).A; };
    auto dA = [&](double u) { return ab_A_derivative(spec, u); };
    const double a_scale = std::abs(A_of(1.0));  // |A| decays from r = 1

    // sum over dyadic windows (T, 2T], T = 2^n, of
    //   A(2T) S(2T) - A(T) S(T) - Int_T^{2T} A'(u) S(u) du,
    // the integral split at the table points where S jumps; A' is smooth
    // on each piece and integrated by adaptive Simpson.
    std::complex<double> a_part{0.0, 0.0};
    const double rmax = table.max_r();
    for (double T = 1.0; T < rmax; T *= 2.0) {
        const double T2 = 2.0 * T;
        a_part += A_of(T2) * S_at(T2) - A_of(T) * S_at(T);

        // segment endpoints: T, interior table points, T2
        std::vector<double> cuts;
        cuts.push_back(T);
        const auto lo = std::upper_bound(r.begin(), r.end(), T);
        const auto hi = std::upper_bound(r.begin(), r.end(), T2);
        for (auto it = lo; it != hi; ++it)
            if (*it > T && *it < T2) cuts.push_back(*it);
        cuts.push_back(T2);

        for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
            const double a = cuts[k], b = cuts[k + 1];
            if (b <= a) continue;
            const std::complex<double> s = S_at(0.5 * (a + b));
            if (s == std::complex<double>{0.0, 0.0}) continue;
            // per-segment tolerance: tight relative to the local A scale but
            // floored at roundoff level of the biggest A, so segments far in
            // the tail never demand sub-machine accuracy
            const double local = std::abs(A_of(a)) + std::abs(A_of(b));
            const double tol = std::min(1e-9, 1e-12 * local + 1e-17 * a_scale + 1e-300);
            const double re = adaptive_simpson([&](double u) { return dA(u).real(); },
                                               a, b, tol);
            const double im = adaptive_simpson([&](double u) { return dA(u).imag(); },
                                               a, b, tol);
            a_part -= std::complex<double>(re, im) * s;
        }
    }
    // the B part is the conjugate collection: total = 2 Re(A part)
    return 2.0 * a_part.real();
}

}  // namespace picard
