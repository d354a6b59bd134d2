#pragma once

// Spectral-parameter tables {r_j} and the sums over them: Weyl-law
// diagnostics, the exponential sum S(T,X) = sum_{r_j <= T} X^{i r_j},
// envelope reports for conjectured bounds on S, and the evaluation of
// sum_j h_pm(r_j) both directly and through Abel summation against S.

#include <complex>
#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "picard/lattice_count.hpp"

#include <json.hpp>

namespace picard {

class TableFormatError : public std::invalid_argument {
  public:
    TableFormatError(int line, const std::string& what)
        : std::invalid_argument("line " + std::to_string(line) + ": " + what),
          line_(line) {}
    int line() const { return line_; }

  private:
    int line_;
};

/// Sorted spectral parameters r_j > 1, multiplicities listed by
/// repetition, with free-text provenance.
class EigenvalueTable {
  public:
    EigenvalueTable() = default;
    EigenvalueTable(std::vector<double> entries, std::string source);

    /// Reads a CSV file: header line "r", then one ascending value per
    /// line.  An empty file is a valid empty table.  Violations raise
    /// TableFormatError with the offending line number.
    static EigenvalueTable ingest(const std::filesystem::path& path);

    /// r_j = (3 pi^4 j)^{1/3}, j = 1..n: the exact Weyl-law profile.
    static EigenvalueTable synthetic_weyl(std::size_t n,
                                          std::string source = "synthetic-weyl");

    const std::vector<double>& entries() const { return r_; }
    const std::string& source() const { return source_; }
    bool empty() const { return r_.empty(); }
    std::size_t size() const { return r_.size(); }
    double max_r() const { return r_.empty() ? 1.0 : r_.back(); }
    std::size_t count_below(double T) const;

    /// Writes the CSV form (header "r" + one value per line).
    void write_csv(const std::filesystem::path& path) const;

  private:
    std::vector<double> r_;
    std::string source_;
};

/// #{r_j <= T} / (T^3 / (3 pi^4)); requires T > 1.
double weyl_ratio(const EigenvalueTable& table, double T);

/// S(T,X) = sum_{r_j <= T} X^{i r_j} = sum e^{i r_j log X}; T > 0, X > 1.
std::complex<double> spectral_sum(const EigenvalueTable& table, double T, double X);

struct EnvelopePoint {
    double T, X, ratio;
};

struct EnvelopeReport {
    double alpha, beta;
    double max_ratio;
    std::vector<EnvelopePoint> points;
    double table_max_r = 0.0;  // every table is a truncation of the spectrum;
                               // reports carry the cut so readers can judge
                               // how much of S(T,X) is actually summed

    nlohmann::json to_json() const;
};

/// max over the grid of |S(T,X)| / (T^alpha X^beta + T^2); diagnostic only.
EnvelopeReport stx_envelope(const EigenvalueTable& table, double alpha, double beta,
                            const std::vector<std::pair<double, double>>& grid);

struct SumHResult {
    double sum;         // sum over the table of h_pm(r_j)
    double tail_bound;  // envelope integrated against the Weyl density above max r
};

/// Direct summation of h_pm over the table.  The tail bound integrates
/// R e^R / ((1+u)^2 (1+eta u)^2) against the Weyl density u^2/pi^4 above
/// the table maximum, in the (eta u)^{-2} regime closed form; it is
/// reported, never added to the sum.
SumHResult sum_h_direct(const EigenvalueTable& table, const SmoothedKernelSpec& spec);

/// The same sum evaluated through the A/B decomposition and Abel summation
/// against S(u, Y), Y = e^{R +- eta}, over dyadic windows T = 2^n starting
/// at T = 1 (the table has r_j > 1).  Agrees with sum_h_direct up to the
/// quadrature of the dA/du integral.
double sum_h_parts(const EigenvalueTable& table, const SmoothedKernelSpec& spec);

}  // namespace picard
