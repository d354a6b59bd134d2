#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "picard/selberg.hpp"
#include "picard/spectral.hpp"

using namespace picard;
namespace fs = std::filesystem;

namespace {

fs::path write_temp(const std::string& name, const std::string& contents) {
    const fs::path p = fs::temp_directory_path() / name;
    std::ofstream out(p);
    out << contents;
    return p;
}

double rel_err(double a, double b) {
    return std::fabs(a - b) / std::max({std::fabs(a), std::fabs(b), 1e-300});
}

EigenvalueTable random_table(std::mt19937_64& rng, std::size_t n, double r_max = 200.0) {
    std::uniform_real_distribution<double> u(1.0 + 1e-6, r_max);
    std::vector<double> r(n);
    for (auto& v : r) v = u(rng);
    std::sort(r.begin(), r.end());
    return EigenvalueTable(std::move(r), "random");
}

}  // namespace

TEST_CASE("ingest: valid, empty and malformed tables") {
    SUBCASE("two entries") {
        const auto p = write_temp("tbl_ok.csv", "r\n2.0\n3.0\n");
        const auto t = EigenvalueTable::ingest(p);
        REQUIRE(t.size() == 2);
        CHECK(t.entries()[0] == 2.0);
        CHECK(t.entries()[1] == 3.0);
        CHECK(t.source() == p.string());
    }
    SUBCASE("empty file is a valid empty table") {
        const auto p = write_temp("tbl_empty.csv", "");
        CHECK(EigenvalueTable::ingest(p).empty());
    }
    SUBCASE("header only") {
        const auto p = write_temp("tbl_hdr.csv", "r\n");
        CHECK(EigenvalueTable::ingest(p).empty());
    }
    SUBCASE("small eigenvalue rejected with its line number") {
        const auto p = write_temp("tbl_small.csv", "r\n0.5\n");
        CHECK_THROWS_WITH_AS(EigenvalueTable::ingest(p),
                             doctest::Contains("line 2"), TableFormatError);
    }
    SUBCASE("descending rows rejected") {
        const auto p = write_temp("tbl_desc.csv", "r\n3.0\n2.0\n");
        CHECK_THROWS_WITH_AS(EigenvalueTable::ingest(p),
                             doctest::Contains("line 3"), TableFormatError);
    }
    SUBCASE("non-numeric row rejected") {
        const auto p = write_temp("tbl_bad.csv", "r\n2.0\nbogus\n");
        CHECK_THROWS_WITH_AS(EigenvalueTable::ingest(p),
                             doctest::Contains("line 3"), TableFormatError);
    }
    SUBCASE("missing header rejected") {
        const auto p = write_temp("tbl_nohdr.csv", "2.0\n3.0\n");
        CHECK_THROWS_AS(EigenvalueTable::ingest(p), TableFormatError);
    }
    SUBCASE("round trip") {
        const auto t = EigenvalueTable::synthetic_weyl(50);
        const auto p = fs::temp_directory_path() / "tbl_rt.csv";
        t.write_csv(p);
        const auto t2 = EigenvalueTable::ingest(p);
        REQUIRE(t2.size() == t.size());
        for (std::size_t i = 0; i < t.size(); ++i)
            CHECK(t2.entries()[i] == t.entries()[i]);
    }
}

TEST_CASE("EigenvalueTable: constructor validation") {
    CHECK_THROWS_AS(EigenvalueTable({0.9}, "bad"), std::invalid_argument);
    CHECK_THROWS_AS(EigenvalueTable({3.0, 2.0}, "bad"), std::invalid_argument);
    const EigenvalueTable t({2.0, 2.0, 3.0}, "multiplicity by repetition");
    CHECK(t.size() == 3);
}

TEST_CASE("weyl_ratio: synthetic table and edge cases") {
    const auto t = EigenvalueTable::synthetic_weyl(1500);
    // by construction the ratio is exactly 1 at every node
    const double r1000 = t.entries()[999];
    CHECK(weyl_ratio(t, r1000) == doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t j = 99; j < 1500; j += 100)
        CHECK(weyl_ratio(t, t.entries()[j]) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(weyl_ratio(EigenvalueTable{}, 10.0) == 0.0);
    CHECK_THROWS_AS(weyl_ratio(t, 0.5), std::domain_error);
}

TEST_CASE("spectral_sum: unit phases and the trivial bound") {
    CHECK(std::abs(spectral_sum(EigenvalueTable{}, 10.0, 5.0)) == 0.0);
    const EigenvalueTable t23({2.0, 3.0}, "unit-phase");
    const auto s = spectral_sum(t23, 10.0, std::exp(2.0 * M_PI));
    CHECK(std::abs(s - std::complex<double>(2.0, 0.0)) <= 1e-12 * 2.0);
    const EigenvalueTable t2({2.0}, "half-turn");
    const auto s2 = spectral_sum(t2, 10.0, std::exp(M_PI / 2.0));
    CHECK(std::abs(s2 - std::complex<double>(-1.0, 0.0)) <= 1e-12);
    // |S(T,X)| <= #{r_j <= T}
    std::mt19937_64 rng(73);
    for (int i = 0; i < 50; ++i) {
        const auto t = random_table(rng, 200);
        std::uniform_real_distribution<double> uT(1.0, 250.0), uX(1.001, 100.0);
        const double T = uT(rng), X = uX(rng);
        CHECK(std::abs(spectral_sum(t, T, X)) <=
              static_cast<double>(t.count_below(T)) + 1e-9);
    }
    CHECK_THROWS_AS(spectral_sum(t2, 10.0, 0.5), std::domain_error);
}

TEST_CASE("spectral_sum: negating log X conjugates the sum") {
    std::mt19937_64 rng(79);
    const auto t = random_table(rng, 100);
    for (double X : {1.7, 12.0, 400.0}) {
        const auto plus = spectral_sum(t, 150.0, X);
        // X -> 1/X is outside the X > 1 domain; negate log X via phases
        std::complex<double> conj_sum = 0.0;
        for (double r : t.entries())
            if (r <= 150.0) conj_sum += std::polar(1.0, -r * std::log(X));
        CHECK(std::abs(conj_sum - std::conj(plus)) <= 1e-12 * (1.0 + std::abs(plus)));
    }
}

TEST_CASE("stx_envelope: the unconditional pair and reports") {
    const auto t = EigenvalueTable::synthetic_weyl(800);
    std::vector<std::pair<double, double>> grid;
    for (double T : {5.0, 20.0, 60.0, t.max_r()})
        for (double X : {2.0, 50.0, 1000.0}) grid.emplace_back(T, X);
    const auto rep30 = stx_envelope(t, 3.0, 0.0, grid);
    CHECK(rep30.max_ratio <= 1.0);
    CHECK(rep30.points.size() == grid.size());
    const auto rep2q = stx_envelope(t, 2.0, 0.25, grid);
    CHECK(rep2q.max_ratio > 0.0);
    const auto repe = stx_envelope(EigenvalueTable{}, 2.0, 0.25, grid);
    CHECK(repe.max_ratio == 0.0);
    const auto js = rep30.to_json();
    CHECK(js["alpha"] == 3.0);
    CHECK(js["points"].size() == grid.size());
}

TEST_CASE("sum_h_direct: single term and tail report") {
    const SmoothedKernelSpec spec(2.0, 0.3, Sign::plus);
    const auto empty = sum_h_direct(EigenvalueTable{}, spec);
    CHECK(empty.sum == 0.0);
    CHECK(empty.tail_bound > 0.0);
    const EigenvalueTable t({2.0}, "single");
    const auto one = sum_h_direct(t, spec);
    CHECK(one.sum == doctest::Approx(h_pm(spec, 2.0).real()).epsilon(1e-14));
    CHECK(one.tail_bound ==
          doctest::Approx(spec.R * std::exp(spec.R) /
                          (std::pow(M_PI, 4) * spec.eta * spec.eta * 2.0))
              .epsilon(1e-12));
}

TEST_CASE("sum_h_direct: magnitude under the theorem-scale envelope") {
    // synthetic Weyl table, R = 4, eta = e^{-R/1}: diagnostic comparison with
    // the q = 1 remainder scale e^{6R/5}
    const double R = 4.0;
    const SmoothedKernelSpec spec(R, std::exp(-R), Sign::plus);
    const auto t = EigenvalueTable::synthetic_weyl(4000);
    const auto res = sum_h_direct(t, spec);
    CHECK(std::fabs(res.sum) <= 100.0 * std::exp(1.2 * R));
}

TEST_CASE("sum_h_parts: Abel summation reproduces the direct sum") {
    SUBCASE("empty table") {
        CHECK(sum_h_parts(EigenvalueTable{}, SmoothedKernelSpec(2, 0.2, Sign::plus)) == 0.0);
    }
    SUBCASE("three-term table") {
        const EigenvalueTable t({2.0, 3.5, 7.1}, "toy");
        const SmoothedKernelSpec spec(3.0, 0.2, Sign::plus);
        const double direct = sum_h_direct(t, spec).sum;
        const double parts = sum_h_parts(t, spec);
        CHECK(rel_err(parts, direct) <= 1e-6);
    }
    SUBCASE("ten random tables") {
        std::mt19937_64 rng(83);
        std::uniform_real_distribution<double> uR(1.0, 5.0), ue(0.05, 0.95);
        for (int i = 0; i < 10; ++i) {
            const auto t = random_table(rng, 50 + 95 * static_cast<std::size_t>(i));
            const SmoothedKernelSpec spec(uR(rng), ue(rng),
                                          i % 2 ? Sign::plus : Sign::minus);
            const double direct = sum_h_direct(t, spec).sum;
            const double parts = sum_h_parts(t, spec);
            CAPTURE(i);
            CAPTURE(spec.R);
            CAPTURE(spec.eta);
            CHECK(std::fabs(parts - direct) <=
                  1e-6 * std::max({std::fabs(direct), 1.0}));
        }
    }
    SUBCASE("boundary eigenvalue exactly at a dyadic window edge") {
        const EigenvalueTable t({1.5, 2.0, 2.5, 4.0, 9.0}, "edges");
        const SmoothedKernelSpec spec(2.5, 0.4, Sign::minus);
        CHECK(std::fabs(sum_h_parts(t, spec) - sum_h_direct(t, spec).sum) <= 1e-8);
    }
}
