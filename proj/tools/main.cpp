// picard: command-line driver for the hyperbolic lattice-point toolkit.
//
// Subcommands:
//   count     exact and smoothed orbit counts N(X,z), single or swept
//   average   local averages of N(X,z) against smooth bumps
//   selberg   transform values, convolution checks, A/B and decay reports
//   spectrum  eigenvalue tables, Weyl ratios, S(T,X), spectral h-sums
//   plan      exact exponent calculus for the remainder term
//
// Exit codes: 0 success, 2 usage/validation error, 1 runtime failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "picard/local_average.hpp"
#include "picard/planner.hpp"
#include "picard/selberg.hpp"
#include "picard/spectral.hpp"

using nlohmann::json;
using namespace picard;

namespace {

constexpr unsigned long long kDefaultSeed = 0x5eed5eedULL;

PointH3 parse_point(const std::string& s) {
    if (s == "j") return point_j();
    double x1, x2, y;
    if (std::sscanf(s.c_str(), "%lf,%lf,%lf", &x1, &x2, &y) != 3)
        throw std::invalid_argument("point must be \"j\" or \"x1,x2,y\", got \"" + s + "\"");
    return PointH3(x1, x2, y);
}

std::vector<double> parse_sweep(const std::string& s) {
    double lo, hi;
    int n;
    char mode[8] = "lin";
    const int got = std::sscanf(s.c_str(), "%lf:%lf:%d:%7s", &lo, &hi, &n, mode);
    if (got < 3 || n < 1 || !(lo > 0.0) || hi < lo)
        throw std::invalid_argument("sweep must be \"lo:hi:n[:log|lin]\", got \"" + s + "\"");
    const std::string m = mode;
    if (m != "log" && m != "lin")
        throw std::invalid_argument("sweep mode must be log or lin, got \"" + m + "\"");
    std::vector<double> grid(n);
    for (int i = 0; i < n; ++i) {
        const double t = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
        grid[i] = m == "log" ? lo * std::pow(hi / lo, t) : lo + (hi - lo) * t;
    }
    return grid;
}

Sign parse_sign(const std::string& s) {
    if (s == "+" || s == "plus") return Sign::plus;
    if (s == "-" || s == "minus") return Sign::minus;
    throw std::invalid_argument("sign must be + or -, got \"" + s + "\"");
}

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// payload goes to --output when given (stdout then carries the summary),
// otherwise to stdout directly
void emit(const std::string& payload, const std::string& output_path,
          const std::string& summary) {
    if (output_path.empty()) {
        std::cout << payload;
        if (!payload.empty() && payload.back() != '\n') std::cout << '\n';
    } else {
        std::ofstream out(output_path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open output file " + output_path);
        out << payload;
        std::cout << summary << '\n';
    }
}

std::string config_comment_lines(const json& config) {
    std::string s;
    for (auto it = config.begin(); it != config.end(); ++it)
        s += "# " + it.key() + "=" + (it.value().is_string()
                                          ? it.value().get<std::string>()
                                          : it.value().dump()) + "\n";
    return s;
}

struct CommonOpts {
    int threads = 0;
    std::string format;
    std::string output;
    unsigned long long seed = kDefaultSeed;
};

void add_common(CLI::App* cmd, CommonOpts& o, const std::string& default_format) {
    o.format = default_format;
    cmd->add_option("--threads", o.threads, "worker threads (0 = hardware)")
        ->envname("PICARD_THREADS");
    cmd->add_option("--format", o.format, "output format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}))
        ->envname("PICARD_FORMAT");
    cmd->add_option("--output,-o", o.output, "write payload to file (stdout shows a summary)")
        ->envname("PICARD_OUTPUT");
    cmd->add_option("--seed", o.seed, "seed for randomized sweeps (fixed default)")
        ->envname("PICARD_SEED");
}

// ----------------------------------------------------------------- count

int run_count(double X, const std::string& z_str, const std::string& sweep,
              bool naive, const CommonOpts& o) {
    const PointH3 z = parse_point(z_str);
    json config{{"command", "count"}, {"z", {z.x1(), z.x2(), z.y}},
                {"threads", o.threads}, {"format", o.format}, {"naive", naive}};
    if (!sweep.empty()) {
        config["sweep"] = sweep;
        const auto grid = parse_sweep(sweep);
        std::vector<CountResult> rows;
        rows.reserve(grid.size());
        for (double x : grid) rows.push_back(count_exact(x, z, o.threads));
        std::string payload;
        if (o.format == "csv") {
            payload = config_comment_lines(config) + count_csv_header() + "\n";
            for (const auto& r : rows) payload += to_csv_row(r) + "\n";
        } else {
            json arr = json::array();
            for (const auto& r : rows) arr.push_back(r.to_json());
            payload = json{{"config", config}, {"results", arr}}.dump(2) + "\n";
        }
        emit(payload, o.output,
             "count sweep: " + std::to_string(rows.size()) + " points, last count " +
                 std::to_string(rows.back().count));
        return 0;
    }
    config["X"] = X;
    if (naive) {
        const auto n = count_naive(X, z);
        json out{{"config", config}, {"X", X}, {"count", n}};
        emit(o.format == "csv"
                 ? config_comment_lines(config) + "X,count\n" + fmt_double(X) + "," +
                       std::to_string(n) + "\n"
                 : out.dump(2) + "\n",
             o.output, "count_naive(" + fmt_double(X) + ") = " + std::to_string(n));
        return 0;
    }
    const auto r = count_exact(X, z, o.threads);
    std::string payload;
    if (o.format == "csv")
        payload = config_comment_lines(config) + count_csv_header() + "\n" + to_csv_row(r) + "\n";
    else {
        json out = r.to_json();
        out["config"] = config;
        payload = out.dump(2) + "\n";
    }
    emit(payload, o.output,
         "N(" + fmt_double(X) + ") = " + std::to_string(r.count) + ", remainder " +
             fmt_double(r.remainder));
    return 0;
}

// --------------------------------------------------------------- average

struct AverageConfig {
    std::string sweep = "10:100:2:log";
    std::string center = "0,0.25,1.25";
    double radius = 0.15;
    double sharpness = 1.0;
    double amplitude = 1.0;
    double cusp_cutoff = 4.0;
    int nodes = 4;
    int levels = 3;
};

// JSON config file for the bump and quadrature; command-line flags take
// precedence, unknown keys are rejected
void load_average_config(const std::string& path, const CLI::App* cmd, AverageConfig& c) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file " + path);
    json js;
    try {
        js = json::parse(in);
    } catch (const json::exception& e) {
        throw std::invalid_argument("config parse error in " + path + ": " + e.what());
    }
    auto overridden = [&](const char* flag) { return cmd->get_option(flag)->count() > 0; };
    for (auto it = js.begin(); it != js.end(); ++it) {
        const std::string& k = it.key();
        if (k == "sweep") { if (!overridden("--sweep")) c.sweep = it.value(); }
        else if (k == "center") { if (!overridden("--center")) c.center = it.value(); }
        else if (k == "radius") { if (!overridden("--radius")) c.radius = it.value(); }
        else if (k == "sharpness") { if (!overridden("--sharpness")) c.sharpness = it.value(); }
        else if (k == "amplitude") { if (!overridden("--amplitude")) c.amplitude = it.value(); }
        else if (k == "cusp_cutoff") { if (!overridden("--cusp-cutoff")) c.cusp_cutoff = it.value(); }
        else if (k == "nodes") { if (!overridden("--nodes")) c.nodes = it.value(); }
        else if (k == "levels") { if (!overridden("--levels")) c.levels = it.value(); }
        else throw std::invalid_argument("unknown config key \"" + k + "\" in " + path);
    }
}

int run_average(const AverageConfig& cfg, const CommonOpts& o) {
    const std::string& sweep = cfg.sweep;
    const std::string& center_str = cfg.center;
    const double radius = cfg.radius, sharpness = cfg.sharpness, amplitude = cfg.amplitude,
                 cusp_cutoff = cfg.cusp_cutoff;
    const int nodes = cfg.nodes, levels = cfg.levels;
    const TestFunction f(parse_point(center_str), radius, sharpness, amplitude, cusp_cutoff);
    const QuadratureSpec quad(nodes, levels);
    const auto grid = parse_sweep(sweep);
    json config{{"command", "average"},
                {"center", {f.center().x1(), f.center().x2(), f.center().y}},
                {"radius", radius},
                {"sharpness", sharpness},
                {"amplitude", amplitude},
                {"nodes_per_axis", nodes},
                {"refinement_levels", levels},
                {"threads", o.threads},
                {"sweep", sweep}};
    const auto curve = remainder_curve(grid, f, quad, o.threads);
    std::string payload;
    if (o.format == "csv") {
        payload = config_comment_lines(config) + "X,local_average,main_term,remainder\n";
        for (const auto& p : curve.points)
            payload += fmt_double(p.X) + "," + fmt_double(p.local_avg) + "," +
                       fmt_double(p.main_term) + "," + fmt_double(p.remainder) + "\n";
        payload += "# slope=" + fmt_double(curve.slope) + "\n";
    } else {
        json pts = json::array();
        for (const auto& p : curve.points)
            pts.push_back({{"X", p.X},
                           {"local_average", p.local_avg},
                           {"main_term", p.main_term},
                           {"remainder", p.remainder}});
        payload = json{{"config", config},
                       {"points", pts},
                       {"slope", curve.slope},
                       {"zero_points_excluded", curve.zero_points_excluded}}
                      .dump(2) + "\n";
    }
    emit(payload, o.output,
         "average: " + std::to_string(curve.points.size()) + " grid points, slope " +
             fmt_double(curve.slope));
    return 0;
}

// --------------------------------------------------------------- selberg

int run_selberg(double R, double eta, const std::string& sign_str, double r,
                bool check_convolution, bool bound_check, bool ab,
                const std::string& grid_str, double flag_constant, const CommonOpts& o) {
    const SmoothedKernelSpec spec(R, eta, parse_sign(sign_str));
    json config{{"command", "selberg"}, {"R", R}, {"eta", eta}, {"sign", sign_str}};
    json out{{"config", config}};
    std::string summary = "selberg:";

    if (check_convolution) {
        const SmoothedKernel kern(spec);
        const double u_max = spec.outer_radius() + 1e-9;
        const double numeric =
            selberg_numeric([&](double t) { return kern(t); }, r, u_max, 1e-8);
        const double closed = h_pm(spec, r).real();
        const double err = std::fabs(numeric - closed);
        const bool pass = err <= 1e-4 * std::max(1.0, std::fabs(closed));
        out["convolution_check"] = {{"r", r},
                                    {"numeric", numeric},
                                    {"closed_form", closed},
                                    {"abs_error", err},
                                    {"pass", pass}};
        summary += std::string(" convolution ") + (pass ? "pass" : "FAIL") +
                   " (|err| = " + fmt_double(err) + ")";
        if (!pass) {
            emit(out.dump(2) + "\n", o.output, summary);
            return 1;
        }
    }
    if (bound_check) {
        const auto grid = parse_sweep(grid_str.empty() ? "1:1000:200:log" : grid_str);
        const auto rep = bound_check_hpm(spec, grid, flag_constant);
        out["bound_check"] = rep.to_json();
        summary += " bound max_ratio " + fmt_double(rep.max_ratio) +
                   (rep.flagged ? " FLAGGED" : "");
    }
    if (ab) {
        const auto [A, B] = ab_decomposition(spec, r);
        out["ab"] = {{"r", r},
                     {"A", {A.real(), A.imag()}},
                     {"B", {B.real(), B.imag()}},
                     {"h_pm", h_pm(spec, r).real()}};
        summary += " |A| = " + fmt_double(std::abs(A));
    }
    if (!check_convolution && !bound_check && !ab) {
        out["value"] = {{"r", r}, {"h_pm", h_pm(spec, r).real()}};
        summary += " h_pm(" + fmt_double(r) + ") = " + fmt_double(h_pm(spec, r).real());
    }
    emit(out.dump(2) + "\n", o.output, summary);
    return 0;
}

// -------------------------------------------------------------- spectrum

int run_spectrum(const std::string& table_path, int synthetic_n, int random_n,
                 const std::string& weyl_T, const std::string& stx_pair,
                 const std::string& stx_grid, bool do_sum, double R, double eta,
                 const std::string& sign_str, const CommonOpts& o) {
    EigenvalueTable table;
    json config{{"command", "spectrum"}};
    if (table_path == "synthetic-weyl" || table_path.rfind("synthetic-weyl:", 0) == 0) {
        const auto colon = table_path.find(':');
        const int n = colon == std::string::npos ? 1000
                                                 : std::stoi(table_path.substr(colon + 1));
        table = EigenvalueTable::synthetic_weyl(static_cast<std::size_t>(n));
        config["table"] = table_path;
    } else if (!table_path.empty()) {
        table = EigenvalueTable::ingest(table_path);
        config["table"] = table_path;
    } else if (random_n > 0) {
        std::mt19937_64 rng(o.seed);
        std::uniform_real_distribution<double> u(1.0 + 1e-9, 100.0);
        std::vector<double> r(random_n);
        for (auto& v : r) v = u(rng);
        std::sort(r.begin(), r.end());
        table = EigenvalueTable(std::move(r), "random seed " + std::to_string(o.seed));
        config["random_table"] = random_n;
        config["seed"] = o.seed;
    } else {
        table = EigenvalueTable::synthetic_weyl(synthetic_n > 0 ? synthetic_n : 1000);
        config["synthetic_weyl"] = synthetic_n > 0 ? synthetic_n : 1000;
    }
    json out{{"config", config},
             {"table_size", table.size()},
             {"source", table.source()},
             {"max_r", table.max_r()}};
    std::string summary = "spectrum: n = " + std::to_string(table.size());

    if (!weyl_T.empty()) {
        const double T = weyl_T == "max" ? table.max_r() : std::stod(weyl_T);
        const double ratio = weyl_ratio(table, T);
        out["weyl"] = {{"T", T}, {"ratio", ratio}};
        summary += ", weyl ratio " + fmt_double(ratio);
    }
    if (!stx_pair.empty()) {
        double alpha, beta_num = 0, beta_den = 1;
        if (std::sscanf(stx_pair.c_str(), "%lf,%lf/%lf", &alpha, &beta_num, &beta_den) < 2)
            throw std::invalid_argument("stx pair must be \"alpha,beta\"");
        const double beta = beta_num / beta_den;
        std::vector<std::pair<double, double>> grid;
        for (double T : parse_sweep(stx_grid.empty() ? "2:64:6:log" : stx_grid))
            for (double X : {2.0, 100.0, 10000.0}) grid.emplace_back(T, X);
        const auto rep = stx_envelope(table, alpha, beta, grid);
        out["stx"] = rep.to_json();
        summary += ", stx max ratio " + fmt_double(rep.max_ratio);
    }
    if (do_sum) {
        const SmoothedKernelSpec spec(R, eta, parse_sign(sign_str));
        const auto direct = sum_h_direct(table, spec);
        const double parts = sum_h_parts(table, spec);
        out["sum_h"] = {{"R", R},
                        {"eta", eta},
                        {"sign", sign_str},
                        {"direct", direct.sum},
                        {"tail_bound", direct.tail_bound},
                        {"parts", parts},
                        {"abs_difference", std::fabs(direct.sum - parts)}};
        summary += ", sum_h " + fmt_double(direct.sum);
    }
    emit(out.dump(2) + "\n", o.output, summary);
    return 0;
}

// ------------------------------------------------------------------ plan

int run_plan(const std::string& theta_str, const std::string& q_str, double R,
             const std::string& pair_name, const CommonOpts& o) {
    const Rational theta = Rational::parse(theta_str);
    const Rational q = Rational::parse(q_str);
    const HypothesisParams params{theta, q};

    const StxPair interp = interpolate_stx(theta);
    const Rational cross = crossover_q(theta);
    const Rational expo = remainder_exponent(params);
    const auto bal = balance(params, R);

    json out{{"config", {{"command", "plan"}, {"theta", theta.str()}, {"q", q.str()}, {"R", R}}},
             {"theta", theta.str()},
             {"q", q.str()},
             {"stx_pair", {interp.alpha.str(), interp.beta.str()}},
             {"crossover_q", cross.str()},
             {"exponent", expo.str()},
             {"exponent_decimal", expo.value()},
             {"T_exponent", bal.T_exponent.str()},
             {"eta", bal.eta}};

    std::ostringstream tbl;
    tbl << "theta      = " << theta.str() << " (" << theta.value() << ")\n"
        << "q          = " << q.str() << " (" << q.value() << ")\n"
        << "stx_pair   = (" << interp.alpha.str() << ", " << interp.beta.str() << ")\n"
        << "crossover  = " << cross.str() << " (" << cross.value() << ")\n"
        << "exponent   = " << expo.str() << " (" << expo.value() << ")\n"
        << "T exponent = " << bal.T_exponent.str() << ", eta(R=" << R << ") = " << bal.eta
        << "\n";
    if (!pair_name.empty()) {
        const StxPair preset = stx_preset(pair_name, theta);
        const Rational pe = exponent_from_pair(preset, q);
        out["preset"] = {{"name", pair_name},
                         {"pair", {preset.alpha.str(), preset.beta.str()}},
                         {"exponent", pe.str()},
                         {"exponent_decimal", pe.value()}};
        tbl << "preset " << pair_name << ": exponent = " << pe.str() << " (" << pe.value()
            << ")\n";
    }
    emit(o.format == "json" ? out.dump(2) + "\n" : tbl.str(), o.output,
         "plan: exponent " + expo.str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hyperbolic lattice-point counting toolkit for the Picard group"};
    app.require_subcommand(1);

    // count
    auto* c_count = app.add_subcommand("count", "exact orbit counts N(X,z)");
    double count_X = 1.0;
    std::string count_z = "j", count_sweep;
    bool count_naive_flag = false;
    CommonOpts count_o;
    c_count->add_option("--X", count_X, "cosh-distance cutoff (X >= 1)");
    c_count->add_option("--z", count_z, "base point: j or x1,x2,y");
    c_count->add_option("--sweep", count_sweep, "X grid lo:hi:n[:log|lin]");
    c_count->add_flag("--naive", count_naive_flag, "use the exhaustive small-scale oracle");
    add_common(c_count, count_o, "json");

    // average
    auto* c_avg = app.add_subcommand("average", "local averages of N(X,z) against a bump");
    AverageConfig avg;
    std::string avg_config_path;
    CommonOpts avg_o;
    c_avg->add_option("--config", avg_config_path,
                      "JSON config (keys: sweep, center, radius, sharpness, amplitude, "
                      "cusp_cutoff, nodes, levels); flags override it");
    c_avg->add_option("--sweep", avg.sweep, "X grid lo:hi:n[:log|lin]");
    c_avg->add_option("--center", avg.center, "bump center x1,x2,y");
    c_avg->add_option("--radius", avg.radius, "geodesic support radius");
    c_avg->add_option("--sharpness", avg.sharpness, "bump sharpness parameter");
    c_avg->add_option("--amplitude", avg.amplitude, "bump amplitude");
    c_avg->add_option("--cusp-cutoff", avg.cusp_cutoff, "maximal support height");
    c_avg->add_option("--nodes", avg.nodes, "Gauss-Legendre nodes per axis (>= 4)");
    c_avg->add_option("--levels", avg.levels, "dyadic refinement levels (>= 1)");
    add_common(c_avg, avg_o, "csv");

    // selberg
    auto* c_sel = app.add_subcommand("selberg", "Selberg transform checks and reports");
    double sel_R = 2.0, sel_eta = 0.2, sel_r = 1.0, sel_flag = 100.0;
    std::string sel_sign = "+", sel_grid;
    bool sel_conv = false, sel_bound = false, sel_ab = false;
    CommonOpts sel_o;
    c_sel->add_option("--R", sel_R, "ball radius (>= 1)");
    c_sel->add_option("--eta", sel_eta, "smoothing width in (0,1)");
    c_sel->add_option("--sign", sel_sign, "+ or -");
    c_sel->add_option("--r", sel_r, "spectral parameter");
    c_sel->add_flag("--check-convolution", sel_conv,
                    "compare the numeric transform of k_pm with h_pm");
    c_sel->add_flag("--bound-check", sel_bound, "envelope-ratio report for h_pm decay");
    c_sel->add_flag("--ab", sel_ab, "report the A/B phase coefficients");
    c_sel->add_option("--grid", sel_grid, "r grid lo:hi:n[:log|lin] for --bound-check");
    c_sel->add_option("--flag-constant", sel_flag, "bound-check flag threshold");
    add_common(c_sel, sel_o, "json");

    // spectrum
    auto* c_spec = app.add_subcommand("spectrum", "eigenvalue tables and spectral sums");
    std::string spec_table, spec_weylT, spec_stx, spec_stx_grid, spec_sign = "+";
    int spec_weyl_n = 0, spec_rand_n = 0;
    bool spec_sum = false;
    double spec_R = 2.0, spec_eta = 0.2;
    CommonOpts spec_o;
    c_spec->add_option("--table", spec_table, "CSV table path (header \"r\")");
    c_spec->add_option("--synthetic-weyl", spec_weyl_n, "use the synthetic Weyl table of size n");
    c_spec->add_option("--random-table", spec_rand_n, "random table of size n (see --seed)");
    c_spec->add_option("--weyl-T", spec_weylT, "report the Weyl ratio at T (or \"max\")");
    c_spec->add_option("--stx", spec_stx, "envelope report for the pair \"alpha,beta\"");
    c_spec->add_option("--stx-grid", spec_stx_grid, "T grid for --stx");
    c_spec->add_flag("--sum", spec_sum, "evaluate sum_j h_pm(r_j), direct and by parts");
    c_spec->add_option("--R", spec_R, "kernel radius for --sum");
    c_spec->add_option("--eta", spec_eta, "kernel width for --sum");
    c_spec->add_option("--sign", spec_sign, "kernel sign for --sum");
    add_common(c_spec, spec_o, "json");

    // plan
    auto* c_plan = app.add_subcommand("plan", "exact remainder-exponent calculus");
    std::string plan_theta = "0", plan_q = "1", plan_pair;
    double plan_R = 2.0;
    CommonOpts plan_o;
    c_plan->add_option("--theta", plan_theta, "subconvexity exponent in [0,1/4], e.g. 1/4");
    c_plan->add_option("--q", plan_q, "quantum-variance exponent in [1,3], e.g. 5/3");
    c_plan->add_option("--R", plan_R, "radius for the eta balance report");
    c_plan->add_option("--stx-pair", plan_pair,
                       "also evaluate a named pair: 2,1/4 | 7/4+theta,1/4 | 15/8,1/4 | 2,0");
    add_common(c_plan, plan_o, "table");

    try {
        app.parse(argc, argv);
        if (c_count->parsed())
            return run_count(count_X, count_z, count_sweep, count_naive_flag, count_o);
        if (c_avg->parsed()) {
            if (!avg_config_path.empty()) load_average_config(avg_config_path, c_avg, avg);
            return run_average(avg, avg_o);
        }
        if (c_sel->parsed())
            return run_selberg(sel_R, sel_eta, sel_sign, sel_r, sel_conv, sel_bound, sel_ab,
                               sel_grid, sel_flag, sel_o);
        if (c_spec->parsed())
            return run_spectrum(spec_table, spec_weyl_n, spec_rand_n, spec_weylT, spec_stx,
                                spec_stx_grid, spec_sum, spec_R, spec_eta, spec_sign, spec_o);
        if (c_plan->parsed())
            return run_plan(plan_theta, plan_q, plan_R, plan_pair, plan_o);
        return 2;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << '\n';
        return 1;
    }
}
