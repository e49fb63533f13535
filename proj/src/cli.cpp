#include "covar/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>

#include "covar/backtest.hpp"
#include "covar/errors.hpp"
#include "covar/measures.hpp"
#include "covar/model.hpp"
#include "covar/numerics.hpp"
#include "covar/ordering.hpp"
#include "covar/rng.hpp"
#include "covar/version.hpp"

namespace covar::cli {

namespace {

using nlohmann::ordered_json;

std::string fmt6(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", x);
    return buf;
}

double parse_double(const std::string& token, const std::string& flag) {
    std::size_t pos = 0;
    double value = 0.0;
    try {
        value = std::stod(token, &pos);
    } catch (const std::exception&) {
        throw std::domain_error(flag + ": malformed number '" + token + "'");
    }
    if (pos != token.size()) throw std::domain_error(flag + ": malformed number '" + token + "'");
    return value;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string current;
    for (char ch : s) {
        if (ch == sep) {
            parts.push_back(current);
            current.clear();
        } else {
            current += ch;
        }
    }
    parts.push_back(current);
    return parts;
}

// Accepts a single value, a comma list, or an inclusive start:stop:step range
// (endpoints hit within 1e-12).
std::vector<double> parse_value_list(const std::string& s, const std::string& flag) {
    if (s.find(':') != std::string::npos) {
        const auto parts = split(s, ':');
        if (parts.size() != 3)
            throw std::domain_error(flag + ": expected start:stop:step, got '" + s + "'");
        const double start = parse_double(parts[0], flag);
        const double stop = parse_double(parts[1], flag);
        const double step = parse_double(parts[2], flag);
        if (!(step > 0.0)) throw std::domain_error(flag + ": step must be positive in '" + s + "'");
        if (stop < start) throw std::domain_error(flag + ": stop below start in '" + s + "'");
        std::vector<double> values;
        for (int i = 0;; ++i) {
            double x = start + i * step;
            if (x > stop + 1e-12) break;
            if (std::fabs(x - stop) <= 1e-12) x = stop;
            values.push_back(x);
            if (x == stop) break;
        }
        return values;
    }
    std::vector<double> values;
    for (const auto& token : split(s, ',')) {
        values.push_back(parse_double(token, flag));
    }
    if (values.empty()) throw std::domain_error(flag + ": no values in '" + s + "'");
    return values;
}

std::vector<Levels> parse_levels_list(const std::string& s) {
    std::vector<Levels> levels;
    for (const auto& token : split(s, ',')) {
        const auto parts = split(token, ':');
        if (parts.size() != 2)
            throw std::domain_error("--levels: expected alpha:beta, got '" + token + "'");
        levels.emplace_back(parse_double(parts[0], "--levels"), parse_double(parts[1], "--levels"));
    }
    return levels;
}

struct MarginOverrides {
    double mu_x = 0.0;
    double sigma_x = 1.0;
    double mu_y = 0.0;
    double sigma_y = 1.0;
};

BivariateModel build_model(ModelFamily family, double param, const MarginOverrides& mo) {
    switch (family) {
        case ModelFamily::Gaussian:
            return {Marginal::normal(mo.mu_x, mo.sigma_x), Marginal::normal(mo.mu_y, mo.sigma_y),
                    Copula::gaussian(param)};
        case ModelFamily::T3:
            return {Marginal::student_t(3.0, mo.mu_x, mo.sigma_x),
                    Marginal::student_t(3.0, mo.mu_y, mo.sigma_y), Copula::student_t(param, 3.0)};
        case ModelFamily::GumbelT3:
            return {Marginal::student_t(3.0, mo.mu_x, mo.sigma_x),
                    Marginal::student_t(3.0, mo.mu_y, mo.sigma_y), Copula::gumbel(param)};
    }
    throw std::domain_error("unknown family");
}

// Picks the dependence-parameter flag that matches the family and rejects the
// other one.
std::vector<double> family_params(ModelFamily family, const std::string& rho_str,
                                  const std::string& theta_str) {
    const bool wants_theta = family == ModelFamily::GumbelT3;
    if (wants_theta) {
        if (!rho_str.empty())
            throw std::domain_error("--rho is not a gumbel_t3 parameter; use --theta");
        if (theta_str.empty()) throw std::domain_error("family gumbel_t3 requires --theta");
        return parse_value_list(theta_str, "--theta");
    }
    if (!theta_str.empty())
        throw std::domain_error("--theta is only valid for family gumbel_t3; use --rho");
    if (rho_str.empty()) throw std::domain_error("this family requires --rho");
    return parse_value_list(rho_str, "--rho");
}

std::vector<std::string> make_metadata(const std::vector<std::string>& args,
                                       std::uint64_t seed) {
    std::string echo = std::string(kToolName);
    for (const auto& a : args) {
        echo += ' ';
        echo += a;
    }
    return {
        std::string(kToolName) + " " + std::string(kToolVersion),
        "rng=" + std::string(Rng::algorithm()),
        "seed=" + std::to_string(seed),
        "command: " + echo,
    };
}

std::string metadata_block(const std::vector<std::string>& metadata) {
    std::string out;
    for (const auto& line : metadata) {
        out += "# ";
        out += line;
        out += '\n';
    }
    return out;
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open output file '" + path + "'");
    file << content;
    if (!file) throw std::runtime_error("write failed for output file '" + path + "'");
}

// ---------------------------------------------------------------------------
// verify subcommand
// ---------------------------------------------------------------------------

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> grid(n);
    for (int i = 0; i < n; ++i) grid[i] = a + (b - a) * i / (n - 1);
    return grid;
}

struct CheckResult {
    std::string name;
    bool pass;
    std::string detail;
};

std::string run_verify(int points, std::size_t grid_size, std::uint64_t seed) {
    std::vector<CheckResult> results;
    const auto check = [&results](const std::string& name, bool pass, std::string detail = "") {
        results.push_back({name, pass, std::move(detail)});
    };

    using ordering::concordance_leq;
    const auto ordered = [&](const Copula& a, const Copula& b) {
        return concordance_leq(a, b, grid_size).ordered();
    };
    check("concordance gaussian rho 0.3 <= 0.7", ordered(Copula::gaussian(0.3), Copula::gaussian(0.7)));
    check("concordance t3 rho 0.3 <= 0.7",
          ordered(Copula::student_t(0.3, 3.0), Copula::student_t(0.7, 3.0)));
    check("concordance gumbel theta 1.2 <= 2.0", ordered(Copula::gumbel(1.2), Copula::gumbel(2.0)));
    check("concordance reversed gaussian 0.7 vs 0.3 is violated",
          !ordered(Copula::gaussian(0.7), Copula::gaussian(0.3)));

    {
        Rng rng(seed);
        int mismatches = 0;
        int tested = 0;
        const double h = 1e-6;
        while (tested < 300) {
            const double rho = -0.99 + 1.98 * rng.uniform01();
            const Levels lv(0.01 + 0.98 * rng.uniform01(), 0.01 + 0.98 * rng.uniform01());
            const double za = num::normal_quantile(lv.alpha);
            const double zb = num::normal_quantile(lv.beta);
            if (std::fabs(za * std::sqrt(1.0 - rho * rho) - rho * zb) < 1e-4) continue;
            ++tested;
            const double fd = (covar_eq_gaussian_analytic(0.0, 1.0, rho + h, lv) -
                               covar_eq_gaussian_analytic(0.0, 1.0, rho - h, lv)) /
                              (2.0 * h);
            const int fd_sign = fd > 0.0 ? 1 : (fd < 0.0 ? -1 : 0);
            if (ordering::gaussian_derivative_sign(rho, lv) != fd_sign) ++mismatches;
        }
        check("gaussian derivative sign matches finite difference (300 points)", mismatches == 0,
              mismatches ? std::to_string(mismatches) + " mismatches" : "");
    }

    const std::vector<Levels> level_pairs = {Levels(0.95, 0.95), Levels(0.99, 0.99)};
    const auto rho_grid = linspace(0.05, 0.95, points);
    const auto theta_grid = linspace(1.0, 3.0, points);
    for (const Levels& lv : level_pairs) {
        const std::string tag =
            " (alpha=" + fmt6(lv.alpha) + ", beta=" + fmt6(lv.beta) + ")";
        check("covar_geq nondecreasing in rho, gaussian" + tag,
              ordering::monotonicity_sweep(ModelFamily::Gaussian, rho_grid,
                                           MeasureKind::CovarGeq, lv)
                  .monotone());
        check("covar_geq nondecreasing in rho, t3" + tag,
              ordering::monotonicity_sweep(ModelFamily::T3, rho_grid, MeasureKind::CovarGeq, lv)
                  .monotone());
        check("covar_geq nondecreasing in theta, gumbel_t3" + tag,
              ordering::monotonicity_sweep(ModelFamily::GumbelT3, theta_grid,
                                           MeasureKind::CovarGeq, lv)
                  .monotone());
    }
    {
        const Levels lv(0.95, 0.95);
        check("covar_eq non-monotone in rho, gaussian (alpha=beta=0.95)",
              !ordering::monotonicity_sweep(ModelFamily::Gaussian, rho_grid,
                                            MeasureKind::CovarEq, lv)
                   .monotone());
        check("covar_eq non-monotone in rho, t3 (alpha=beta=0.95)",
              !ordering::monotonicity_sweep(ModelFamily::T3, rho_grid, MeasureKind::CovarEq, lv)
                   .monotone());
        check("covar_eq non-monotone in theta, gumbel_t3 (alpha=beta=0.95)",
              !ordering::monotonicity_sweep(ModelFamily::GumbelT3, theta_grid,
                                            MeasureKind::CovarEq, lv)
                   .monotone());
    }
    {
        bool decreasing = true;
        double prev = 2.0;
        for (double rho : linspace(0.0, 0.9, points)) {
            const double b0 = ordering::beta0(Copula::gaussian(rho), 0.95);
            if (b0 > prev + 1e-12) decreasing = false;
            prev = b0;
        }
        check("beta0 nonincreasing in rho, gaussian (alpha=0.95)", decreasing);
        decreasing = true;
        prev = 2.0;
        for (double theta : linspace(1.0, 3.0, points)) {
            const double b0 = ordering::beta0(Copula::gumbel(theta), 0.95);
            if (b0 > prev + 1e-12) decreasing = false;
            prev = b0;
        }
        check("beta0 nonincreasing in theta, gumbel (alpha=0.95)", decreasing);
    }

    std::string out;
    int failures = 0;
    for (const auto& r : results) {
        out += r.pass ? "PASS: " : "FAIL: ";
        out += r.name;
        if (!r.pass && !r.detail.empty()) {
            out += " — ";
            out += r.detail;
        }
        out += '\n';
        if (!r.pass) ++failures;
    }
    out += failures == 0 ? "all checks passed\n"
                         : std::to_string(failures) + " check(s) failed\n";
    if (failures > 0) out += "VERIFY_FAILED\n";
    return out;
}

}  // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"systemic risk measures: CoVaR/CoES across bivariate dependence models"};
    app.require_subcommand(1);

    std::string family_str, rho_str, theta_str, measure_str, levels_str;
    std::string output_path, format = "";
    double alpha = 0.95, beta = -1.0;
    std::uint64_t seed = 42;
    std::size_t n = 0;
    unsigned threads = 0;
    int verify_points = 10;
    std::size_t verify_grid = 50;
    MarginOverrides margins;

    const auto add_model_flags = [&](CLI::App* sub, bool with_margins) {
        sub->add_option("--family", family_str, "gaussian | t3 | gumbel_t3")->required();
        sub->add_option("--rho", rho_str, "correlation parameter (value, list or start:stop:step)");
        sub->add_option("--theta", theta_str, "Gumbel parameter (value, list or start:stop:step)");
        if (with_margins) {
            sub->add_option("--mu-x", margins.mu_x, "location of the conditioning marginal");
            sub->add_option("--sigma-x", margins.sigma_x, "scale of the conditioning marginal");
            sub->add_option("--mu-y", margins.mu_y, "location of the target marginal");
            sub->add_option("--sigma-y", margins.sigma_y, "scale of the target marginal");
        }
    };

    CLI::App* measure_cmd = app.add_subcommand("measure", "compute one risk measure");
    add_model_flags(measure_cmd, true);
    measure_cmd->add_option("--alpha", alpha, "stress level for X")->required();
    measure_cmd->add_option("--beta", beta, "confidence level for Y (default: alpha)");
    measure_cmd->add_option("--measure", measure_str, "measure name")->required();
    measure_cmd->add_option("--output,-o", output_path, "output file (default: stdout)");
    measure_cmd->add_option("--format", format, "csv | json (default json)");
    measure_cmd->add_option("--seed", seed, "seed echoed into metadata");

    CLI::App* sweep_cmd = app.add_subcommand("sweep", "parameter sweep to plot-ready CSV");
    add_model_flags(sweep_cmd, true);
    sweep_cmd->add_option("--alpha", alpha, "stress level for X")->required();
    sweep_cmd->add_option("--beta", beta, "confidence level for Y (default: alpha)");
    sweep_cmd->add_option("--measure", measure_str, "comma list of measures")->required();
    sweep_cmd->add_option("--output,-o", output_path, "output file (default: stdout)");
    sweep_cmd->add_option("--format", format, "csv | json (default csv)");
    sweep_cmd->add_option("--seed", seed, "seed echoed into metadata");

    CLI::App* backtest_cmd = app.add_subcommand("backtest", "Monte Carlo violation-rate table");
    add_model_flags(backtest_cmd, false);
    backtest_cmd->add_option("--levels", levels_str, "comma list of alpha:beta pairs")->required();
    backtest_cmd->add_option("--n", n, "sample size per cell (default 1000000)");
    backtest_cmd->add_option("--seed", seed, "master seed");
    backtest_cmd->add_option("--threads", threads, "worker threads (default: hardware)");
    backtest_cmd->add_option("--output,-o", output_path, "output file (default: stdout)");
    backtest_cmd->add_option("--format", format, "csv | json (default csv)");

    CLI::App* cloud_cmd = app.add_subcommand("cloud", "sample cloud with threshold metadata");
    add_model_flags(cloud_cmd, true);
    cloud_cmd->add_option("--alpha", alpha, "stress level for X")->required();
    cloud_cmd->add_option("--beta", beta, "confidence level for Y (default: alpha)");
    cloud_cmd->add_option("--n", n, "sample size (default 2000)");
    cloud_cmd->add_option("--seed", seed, "seed");
    cloud_cmd->add_option("--output,-o", output_path, "output file (default: stdout)");

    CLI::App* verify_cmd = app.add_subcommand("verify", "run the dependence-consistency checks");
    verify_cmd->add_option("--points", verify_points, "sweep grid points (default 10)");
    verify_cmd->add_option("--grid-size", verify_grid, "concordance grid size (default 50)");
    verify_cmd->add_option("--seed", seed, "seed for the randomized sign check");
    verify_cmd->add_option("--output,-o", output_path, "output file (default: stdout)");

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    static const char* kProgram = "covar";
    argv.push_back(kProgram);
    for (const auto& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        const auto metadata = make_metadata(args, seed);
        if (beta < 0.0) beta = alpha;

        if (measure_cmd->parsed()) {
            const ModelFamily family = parse_family(family_str);
            const auto params = family_params(family, rho_str, theta_str);
            if (params.size() != 1)
                throw std::domain_error("measure expects a single dependence parameter");
            const MeasureKind kind = parse_measure(measure_str);
            const Levels lv(alpha, beta);
            const double value = evaluate_measure(kind, build_model(family, params[0], margins), lv);
            std::string out = metadata_block(metadata);
            if (format == "csv") {
                out += "family,param,alpha,beta,measure,value\n";
                out += family_name(family) + "," + fmt6(params[0]) + "," + fmt6(alpha) + "," +
                       fmt6(beta) + "," + measure_str + "," + fmt6(value) + "\n";
            } else if (format.empty() || format == "json") {
                ordered_json record{{"family", family_name(family)}, {"param", params[0]},
                                    {"alpha", alpha},                {"beta", beta},
                                    {"measure", measure_str},        {"value", value}};
                out += record.dump() + "\n";
            } else {
                throw std::domain_error("unknown format '" + format + "'");
            }
            write_output(output_path, out);
            return 0;
        }

        if (sweep_cmd->parsed()) {
            const ModelFamily family = parse_family(family_str);
            const auto params = family_params(family, rho_str, theta_str);
            std::vector<MeasureKind> kinds;
            for (const auto& name : split(measure_str, ',')) kinds.push_back(parse_measure(name));
            const Levels lv(alpha, beta);
            std::vector<std::vector<double>> values(params.size());
            for (std::size_t i = 0; i < params.size(); ++i) {
                const BivariateModel model = build_model(family, params[i], margins);
                for (MeasureKind kind : kinds)
                    values[i].push_back(evaluate_measure(kind, model, lv));
            }
            std::string out = metadata_block(metadata);
            if (format.empty() || format == "csv") {
                out += "family,param,alpha,beta";
                for (MeasureKind kind : kinds) out += "," + measure_name(kind);
                out += '\n';
                for (std::size_t i = 0; i < params.size(); ++i) {
                    out += family_name(family) + "," + fmt6(params[i]) + "," + fmt6(alpha) + "," +
                           fmt6(beta);
                    for (double v : values[i]) out += "," + fmt6(v);
                    out += '\n';
                }
            } else if (format == "json") {
                ordered_json records = ordered_json::array();
                for (std::size_t i = 0; i < params.size(); ++i) {
                    ordered_json record{{"family", family_name(family)},
                                        {"param", params[i]},
                                        {"alpha", alpha},
                                        {"beta", beta}};
                    for (std::size_t k = 0; k < kinds.size(); ++k)
                        record[measure_name(kinds[k])] = values[i][k];
                    records.push_back(record);
                }
                out += records.dump() + "\n";
            } else {
                throw std::domain_error("unknown format '" + format + "'");
            }
            write_output(output_path, out);
            return 0;
        }

        if (backtest_cmd->parsed()) {
            const ModelFamily family = parse_family(family_str);
            const auto params = family_params(family, rho_str, theta_str);
            const auto levels = parse_levels_list(levels_str);
            if (n == 0) n = 1000000;
            const auto rows = backtest::run_table(family, params, levels, n, seed, threads);
            std::string out;
            if (format.empty() || format == "csv") {
                std::ostringstream oss;
                backtest::write_csv(rows, oss, metadata);
                out = oss.str();
            } else if (format == "json") {
                out = metadata_block(metadata);
                ordered_json records = ordered_json::array();
                for (const auto& row : rows) {
                    records.push_back(ordered_json{
                        {"family", row.family},
                        {"param", row.param},
                        {"alpha", row.alpha},
                        {"beta", row.beta},
                        {"variant", backtest::variant_name(row.variant)},
                        {"n", row.n},
                        {"seed", row.report.seed},
                        {"conditioning_count", row.report.conditioning_count},
                        {"joint_count", row.report.joint_count},
                        {"violation_rate", row.report.violation_rate},
                        {"std_error", row.report.mc_std_error}});
                }
                out += records.dump() + "\n";
            } else {
                throw std::domain_error("unknown format '" + format + "'");
            }
            write_output(output_path, out);
            return 0;
        }

        if (cloud_cmd->parsed()) {
            const ModelFamily family = parse_family(family_str);
            const auto params = family_params(family, rho_str, theta_str);
            if (params.size() != 1)
                throw std::domain_error("cloud expects a single dependence parameter");
            if (!format.empty() && format != "csv")
                throw std::domain_error("cloud output is CSV only");
            if (n == 0) n = 2000;
            const Levels lv(alpha, beta);
            std::ostringstream oss;
            backtest::sample_cloud_export(build_model(family, params[0], margins), n, lv, seed,
                                          oss, metadata);
            write_output(output_path, oss.str());
            return 0;
        }

        if (verify_cmd->parsed()) {
            const std::string out = run_verify(verify_points, verify_grid, seed);
            write_output(output_path, metadata_block(metadata) + out);
            return out.find("VERIFY_FAILED") == std::string::npos ? 0 : 1;
        }

        return 1;  // unreachable: require_subcommand(1)
    } catch (const ConvergenceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

int run(int argc, const char* const* argv) {
    std::vector<std::string> args;
    args.reserve(argc > 0 ? argc - 1 : 0);
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args);
}

}  // namespace covar::cli
