#include "covar/backtest.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "covar/numerics.hpp"
#include "covar/rng.hpp"

namespace covar::backtest {

namespace {

std::function<std::pair<double, double>(Rng&)> make_pair_sampler(const BivariateModel& m) {
    const Copula& c = m.copula;
    const Marginal& mx = m.marginal_x;
    const Marginal& my = m.marginal_y;

    if (c.kind() == Copula::Kind::Gaussian && mx.kind() == Marginal::Kind::Normal &&
        my.kind() == Marginal::Kind::Normal) {
        const double rho = c.rho();
        const double tau = std::sqrt((1.0 - rho) * (1.0 + rho));
        return [=](Rng& rng) {
            const double z1 = rng.normal();
            const double z2 = rng.normal();
            return std::make_pair(mx.location() + mx.scale() * z1,
                                  my.location() + my.scale() * (rho * z1 + tau * z2));
        };
    }
    if (c.kind() == Copula::Kind::StudentT && mx.kind() == Marginal::Kind::StudentT &&
        my.kind() == Marginal::Kind::StudentT && mx.degrees_of_freedom() == c.nu() &&
        my.degrees_of_freedom() == c.nu()) {
        const double rho = c.rho();
        const double nu = c.nu();
        const double tau = std::sqrt((1.0 - rho) * (1.0 + rho));
        return [=](Rng& rng) {
            const double z1 = rng.normal();
            const double z2 = rng.normal();
            const double mix = std::sqrt(nu / rng.chi_squared(nu));
            return std::make_pair(mx.location() + mx.scale() * mix * z1,
                                  my.location() + my.scale() * mix * (rho * z1 + tau * z2));
        };
    }
    return [=](Rng& rng) {
        const auto [u, v] = c.draw(rng);
        return std::make_pair(mx.quantile(u), my.quantile(v));
    };
}

void run_parallel(std::size_t n_items, unsigned threads, const std::function<void(std::size_t)>& fn) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, n_items));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n_items; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::mutex error_mutex;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n_items) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

void append_float(std::string& out, double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", x);
    out += buf;
}

}  // namespace

std::string variant_name(Variant v) { return v == Variant::Eq ? "eq" : "geq"; }

Variant parse_variant(const std::string& name) {
    if (name == "eq") return Variant::Eq;
    if (name == "geq") return Variant::Geq;
    throw std::domain_error("unknown variant '" + name + "' (expected eq or geq)");
}

std::vector<std::pair<double, double>> sample_model(const BivariateModel& m, std::size_t n,
                                                    std::uint64_t seed) {
    if (n < 1) throw std::domain_error("sample_model: n must be at least 1");
    const auto sampler = make_pair_sampler(m);
    Rng rng(seed);
    std::vector<std::pair<double, double>> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(sampler(rng));
    return out;
}

BacktestReport violation_rate(const BacktestCell& cell) {
    if (cell.n < 1) throw std::domain_error("violation_rate: n must be at least 1");
    if (!std::isfinite(cell.threshold))
        throw std::domain_error("violation_rate: threshold must be finite");
    const double var_x = cell.model.marginal_x.value_at_risk(cell.levels.alpha);
    const auto sampler = make_pair_sampler(cell.model);
    Rng rng(cell.seed);
    std::size_t conditioning = 0;
    std::size_t joint = 0;
    for (std::size_t i = 0; i < cell.n; ++i) {
        const auto [x, y] = sampler(rng);
        if (x >= var_x) {
            ++conditioning;
            if (y >= cell.threshold) ++joint;
        }
    }
    if (conditioning == 0) {
        throw std::runtime_error(
            "violation_rate: no conditioning exceedances (n too small for this alpha)");
    }
    BacktestReport report;
    report.conditioning_count = conditioning;
    report.joint_count = joint;
    report.violation_rate = static_cast<double>(joint) / static_cast<double>(conditioning);
    report.mc_std_error = std::sqrt(report.violation_rate * (1.0 - report.violation_rate) /
                                    static_cast<double>(conditioning));
    report.rng_algorithm = std::string(Rng::algorithm());
    report.seed = cell.seed;
    return report;
}

std::vector<TableRow> run_table(ModelFamily family, std::vector<double> params,
                                std::vector<Levels> levels, std::size_t n, std::uint64_t seed,
                                unsigned threads) {
    for (double p : params) {
        if (!param_in_family_domain(family, p)) {
            throw std::domain_error("run_table: parameter " + std::to_string(p) +
                                    " outside the domain of family " + family_name(family));
        }
    }
    std::sort(params.begin(), params.end());
    std::sort(levels.begin(), levels.end(), [](const Levels& a, const Levels& b) {
        return a.alpha != b.alpha ? a.alpha < b.alpha : a.beta < b.beta;
    });
    constexpr Variant kVariants[] = {Variant::Eq, Variant::Geq};

    struct CellSpec {
        double param;
        Levels levels;
        Variant variant;
    };
    std::vector<CellSpec> specs;
    specs.reserve(params.size() * levels.size() * 2);
    for (double p : params) {
        for (const Levels& lv : levels) {
            for (Variant v : kVariants) specs.push_back({p, lv, v});
        }
    }

    std::vector<TableRow> rows(specs.size());
    run_parallel(specs.size(), threads, [&](std::size_t i) {
        const CellSpec& spec = specs[i];
        const BivariateModel model = make_model(family, spec.param);
        const double threshold = spec.variant == Variant::Eq ? covar_eq(model, spec.levels)
                                                             : covar_geq(model, spec.levels);
        BacktestCell cell{model,     spec.levels, spec.variant,
                          threshold, n,           Rng::derive_seed(seed, i)};
        rows[i] = TableRow{family_name(family), spec.param,   spec.levels.alpha,
                           spec.levels.beta,    spec.variant, n,
                           violation_rate(cell)};
    });
    return rows;
}

void write_csv(const std::vector<TableRow>& rows, std::ostream& os,
               const std::vector<std::string>& metadata) {
    std::string out;
    for (const auto& line : metadata) {
        out += "# ";
        out += line;
        out += '\n';
    }
    out +=
        "family,param,alpha,beta,variant,n,seed,conditioning_count,joint_count,"
        "violation_rate,std_error\n";
    for (const auto& row : rows) {
        out += row.family;
        out += ',';
        append_float(out, row.param);
        out += ',';
        append_float(out, row.alpha);
        out += ',';
        append_float(out, row.beta);
        out += ',';
        out += variant_name(row.variant);
        out += ',';
        out += std::to_string(row.n);
        out += ',';
        out += std::to_string(row.report.seed);
        out += ',';
        out += std::to_string(row.report.conditioning_count);
        out += ',';
        out += std::to_string(row.report.joint_count);
        out += ',';
        append_float(out, row.report.violation_rate);
        out += ',';
        append_float(out, row.report.mc_std_error);
        out += '\n';
    }
    os << out;
}

void sample_cloud_export(const BivariateModel& m, std::size_t n, const Levels& levels,
                         std::uint64_t seed, std::ostream& os,
                         const std::vector<std::string>& metadata) {
    if (n < 1) throw std::domain_error("sample_cloud_export: n must be at least 1");
    const double var_x = m.marginal_x.value_at_risk(levels.alpha);
    const double eq = covar_eq(m, levels);
    const double geq = covar_geq(m, levels);

    std::string out;
    for (const auto& line : metadata) {
        out += "# ";
        out += line;
        out += '\n';
    }
    const auto threshold_line = [&out](const char* name, double value) {
        out += "# ";
        out += name;
        out += '=';
        append_float(out, value);
        out += '\n';
    };
    threshold_line("var_x_alpha", var_x);
    threshold_line("covar_eq", eq);
    threshold_line("covar_geq", geq);
    out += "x,y\n";
    const auto points = sample_model(m, n, seed);
    for (const auto& [x, y] : points) {
        append_float(out, x);
        out += ',';
        append_float(out, y);
        out += '\n';
    }
    os << out;
}

void sample_cloud_export(const BivariateModel& m, std::size_t n, const Levels& levels,
                         std::uint64_t seed, const std::string& path,
                         const std::vector<std::string>& metadata) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error("sample_cloud_export: cannot open '" + path + "'");
    sample_cloud_export(m, n, levels, seed, file, metadata);
    if (!file) throw std::runtime_error("sample_cloud_export: write failed for '" + path + "'");
}

}  // namespace covar::backtest
