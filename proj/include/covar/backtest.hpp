#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "covar/measures.hpp"
#include "covar/model.hpp"

namespace covar::backtest {

enum class Variant { Eq, Geq };

std::string variant_name(Variant v);
Variant parse_variant(const std::string& name);

/// One Monte Carlo backtesting cell: a model, a level pair, the CoVaR
/// variant under test and its precomputed threshold.
struct BacktestCell {
    BivariateModel model;
    Levels levels;
    Variant variant;
    double threshold;  // model-implied CoVaR value for (levels, variant)
    std::size_t n;
    std::uint64_t seed;
};

/// Exceedance counts for one cell. violation_rate = joint/conditioning,
/// mc_std_error = sqrt(r(1-r)/conditioning_count).
struct BacktestReport {
    std::size_t conditioning_count = 0;  // #{X_i >= VaR_alpha(X)}
    std::size_t joint_count = 0;         // #{Y_i >= threshold, X_i >= VaR_alpha(X)}
    double violation_rate = 0.0;
    double mc_std_error = 0.0;
    std::string rng_algorithm;
    std::uint64_t seed = 0;
};

/// Report labelled with its grid coordinates, one CSV row.
struct TableRow {
    std::string family;
    double param;
    double alpha;
    double beta;
    Variant variant;
    std::size_t n;
    BacktestReport report;
};

/// n i.i.d. draws of (x,y). Gaussian and matching-nu t models use the direct
/// construction (Cholesky factor of the correlation, chi-square mixing for t);
/// anything else samples the copula and pushes through the marginal
/// quantiles. Deterministic per seed.
std::vector<std::pair<double, double>> sample_model(const BivariateModel& m, std::size_t n,
                                                    std::uint64_t seed);

/// Counts exceedances for one cell (streaming; the sample is regenerated
/// from cell.seed). Errors when the conditioning count is zero.
BacktestReport violation_rate(const BacktestCell& cell);

/// Full grid: one report per (param, levels, variant), both variants.
/// Cell seeds are derived as seed XOR splitmix64(cell_index) with cells in
/// canonical (param, alpha, beta, variant) order; rows come back in that
/// order regardless of scheduling. threads = 0 picks the hardware count.
std::vector<TableRow> run_table(ModelFamily family, std::vector<double> params,
                                std::vector<Levels> levels, std::size_t n, std::uint64_t seed,
                                unsigned threads = 0);

/// CSV per the file contract: UTF-8, '#'-prefixed metadata lines, header row
/// family,param,alpha,beta,variant,n,seed,conditioning_count,joint_count,
/// violation_rate,std_error; floats with 6 significant digits.
void write_csv(const std::vector<TableRow>& rows, std::ostream& os,
               const std::vector<std::string>& metadata = {});

/// Sample cloud for the scatter figures: metadata block carrying
/// VaR_alpha(X) and both CoVaR thresholds, then x,y rows.
void sample_cloud_export(const BivariateModel& m, std::size_t n, const Levels& levels,
                         std::uint64_t seed, std::ostream& os,
                         const std::vector<std::string>& metadata = {});

/// Same, writing to a file; I/O failures carry the path in the message.
void sample_cloud_export(const BivariateModel& m, std::size_t n, const Levels& levels,
                         std::uint64_t seed, const std::string& path,
                         const std::vector<std::string>& metadata = {});

}  // namespace covar::backtest
