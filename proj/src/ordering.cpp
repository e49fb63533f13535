#include "covar/ordering.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "covar/numerics.hpp"

namespace covar::ordering {

ConcordanceResult concordance_leq(const Copula& c1, const Copula& c2, std::size_t grid_size,
                                  double tol) {
    if (grid_size < 2) throw std::domain_error("concordance_leq: grid_size must be at least 2");
    for (std::size_t i = 1; i <= grid_size; ++i) {
        const double u = static_cast<double>(i) / (grid_size + 1);
        for (std::size_t j = 1; j <= grid_size; ++j) {
            const double v = static_cast<double>(j) / (grid_size + 1);
            const double gap = c1.cdf(u, v) - c2.cdf(u, v);
            if (gap > tol) return {ConcordanceViolation{u, v, gap}};
        }
    }
    return {std::nullopt};
}

SweepResult monotonicity_sweep(ModelFamily family, const std::vector<double>& param_grid,
                               MeasureKind measure, const Levels& levels, double tol) {
    if (!std::is_sorted(param_grid.begin(), param_grid.end())) {
        throw std::domain_error("monotonicity_sweep: parameter grid must be sorted");
    }
    SweepResult result;
    result.params = param_grid;
    result.values.reserve(param_grid.size());
    for (double p : param_grid) {
        result.values.push_back(evaluate_measure(measure, make_model(family, p), levels));
    }
    for (std::size_t i = 0; i + 1 < result.values.size(); ++i) {
        const double a = result.values[i];
        const double b = result.values[i + 1];
        if (a - b > tol * (1.0 + std::max(std::fabs(a), std::fabs(b)))) {
            result.violations.emplace_back(i, i + 1);
        }
    }
    return result;
}

int gaussian_derivative_sign(double rho, const Levels& levels) {
    if (!(rho > -1.0 && rho < 1.0))
        throw std::domain_error("gaussian_derivative_sign: rho must lie in (-1,1)");
    const double za = num::normal_quantile(levels.alpha);
    const double zb = num::normal_quantile(levels.beta);
    const double d = za - rho * zb / std::sqrt((1.0 - rho) * (1.0 + rho));
    if (std::fabs(d) <= 1e-12) return 0;
    return d > 0.0 ? 1 : -1;
}

double beta0(const Copula& c, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::domain_error("beta0: alpha must be in (0,1)");
    const double value = (0.5 - c.cdf(alpha, 0.5)) / (1.0 - alpha);
    return std::clamp(value, 0.0, 1.0);
}

}  // namespace covar::ordering
