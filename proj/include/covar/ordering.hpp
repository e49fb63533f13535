#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "covar/measures.hpp"
#include "covar/model.hpp"

namespace covar::ordering {

/// Witness of a concordance-order violation on the check grid.
struct ConcordanceViolation {
    double u;
    double v;
    double gap;  // C1(u,v) - C2(u,v) > tol
};

struct ConcordanceResult {
    std::optional<ConcordanceViolation> violation;  // empty when ordered
    bool ordered() const { return !violation.has_value(); }
};

/// Grid check of C1(u,v) <= C2(u,v) + tol on the interior lattice
/// u,v in {i/(grid_size+1)}. A falsification tool, not a proof: returns the
/// first violation found, scanning row-major.
ConcordanceResult concordance_leq(const Copula& c1, const Copula& c2, std::size_t grid_size,
                                  double tol = 1e-12);

/// Measure values along a sorted dependence-parameter grid, with the indices
/// of adjacent decreases that exceed the noise tolerance.
struct SweepResult {
    std::vector<double> params;
    std::vector<double> values;
    std::vector<std::pair<std::size_t, std::size_t>> violations;

    bool monotone() const { return violations.empty(); }
};

/// Evaluates the selected measure along the grid for the given family.
/// A decrease counts as a violation when it exceeds tol*(1+|value|).
SweepResult monotonicity_sweep(ModelFamily family, const std::vector<double>& param_grid,
                               MeasureKind measure, const Levels& levels, double tol = 1e-7);

/// Sign of the rho-derivative of the Gaussian covar_eq,
/// sgn(qn(alpha) - rho qn(beta)/sqrt(1-rho^2)); zero within 1e-12.
int gaussian_derivative_sign(double rho, const Levels& levels);

/// beta0(c, alpha) = (1/2 - C(alpha,1/2)) / (1-alpha), the lower beta bound
/// for the scale-ordered comparison result.
double beta0(const Copula& c, double alpha);

}  // namespace covar::ordering
