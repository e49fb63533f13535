#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace covar::num {

// ---------------------------------------------------------------------------
// Univariate kernels
// ---------------------------------------------------------------------------

double normal_pdf(double x);

/// Standard normal CDF, full double accuracy (erfc based).
double normal_cdf(double x);

/// Standard normal quantile (AS 241, refined by one Newton step against the
/// CDF). Throws std::domain_error unless p is in (0,1).
double normal_quantile(double p);

/// Regularized incomplete beta function I_x(a,b), continued-fraction
/// evaluation (Lentz), absolute tolerance ~1e-15.
double incomplete_beta(double a, double b, double x);

/// CDF/pdf/quantile of the standard Student-t with nu > 0 degrees of freedom.
/// The CDF routes through the regularized incomplete beta; nu in {1,2,3,4}
/// use the elementary closed forms (hot paths for the t(3) models and their
/// nu+1 conditionals).
double student_t_cdf(double x, double nu);
double student_t_pdf(double x, double nu);
double student_t_quantile(double p, double nu);

// ---------------------------------------------------------------------------
// Quadrature
// ---------------------------------------------------------------------------

struct GaussLegendre {
    std::vector<double> nodes;    // on (-1, 1)
    std::vector<double> weights;  // sum to 2
};

/// Cached Gauss-Legendre rule with n points.
const GaussLegendre& gauss_legendre(int n);

/// Integral of f over [a,b] by adaptive Gauss-Legendre panels (15-point rule,
/// refine-and-compare bisection). Throws ConvergenceError when the panel
/// budget is exhausted before the absolute tolerance is met.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double abs_tol, int max_panels = 4000);

/// Breakpoints for a composite rule on [a,b] with n_panels panels whose
/// lengths shrink geometrically toward the graded end(s) down to edge_gap.
std::vector<double> graded_breakpoints(double a, double b, int n_panels, double edge_gap,
                                       bool grade_lower, bool grade_upper);

/// Composite Gauss-Legendre integral over consecutive [breaks[i], breaks[i+1]]
/// panels, m points per panel.
double integrate_panels(const std::function<double(double)>& f, const std::vector<double>& breaks,
                        int m);

// ---------------------------------------------------------------------------
// Root finding
// ---------------------------------------------------------------------------

struct InvertOptions {
    double f_tol = 5e-14;       // stop once |f(x) - target| is below this
    double accept_tol = 1e-10;  // contract: error beyond this raises
    int max_iter = 200;
};

/// Solves f(x) = target for a nondecreasing f on the bracket [lo, hi]
/// (f(lo) <= target <= f(hi) up to tolerance). Bisection with secant
/// (Illinois) acceleration; flat stretches of f are handled by the
/// bracketing. Throws ConvergenceError if the budget is exhausted while
/// |f(x) - target| > accept_tol.
double invert_increasing(const std::function<double(double)>& f, double target, double lo,
                         double hi, const InvertOptions& opts = {});

// ---------------------------------------------------------------------------
// Misc
// ---------------------------------------------------------------------------

/// SplitMix64 finalizer; used to decorrelate derived RNG seeds.
std::uint64_t splitmix64(std::uint64_t x);

}  // namespace covar::num
