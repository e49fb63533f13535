#pragma once

#include <string>
#include <vector>

#include "covar/model.hpp"

namespace covar {

// Risk measures assembled from marginals and copulas. Loss convention:
// positive values are losses. All functions are pure; errors surface as
// std::domain_error (bad inputs, divergent integrals, unsupported copula)
// or ConvergenceError (root finding / quadrature).

/// CoVaR with stress event {X >= VaR_alpha(X)}:
/// quantile_Y(cond_exceed_quantile(copula, alpha, beta)).
double covar_geq(const BivariateModel& m, const Levels& levels);

/// CoVaR with stress event {X = VaR_alpha(X)} (the original definition):
/// quantile_Y(cond_equal_quantile(copula, alpha, beta)).
double covar_eq(const BivariateModel& m, const Levels& levels);

/// Closed form of covar_eq in the bivariate Gaussian model:
/// mu_y + sigma_y (rho qn(alpha) + qn(beta) sqrt(1-rho^2)).
double covar_eq_gaussian_analytic(double mu_y, double sigma_y, double rho, const Levels& levels);

/// Stationary point of covar_eq_gaussian_analytic in rho:
/// |qn(alpha)| / sqrt(qn(alpha)^2 + qn(beta)^2). For beta = 1/2 the
/// derivative never vanishes inside (-1,1); the value 1 is the supremum.
/// Throws for alpha = beta = 1/2 (constant in rho).
double rho_critical(const Levels& levels);

/// CoES variants: tail average of the matching CoVaR over t in (beta,1),
/// composite Gauss-Legendre plus an analytic tail-correction term.
double coes_geq(const BivariateModel& m, const Levels& levels);
double coes_eq(const BivariateModel& m, const Levels& levels);

/// Marginal Expected Shortfall E[Y | X >= VaR_alpha(X)], computed as the
/// integral of covar_geq(m, (alpha, t)) over t in (0,1).
double mes(const BivariateModel& m, double alpha);

/// Systemic Impact Index for institution i given the pairwise copulas of
/// (Y_j, Y_i), j != i: 1 + sum_j (1 - 2 alpha + C_j(alpha,alpha))/(1-alpha).
double sii(const std::vector<Copula>& pairwise, double alpha);

/// Risk contribution measures based on covar_eq.
double dcovar(const BivariateModel& m, const Levels& levels);
double dmedcovar(const BivariateModel& m, const Levels& levels);

enum class CovarVariant { Eq, Geq };

/// Chosen CoVaR divided by VaR_alpha(Y); error when the denominator is zero.
double covar_ratio(const BivariateModel& m, const Levels& levels, CovarVariant variant);

/// Weighted CoES stress aggregate over several conditioning factors sharing
/// one target marginal.
struct StressAggregate {
    struct Component {
        BivariateModel model;
        double weight;
        double alpha;
    };
    std::vector<Component> components;
    double beta;

    /// True when the weights sum to 1 (the aggregate is then coherent).
    bool is_coherent(double tol = 1e-12) const;
};

double weighted_coes(const StressAggregate& aggregate);

/// Named measure selector used by sweeps and the CLI.
enum class MeasureKind {
    CovarGeq,
    CovarEq,
    CoesGeq,
    CoesEq,
    Mes,
    Dcovar,
    Dmedcovar,
    CovarRatioGeq,
    CovarRatioEq,
};

MeasureKind parse_measure(const std::string& name);
std::string measure_name(MeasureKind kind);
double evaluate_measure(MeasureKind kind, const BivariateModel& m, const Levels& levels);

}  // namespace covar
