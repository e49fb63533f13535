#include "covar/measures.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "covar/errors.hpp"
#include "covar/numerics.hpp"

namespace covar {

namespace {

constexpr double kDelta = 1e-7;  // quadrature window ends this far from {0,1}
constexpr int kPanels = 16;

double clamp_unit_open(double v) { return std::clamp(v, 1e-15, 1.0 - 1e-15); }

// Mean of t -> quantile_Y(cond_quantile(alpha,t)) over t in (beta,1).
// Composite Gauss-Legendre on (beta, 1-delta), panels graded toward the
// upper end, plus the analytic tail term
//   int_{1-delta}^1 q_Y(g(t)) dt ~ delta * T_Y(g(1-delta)) / (1 - g(1-delta)),
// which treats the conditional weight as locally constant and uses the exact
// marginal tail integral T_Y. Node counts double until two consecutive
// estimates agree to 1e-7*(1+|value|).
double conditional_tail_mean(const BivariateModel& m, double alpha, double beta, bool exceed) {
    const Copula& c = m.copula;
    const Marginal& y = m.marginal_y;
    const double hi = 1.0 - kDelta;
    const auto cond_quantile = [&](double t, double hint) {
        return exceed ? c.cond_exceed_quantile(alpha, t, hint)
                      : c.cond_equal_quantile(alpha, t, hint);
    };

    if (beta >= hi) {  // the whole range sits inside the analytic tail regime
        const double v_b = clamp_unit_open(cond_quantile(beta, 0.0));
        return y.upper_tail_integral(v_b) / (1.0 - v_b);
    }
    const double v_hi = clamp_unit_open(cond_quantile(hi, 0.0));
    const double tail = kDelta * y.upper_tail_integral(v_hi) / (1.0 - v_hi);

    const auto breaks = num::graded_breakpoints(beta, hi, kPanels, 3.0 * kDelta, false, true);
    double prev = 0.0;
    for (int nodes = 16; nodes <= 128; nodes *= 2) {
        double last_v = 0.0;  // nodes are visited in increasing t
        const auto integrand = [&](double t) {
            last_v = cond_quantile(t, last_v);
            return y.quantile(clamp_unit_open(last_v));
        };
        const double value = (num::integrate_panels(integrand, breaks, nodes) + tail) /
                             (1.0 - beta);
        if (nodes > 16 && std::fabs(value - prev) <= 1e-7 * (1.0 + std::fabs(value)))
            return value;
        prev = value;
    }
    throw ConvergenceError("coes: quadrature did not settle");
}

void require_finite_mean(const Marginal& y, const char* what) {
    if (y.kind() == Marginal::Kind::StudentT && !(y.degrees_of_freedom() > 1.0)) {
        throw std::domain_error(std::string(what) +
                                ": diverges, marginal_y has no finite mean (nu <= 1)");
    }
}

}  // namespace

double covar_geq(const BivariateModel& m, const Levels& levels) {
    return m.marginal_y.quantile(
        clamp_unit_open(m.copula.cond_exceed_quantile(levels.alpha, levels.beta)));
}

double covar_eq(const BivariateModel& m, const Levels& levels) {
    return m.marginal_y.quantile(
        clamp_unit_open(m.copula.cond_equal_quantile(levels.alpha, levels.beta)));
}

double covar_eq_gaussian_analytic(double mu_y, double sigma_y, double rho, const Levels& levels) {
    if (!(sigma_y > 0.0))
        throw std::domain_error("covar_eq_gaussian_analytic: sigma_y must be positive");
    if (!(rho > -1.0 && rho < 1.0))
        throw std::domain_error("covar_eq_gaussian_analytic: rho must lie in (-1,1)");
    const double za = num::normal_quantile(levels.alpha);
    const double zb = num::normal_quantile(levels.beta);
    return mu_y + sigma_y * (rho * za + zb * std::sqrt((1.0 - rho) * (1.0 + rho)));
}

double rho_critical(const Levels& levels) {
    const double za = num::normal_quantile(levels.alpha);
    const double zb = num::normal_quantile(levels.beta);
    if (za == 0.0 && zb == 0.0) {
        throw std::domain_error("rho_critical: covar_eq is constant in rho at alpha=beta=1/2");
    }
    if (zb == 0.0) return 1.0;  // derivative never vanishes; supremum of the domain
    return std::fabs(za) / std::hypot(za, zb);
}

double coes_geq(const BivariateModel& m, const Levels& levels) {
    require_finite_mean(m.marginal_y, "coes_geq");
    return conditional_tail_mean(m, levels.alpha, levels.beta, /*exceed=*/true);
}

double coes_eq(const BivariateModel& m, const Levels& levels) {
    require_finite_mean(m.marginal_y, "coes_eq");
    return conditional_tail_mean(m, levels.alpha, levels.beta, /*exceed=*/false);
}

double mes(const BivariateModel& m, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::domain_error("mes: alpha must be in (0,1)");
    require_finite_mean(m.marginal_y, "mes");
    const Copula& c = m.copula;
    const Marginal& y = m.marginal_y;

    const double v_hi = clamp_unit_open(c.cond_exceed_quantile(alpha, 1.0 - kDelta));
    const double tail_hi = kDelta * y.upper_tail_integral(v_hi) / (1.0 - v_hi);
    const double v_lo = clamp_unit_open(c.cond_exceed_quantile(alpha, kDelta));
    const double tail_lo = kDelta * y.lower_tail_integral(v_lo) / v_lo;

    const auto breaks =
        num::graded_breakpoints(kDelta, 1.0 - kDelta, kPanels, 3.0 * kDelta, true, true);
    double prev = 0.0;
    for (int nodes = 16; nodes <= 128; nodes *= 2) {
        double last_v = 0.0;
        const auto integrand = [&](double t) {
            last_v = c.cond_exceed_quantile(alpha, t, last_v);
            return y.quantile(clamp_unit_open(last_v));
        };
        const double value = num::integrate_panels(integrand, breaks, nodes) + tail_lo + tail_hi;
        if (nodes > 16 && std::fabs(value - prev) <= 1e-7 * (1.0 + std::fabs(value)))
            return value;
        prev = value;
    }
    throw ConvergenceError("mes: quadrature did not settle");
}

double sii(const std::vector<Copula>& pairwise, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::domain_error("sii: alpha must be in (0,1)");
    double total = 1.0;
    for (const Copula& c : pairwise) {
        total += (1.0 - 2.0 * alpha + c.cdf(alpha, alpha)) / (1.0 - alpha);
    }
    return total;
}

double dcovar(const BivariateModel& m, const Levels& levels) {
    return covar_eq(m, levels) - m.marginal_y.value_at_risk(levels.beta);
}

double dmedcovar(const BivariateModel& m, const Levels& levels) {
    const double med_conditional = m.marginal_y.quantile(
        clamp_unit_open(m.copula.cond_equal_quantile(0.5, levels.beta)));
    return covar_eq(m, levels) - med_conditional;
}

double covar_ratio(const BivariateModel& m, const Levels& levels, CovarVariant variant) {
    const double denom = m.marginal_y.value_at_risk(levels.alpha);
    if (std::fabs(denom) <= 1e-12 * m.marginal_y.scale()) {
        throw std::domain_error("covar_ratio: VaR_alpha(Y) is zero, ratio undefined");
    }
    const double numer =
        variant == CovarVariant::Eq ? covar_eq(m, levels) : covar_geq(m, levels);
    return numer / denom;
}

bool StressAggregate::is_coherent(double tol) const {
    double sum = 0.0;
    for (const auto& comp : components) sum += comp.weight;
    return std::fabs(sum - 1.0) <= tol;
}

double weighted_coes(const StressAggregate& aggregate) {
    if (aggregate.components.empty())
        throw std::domain_error("weighted_coes: aggregate has no components");
    const Marginal& y0 = aggregate.components.front().model.marginal_y;
    double total = 0.0;
    for (const auto& comp : aggregate.components) {
        if (!(comp.weight >= 0.0))
            throw std::domain_error("weighted_coes: weights must be nonnegative");
        if (!(comp.model.marginal_y == y0))
            throw std::domain_error("weighted_coes: components must share marginal_y");
        total += comp.weight * coes_geq(comp.model, Levels(comp.alpha, aggregate.beta));
    }
    return total;
}

MeasureKind parse_measure(const std::string& name) {
    if (name == "covar_geq") return MeasureKind::CovarGeq;
    if (name == "covar_eq") return MeasureKind::CovarEq;
    if (name == "coes_geq") return MeasureKind::CoesGeq;
    if (name == "coes_eq") return MeasureKind::CoesEq;
    if (name == "mes") return MeasureKind::Mes;
    if (name == "dcovar") return MeasureKind::Dcovar;
    if (name == "dmedcovar") return MeasureKind::Dmedcovar;
    if (name == "covar_ratio_geq") return MeasureKind::CovarRatioGeq;
    if (name == "covar_ratio_eq") return MeasureKind::CovarRatioEq;
    throw std::domain_error("unknown measure '" + name + "'");
}

std::string measure_name(MeasureKind kind) {
    switch (kind) {
        case MeasureKind::CovarGeq:
            return "covar_geq";
        case MeasureKind::CovarEq:
            return "covar_eq";
        case MeasureKind::CoesGeq:
            return "coes_geq";
        case MeasureKind::CoesEq:
            return "coes_eq";
        case MeasureKind::Mes:
            return "mes";
        case MeasureKind::Dcovar:
            return "dcovar";
        case MeasureKind::Dmedcovar:
            return "dmedcovar";
        case MeasureKind::CovarRatioGeq:
            return "covar_ratio_geq";
        case MeasureKind::CovarRatioEq:
            return "covar_ratio_eq";
    }
    return "";
}

double evaluate_measure(MeasureKind kind, const BivariateModel& m, const Levels& levels) {
    switch (kind) {
        case MeasureKind::CovarGeq:
            return covar_geq(m, levels);
        case MeasureKind::CovarEq:
            return covar_eq(m, levels);
        case MeasureKind::CoesGeq:
            return coes_geq(m, levels);
        case MeasureKind::CoesEq:
            return coes_eq(m, levels);
        case MeasureKind::Mes:
            return mes(m, levels.alpha);
        case MeasureKind::Dcovar:
            return dcovar(m, levels);
        case MeasureKind::Dmedcovar:
            return dmedcovar(m, levels);
        case MeasureKind::CovarRatioGeq:
            return covar_ratio(m, levels, CovarVariant::Geq);
        case MeasureKind::CovarRatioEq:
            return covar_ratio(m, levels, CovarVariant::Eq);
    }
    throw std::domain_error("evaluate_measure: unknown measure");
}

}  // namespace covar
