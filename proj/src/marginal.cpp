#include "covar/marginal.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "covar/errors.hpp"
#include "covar/numerics.hpp"

namespace covar {

namespace {

constexpr double kTailDelta = 1e-7;  // quadrature stops here; exact tail term beyond
constexpr int kPanels = 16;

}  // namespace

Marginal::Marginal(Kind kind, double location, double scale, double nu)
    : kind_(kind), location_(location), scale_(scale), nu_(nu) {
    if (!(scale > 0.0)) throw std::domain_error("Marginal: scale must be positive");
    if (kind == Kind::StudentT && !(nu > 0.0))
        throw std::domain_error("Marginal: degrees_of_freedom must be positive");
}

Marginal Marginal::normal(double location, double scale) {
    return Marginal(Kind::Normal, location, scale, 0.0);
}

Marginal Marginal::student_t(double degrees_of_freedom, double location, double scale) {
    return Marginal(Kind::StudentT, location, scale, degrees_of_freedom);
}

double Marginal::cdf(double x) const {
    const double z = (x - location_) / scale_;
    return kind_ == Kind::Normal ? num::normal_cdf(z) : num::student_t_cdf(z, nu_);
}

double Marginal::pdf(double x) const {
    const double z = (x - location_) / scale_;
    const double d = kind_ == Kind::Normal ? num::normal_pdf(z) : num::student_t_pdf(z, nu_);
    return d / scale_;
}

double Marginal::quantile(double p) const {
    if (!(p > 0.0 && p < 1.0)) throw std::domain_error("Marginal::quantile: p must be in (0,1)");
    const double z =
        kind_ == Kind::Normal ? num::normal_quantile(p) : num::student_t_quantile(p, nu_);
    return location_ + scale_ * z;
}

double Marginal::upper_tail_integral(double p) const {
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("Marginal::upper_tail_integral: p must be in (0,1)");
    if (kind_ == Kind::Normal) {
        return location_ * (1.0 - p) + scale_ * num::normal_pdf(num::normal_quantile(p));
    }
    if (!(nu_ > 1.0))
        throw std::domain_error("Marginal: tail integral diverges for degrees_of_freedom <= 1");
    const double z = num::student_t_quantile(p, nu_);
    return location_ * (1.0 - p) +
           scale_ * (nu_ + z * z) / (nu_ - 1.0) * num::student_t_pdf(z, nu_);
}

double Marginal::lower_tail_integral(double p) const {
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("Marginal::lower_tail_integral: p must be in (0,1)");
    if (kind_ == Kind::Normal) {
        return location_ * p - scale_ * num::normal_pdf(num::normal_quantile(p));
    }
    if (!(nu_ > 1.0))
        throw std::domain_error("Marginal: tail integral diverges for degrees_of_freedom <= 1");
    const double z = num::student_t_quantile(p, nu_);
    return location_ * p - scale_ * (nu_ + z * z) / (nu_ - 1.0) * num::student_t_pdf(z, nu_);
}

double Marginal::expected_shortfall(double beta) const {
    if (!(beta > 0.0 && beta < 1.0))
        throw std::domain_error("Marginal::expected_shortfall: beta must be in (0,1)");
    if (kind_ == Kind::StudentT) {
        if (!(nu_ > 1.0))
            throw std::domain_error(
                "Marginal::expected_shortfall: diverges for degrees_of_freedom <= 1");
        // ES in closed form; the quadrature route below is kept for Normal and
        // cross-checked against this expression in the tests.
        const double z = num::student_t_quantile(beta, nu_);
        return location_ + scale_ * (nu_ + z * z) / (nu_ - 1.0) * num::student_t_pdf(z, nu_) /
                               (1.0 - beta);
    }
    const double hi = 1.0 - kTailDelta;
    if (beta >= hi) {  // everything past the quadrature window is exact anyway
        return upper_tail_integral(beta) / (1.0 - beta);
    }
    const auto q = [this](double t) { return quantile(t); };
    const auto breaks = num::graded_breakpoints(beta, hi, kPanels, 3.0 * kTailDelta, false, true);
    const double tail = upper_tail_integral(hi);
    double prev = 0.0;
    for (int m = 16; m <= 128; m *= 2) {
        const double value = (num::integrate_panels(q, breaks, m) + tail) / (1.0 - beta);
        if (m > 16 && std::fabs(value - prev) <= 1e-7 * (1.0 + std::fabs(value))) return value;
        prev = value;
    }
    throw ConvergenceError("Marginal::expected_shortfall: quadrature did not settle");
}

std::string Marginal::description() const {
    char buf[96];
    if (kind_ == Kind::Normal) {
        std::snprintf(buf, sizeof(buf), "normal(mu=%g,sigma=%g)", location_, scale_);
    } else {
        std::snprintf(buf, sizeof(buf), "student_t(nu=%g,loc=%g,scale=%g)", nu_, location_,
                      scale_);
    }
    return buf;
}

}  // namespace covar
