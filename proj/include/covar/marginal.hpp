#pragma once

#include <string>

namespace covar {

/// Univariate loss distribution: Normal(location, scale) or Student-t with
/// location/scale and degrees_of_freedom. Immutable after construction; all
/// member functions are pure and thread-safe.
class Marginal {
  public:
    enum class Kind { Normal, StudentT };

    static Marginal normal(double location, double scale);
    static Marginal student_t(double degrees_of_freedom, double location = 0.0,
                              double scale = 1.0);

    Kind kind() const { return kind_; }
    double location() const { return location_; }
    double scale() const { return scale_; }
    double degrees_of_freedom() const { return nu_; }

    double cdf(double x) const;
    double pdf(double x) const;

    /// Generalized inverse of the CDF; p must lie in (0,1).
    double quantile(double p) const;

    /// VaR_alpha = quantile(alpha).
    double value_at_risk(double alpha) const { return quantile(alpha); }

    /// ES_beta = (1/(1-beta)) * integral of quantile(t) over (beta,1).
    /// Normal: composite quadrature with the exact tail term. Student-t:
    /// closed form, requires degrees_of_freedom > 1.
    double expected_shortfall(double beta) const;

    /// Exact partial integrals of the quantile function,
    /// upper_tail_integral(p) = int_p^1 quantile(t) dt and
    /// lower_tail_integral(p) = int_0^p quantile(t) dt.
    /// Used for the tail corrections of the CoES/MES quadratures.
    double upper_tail_integral(double p) const;
    double lower_tail_integral(double p) const;

    bool operator==(const Marginal& other) const = default;

    std::string description() const;

  private:
    Marginal(Kind kind, double location, double scale, double nu);

    Kind kind_;
    double location_;
    double scale_;
    double nu_;  // meaningful for StudentT only
};

}  // namespace covar
