#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "covar/rng.hpp"

namespace covar {

/// Bivariate copula: Gaussian(rho), Student-t(rho,nu), Gumbel(theta),
/// Independence or Comonotone. Values are immutable; CDF and quantile
/// operations are pure and thread-safe. theta = infinity and rho = +/-1 are
/// represented by the dedicated Comonotone kind.
class Copula {
  public:
    enum class Kind { Gaussian, StudentT, Gumbel, Independence, Comonotone };

    static Copula gaussian(double rho);
    static Copula student_t(double rho, double nu);
    static Copula gumbel(double theta);
    static Copula independence();
    static Copula comonotone();

    Kind kind() const { return kind_; }
    double rho() const { return rho_; }
    double nu() const { return nu_; }
    double theta() const { return theta_; }

    /// C(u,v) for u,v in [0,1]. Gaussian and Student-t evaluate the
    /// one-dimensional conditional reduction by adaptive Gauss-Legendre
    /// panels (absolute error target 1e-11); Gumbel is closed form.
    double cdf(double u, double v) const;

    /// F_{V|U>=alpha}(v) = (v - C(alpha,v)) / (1-alpha).
    double cond_exceed_cdf(double alpha, double v) const;

    /// Inverse of cond_exceed_cdf in v: the unique v with F(v)=beta, by
    /// bracketed root search (|F(v)-beta| <= 1e-10 guaranteed, typically
    /// much tighter). lower_hint, when given, must be a known lower bound
    /// for the solution (used to warm-start sweeps in increasing beta).
    double cond_exceed_quantile(double alpha, double beta, double lower_hint = 0.0) const;

    /// F_{V|U=alpha}(v) = dC/du at u=alpha; closed form per family.
    /// Throws UnsupportedCopulaError for the comonotone copula.
    double cond_equal_cdf(double alpha, double v) const;

    /// Inverse of cond_equal_cdf in v, same root-finding contract as
    /// cond_exceed_quantile.
    double cond_equal_quantile(double alpha, double beta, double lower_hint = 0.0) const;

    /// n i.i.d. draws from C; deterministic given the seed (engine documented
    /// in Rng). Margins are uniform(0,1).
    std::vector<std::pair<double, double>> sample(std::size_t n, std::uint64_t seed) const;

    /// Single draw, advancing the supplied generator.
    std::pair<double, double> draw(Rng& rng) const;

    std::string description() const;

  private:
    Copula(Kind kind, double rho, double nu, double theta);

    Kind kind_;
    double rho_ = 0.0;
    double nu_ = 0.0;
    double theta_ = 0.0;
};

/// Conditional law of V given the stress event on U at level alpha.
struct ConditionalLaw {
    enum class Mode { GivenEqual, GivenExceed };

    Copula copula;
    double alpha;
    Mode mode;

    ConditionalLaw(Copula c, double a, Mode m);

    double cdf(double v) const;
    double quantile(double beta) const;
};

}  // namespace covar
