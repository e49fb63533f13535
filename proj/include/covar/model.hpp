#pragma once

#include <stdexcept>
#include <string>

#include "covar/copula.hpp"
#include "covar/marginal.hpp"

namespace covar {

/// Confidence level pair, both in (0,1).
struct Levels {
    double alpha;
    double beta;

    Levels(double a, double b) : alpha(a), beta(b) {
        if (!(a > 0.0 && a < 1.0) || !(b > 0.0 && b < 1.0)) {
            throw std::domain_error("Levels: alpha and beta must lie in (0,1)");
        }
    }
};

/// Two marginals joined by a copula; the object all risk measures consume.
/// The conditioning marginal (x) is continuous for both supported kinds, as
/// the copula representation requires.
struct BivariateModel {
    Marginal marginal_x;
    Marginal marginal_y;
    Copula copula;
};

/// The three model families used in the simulation studies.
enum class ModelFamily { Gaussian, T3, GumbelT3 };

ModelFamily parse_family(const std::string& name);
std::string family_name(ModelFamily family);

/// Standard-margin model for a family at the given dependence parameter
/// (rho for gaussian/t3, theta for gumbel_t3). Margins are N(0,1) for
/// gaussian and t(3) with location 0, scale 1 otherwise.
BivariateModel make_model(ModelFamily family, double param);

/// Admissible parameter range for a family, used for CLI validation.
bool param_in_family_domain(ModelFamily family, double param);

}  // namespace covar
