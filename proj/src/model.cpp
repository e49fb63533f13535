#include "covar/model.hpp"

namespace covar {

ModelFamily parse_family(const std::string& name) {
    if (name == "gaussian") return ModelFamily::Gaussian;
    if (name == "t3") return ModelFamily::T3;
    if (name == "gumbel_t3") return ModelFamily::GumbelT3;
    throw std::domain_error("unknown family '" + name + "' (expected gaussian, t3 or gumbel_t3)");
}

std::string family_name(ModelFamily family) {
    switch (family) {
        case ModelFamily::Gaussian:
            return "gaussian";
        case ModelFamily::T3:
            return "t3";
        case ModelFamily::GumbelT3:
            return "gumbel_t3";
    }
    return "";
}

BivariateModel make_model(ModelFamily family, double param) {
    switch (family) {
        case ModelFamily::Gaussian:
            return {Marginal::normal(0.0, 1.0), Marginal::normal(0.0, 1.0),
                    Copula::gaussian(param)};
        case ModelFamily::T3:
            return {Marginal::student_t(3.0), Marginal::student_t(3.0),
                    Copula::student_t(param, 3.0)};
        case ModelFamily::GumbelT3:
            return {Marginal::student_t(3.0), Marginal::student_t(3.0), Copula::gumbel(param)};
    }
    throw std::domain_error("make_model: unknown family");
}

bool param_in_family_domain(ModelFamily family, double param) {
    switch (family) {
        case ModelFamily::Gaussian:
        case ModelFamily::T3:
            return param > -1.0 && param < 1.0;
        case ModelFamily::GumbelT3:
            return param >= 1.0;
    }
    return false;
}

}  // namespace covar
