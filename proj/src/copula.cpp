#include "covar/copula.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "covar/errors.hpp"
#include "covar/numerics.hpp"

namespace covar {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kCdfTol = 1e-11;
constexpr double kOneMinusUlp = 0x1.fffffffffffffp-1;

void check_unit(double x, const char* name) {
    if (!(x >= 0.0 && x <= 1.0)) {
        throw std::domain_error(std::string("Copula: ") + name + " must lie in [0,1]");
    }
}

void check_open(double x, const char* name) {
    if (!(x > 0.0 && x < 1.0)) {
        throw std::domain_error(std::string("Copula: ") + name + " must lie in (0,1)");
    }
}

// One-dimensional reduction of the bivariate normal CDF:
//   C(u,v) = int_{-inf}^{qn(u)} phi(s) Phi((qn(v) - rho s)/tau) ds.
double gaussian_copula_cdf(double u, double v, double rho) {
    const double a = num::normal_quantile(std::min(u, v));
    const double b = num::normal_quantile(std::max(u, v));
    const double tau = std::sqrt((1.0 - rho) * (1.0 + rho));
    const auto integrand = [b, rho, tau](double s) {
        return num::normal_pdf(s) * num::normal_cdf((b - rho * s) / tau);
    };
    const double lo = std::min(a - 6.0, -9.0);
    return num::integrate_adaptive(integrand, lo, a, kCdfTol);
}

// Same reduction for the t copula. The substitution s = sqrt(nu) tan(psi)
// turns the half-line into a finite interval with a smooth integrand:
//   C(u,v) = k sqrt(nu) int_{-pi/2}^{atan(a/sqrt(nu))}
//              cos^{nu-1}(psi) T_{nu+1}(h(s(psi))) dpsi.
double student_copula_cdf(double u, double v, double rho, double nu) {
    const double a = num::student_t_quantile(std::min(u, v), nu);
    const double b = num::student_t_quantile(std::max(u, v), nu);
    const double sqrt_nu = std::sqrt(nu);
    const double one_minus_r2 = (1.0 - rho) * (1.0 + rho);
    const auto integrand = [b, rho, nu, sqrt_nu, one_minus_r2](double psi) {
        const double c = std::cos(psi);
        const double s = sqrt_nu * std::tan(psi);
        const double sigma = std::sqrt((nu + s * s) * one_minus_r2 / (nu + 1.0));
        return std::pow(c, nu - 1.0) * num::student_t_cdf((b - rho * s) / sigma, nu + 1.0);
    };
    const double norm =
        std::exp(std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu)) / std::sqrt(kPi);
    const double hi = std::atan(a / sqrt_nu);
    return norm * num::integrate_adaptive(integrand, -0.5 * kPi, hi, kCdfTol / norm);
}

// log of (x^theta + y^theta)^(1/theta) for x,y > 0, factored for stability.
double gumbel_radius(double x, double y, double theta) {
    const double m = std::max(x, y);
    const double r = std::min(x, y) / m;
    return m * std::pow(1.0 + std::pow(r, theta), 1.0 / theta);
}

}  // namespace

Copula::Copula(Kind kind, double rho, double nu, double theta)
    : kind_(kind), rho_(rho), nu_(nu), theta_(theta) {}

Copula Copula::gaussian(double rho) {
    if (!(rho > -1.0 && rho < 1.0))
        throw std::domain_error("Copula::gaussian: rho must lie in (-1,1)");
    return Copula(Kind::Gaussian, rho, 0.0, 0.0);
}

Copula Copula::student_t(double rho, double nu) {
    if (!(rho > -1.0 && rho < 1.0))
        throw std::domain_error("Copula::student_t: rho must lie in (-1,1)");
    if (!(nu > 0.0)) throw std::domain_error("Copula::student_t: nu must be positive");
    return Copula(Kind::StudentT, rho, nu, 0.0);
}

Copula Copula::gumbel(double theta) {
    if (!(theta >= 1.0) || std::isinf(theta))
        throw std::domain_error("Copula::gumbel: theta must lie in [1,inf); use comonotone()");
    return Copula(Kind::Gumbel, 0.0, 0.0, theta);
}

Copula Copula::independence() { return Copula(Kind::Independence, 0.0, 0.0, 0.0); }

Copula Copula::comonotone() { return Copula(Kind::Comonotone, 0.0, 0.0, 0.0); }

double Copula::cdf(double u, double v) const {
    check_unit(u, "u");
    check_unit(v, "v");
    if (u <= 0.0 || v <= 0.0) return 0.0;
    if (u >= 1.0) return v;
    if (v >= 1.0) return u;
    double c;
    switch (kind_) {
        case Kind::Independence:
            return u * v;
        case Kind::Comonotone:
            return std::min(u, v);
        case Kind::Gumbel: {
            if (theta_ == 1.0) return u * v;
            c = std::exp(-gumbel_radius(-std::log(u), -std::log(v), theta_));
            break;
        }
        case Kind::Gaussian: {
            if (rho_ == 0.0) return u * v;
            c = gaussian_copula_cdf(u, v, rho_);
            break;
        }
        case Kind::StudentT: {
            c = student_copula_cdf(u, v, rho_, nu_);
            break;
        }
    }
    // Frechet envelope is a hard constraint; quadrature noise must not leak out.
    return std::clamp(c, std::max(u + v - 1.0, 0.0), std::min(u, v));
}

double Copula::cond_exceed_cdf(double alpha, double v) const {
    check_open(alpha, "alpha");
    check_unit(v, "v");
    return (v - cdf(alpha, v)) / (1.0 - alpha);
}

double Copula::cond_exceed_quantile(double alpha, double beta, double lower_hint) const {
    check_open(alpha, "alpha");
    check_open(beta, "beta");
    const auto f = [this, alpha](double v) { return cond_exceed_cdf(alpha, v); };
    return num::invert_increasing(f, beta, std::clamp(lower_hint, 0.0, 1.0), 1.0);
}

double Copula::cond_equal_cdf(double alpha, double v) const {
    check_open(alpha, "alpha");
    check_unit(v, "v");
    if (kind_ == Kind::Comonotone) {
        throw UnsupportedCopulaError(
            "cond_equal_cdf: conditional law given U=alpha is degenerate for the comonotone "
            "copula");
    }
    if (v <= 0.0) return 0.0;
    if (v >= 1.0) return 1.0;
    switch (kind_) {
        case Kind::Independence:
            return v;
        case Kind::Gaussian: {
            if (rho_ == 0.0) return v;
            const double tau = std::sqrt((1.0 - rho_) * (1.0 + rho_));
            return num::normal_cdf(
                (num::normal_quantile(v) - rho_ * num::normal_quantile(alpha)) / tau);
        }
        case Kind::StudentT: {
            const double ta = num::student_t_quantile(alpha, nu_);
            const double tv = num::student_t_quantile(v, nu_);
            const double sigma =
                std::sqrt((nu_ + ta * ta) * (1.0 - rho_) * (1.0 + rho_) / (nu_ + 1.0));
            return num::student_t_cdf((tv - rho_ * ta) / sigma, nu_ + 1.0);
        }
        case Kind::Gumbel: {
            if (theta_ == 1.0) return v;
            const double x = -std::log(alpha);
            const double y = -std::log(v);
            const double radius = gumbel_radius(x, y, theta_);
            // dC/du = C(u,v) * A^{1-theta} * x^{theta-1} / u with A = radius.
            return std::exp(-radius + (theta_ - 1.0) * (std::log(x) - std::log(radius)) + x);
        }
        case Kind::Comonotone:
            break;  // unreachable
    }
    return v;
}

double Copula::cond_equal_quantile(double alpha, double beta, double lower_hint) const {
    check_open(alpha, "alpha");
    check_open(beta, "beta");
    const auto f = [this, alpha](double v) { return cond_equal_cdf(alpha, v); };
    return num::invert_increasing(f, beta, std::clamp(lower_hint, 0.0, 1.0), 1.0);
}

std::pair<double, double> Copula::draw(Rng& rng) const {
    switch (kind_) {
        case Kind::Independence:
            return {rng.uniform01(), rng.uniform01()};
        case Kind::Comonotone: {
            const double u = rng.uniform01();
            return {u, u};
        }
        case Kind::Gaussian: {
            const double z1 = rng.normal();
            const double z2 = rng.normal();
            const double tau = std::sqrt((1.0 - rho_) * (1.0 + rho_));
            return {num::normal_cdf(z1), num::normal_cdf(rho_ * z1 + tau * z2)};
        }
        case Kind::StudentT: {
            const double z1 = rng.normal();
            const double z2 = rng.normal();
            const double tau = std::sqrt((1.0 - rho_) * (1.0 + rho_));
            const double mix = std::sqrt(nu_ / rng.chi_squared(nu_));
            return {num::student_t_cdf(mix * z1, nu_),
                    num::student_t_cdf(mix * (rho_ * z1 + tau * z2), nu_)};
        }
        case Kind::Gumbel: {
            if (theta_ == 1.0) return {rng.uniform01(), rng.uniform01()};
            // Positive stable mixing variable, Kanter's representation of the
            // Chambers-Mallows-Stuck construction: LT of S is exp(-s^(1/theta)).
            const double a = 1.0 / theta_;
            const double angle = kPi * rng.uniform01();
            const double w = rng.exponential();
            const double log_s = std::log(std::sin(a * angle)) -
                                 std::log(std::sin(angle)) / a +
                                 (1.0 - a) / a *
                                     (std::log(std::sin((1.0 - a) * angle)) - std::log(w));
            const double s = std::exp(log_s);
            const auto push = [&](double e) {
                const double u = std::exp(-std::pow(e / s, a));
                return std::clamp(u, std::numeric_limits<double>::min(), kOneMinusUlp);
            };
            const double e1 = rng.exponential();
            const double e2 = rng.exponential();
            return {push(e1), push(e2)};
        }
    }
    return {0.5, 0.5};  // unreachable
}

std::vector<std::pair<double, double>> Copula::sample(std::size_t n, std::uint64_t seed) const {
    if (n < 1) throw std::domain_error("Copula::sample: n must be at least 1");
    Rng rng(seed);
    std::vector<std::pair<double, double>> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(draw(rng));
    return out;
}

std::string Copula::description() const {
    char buf[64];
    switch (kind_) {
        case Kind::Gaussian:
            std::snprintf(buf, sizeof(buf), "gaussian(rho=%g)", rho_);
            return buf;
        case Kind::StudentT:
            std::snprintf(buf, sizeof(buf), "student_t(rho=%g,nu=%g)", rho_, nu_);
            return buf;
        case Kind::Gumbel:
            std::snprintf(buf, sizeof(buf), "gumbel(theta=%g)", theta_);
            return buf;
        case Kind::Independence:
            return "independence";
        case Kind::Comonotone:
            return "comonotone";
    }
    return "";
}

ConditionalLaw::ConditionalLaw(Copula c, double a, Mode m) : copula(c), alpha(a), mode(m) {
    check_open(a, "alpha");
    if (m == Mode::GivenEqual && copula.kind() == Copula::Kind::Comonotone) {
        throw UnsupportedCopulaError("ConditionalLaw: GivenEqual unsupported for comonotone");
    }
}

double ConditionalLaw::cdf(double v) const {
    return mode == Mode::GivenExceed ? copula.cond_exceed_cdf(alpha, v)
                                     : copula.cond_equal_cdf(alpha, v);
}

double ConditionalLaw::quantile(double beta) const {
    return mode == Mode::GivenExceed ? copula.cond_exceed_quantile(alpha, beta)
                                     : copula.cond_equal_quantile(alpha, beta);
}

}  // namespace covar
