#include <doctest.h>

#include <cmath>
#include <random>

#include "covar/marginal.hpp"
#include "covar/numerics.hpp"
#include "oracles.hpp"

using namespace covar;

TEST_CASE("construction guards") {
    CHECK_THROWS_AS(Marginal::normal(0.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(Marginal::normal(0.0, -1.0), std::domain_error);
    CHECK_THROWS_AS(Marginal::student_t(0.0), std::domain_error);
    CHECK_THROWS_AS(Marginal::student_t(-2.0), std::domain_error);
}

TEST_CASE("cdf symmetry points") {
    CHECK(Marginal::normal(0.0, 1.0).cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(Marginal::student_t(3.0).cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
    // high-precision reference evaluation of the normal CDF
    CHECK(Marginal::normal(0.0, 1.0).cdf(1.6448536269514722) ==
          doctest::Approx(0.95).epsilon(1e-10));
}

TEST_CASE("quantile: median, location-scale, frozen t value") {
    CHECK(std::fabs(Marginal::normal(0.0, 1.0).quantile(0.5)) < 1e-15);
    CHECK(std::fabs(Marginal::student_t(3.0).quantile(0.5)) < 1e-12);
    CHECK(Marginal::normal(2.0, 3.0).quantile(0.5) == doctest::Approx(2.0).epsilon(1e-14));

    // bisection on the density-quadrature CDF oracle
    const double t95 = oracles::t_quantile_bisect(0.95, 3.0);
    CHECK(t95 == doctest::Approx(2.3533634348).epsilon(1e-8));
    CHECK(Marginal::student_t(3.0).quantile(0.95) == doctest::Approx(t95).epsilon(1e-9));

    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> unif(1e-6, 1.0 - 1e-6);
    const Marginal std_n = Marginal::normal(0.0, 1.0);
    const Marginal loc_n = Marginal::normal(-1.5, 2.5);
    const Marginal std_t = Marginal::student_t(3.0);
    const Marginal loc_t = Marginal::student_t(3.0, 0.75, 0.4);
    for (int i = 0; i < 200; ++i) {
        const double p = unif(gen);
        CHECK(loc_n.quantile(p) ==
              doctest::Approx(-1.5 + 2.5 * std_n.quantile(p)).epsilon(1e-12));
        CHECK(loc_t.quantile(p) ==
              doctest::Approx(0.75 + 0.4 * std_t.quantile(p)).epsilon(1e-12));
    }
    CHECK_THROWS_AS(std_n.quantile(0.0), std::domain_error);
    CHECK_THROWS_AS(std_t.quantile(1.0), std::domain_error);
}

TEST_CASE("cdf(quantile(p)) = p to 1e-9 over random probabilities") {
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> unif(1e-6, 1.0 - 1e-6);
    const Marginal n = Marginal::normal(0.3, 1.7);
    const Marginal t = Marginal::student_t(3.0, -0.2, 0.9);
    for (int i = 0; i < 1000; ++i) {
        const double p = unif(gen);
        CHECK(std::fabs(n.cdf(n.quantile(p)) - p) <= 1e-9);
        CHECK(std::fabs(t.cdf(t.quantile(p)) - p) <= 1e-9);
    }
}

TEST_CASE("expected shortfall: normal quadrature matches the closed-form oracle") {
    const Marginal n = Marginal::normal(0.0, 1.0);
    const double z95 = 1.6448536269514722;
    CHECK(n.expected_shortfall(0.95) ==
          doctest::Approx(oracles::phi(z95) / 0.05).epsilon(1e-9));
    // translation/scale behaviour
    const Marginal shifted = Marginal::normal(2.0, 3.0);
    CHECK(shifted.expected_shortfall(0.95) ==
          doctest::Approx(2.0 + 3.0 * n.expected_shortfall(0.95)).epsilon(1e-10));
}

TEST_CASE("expected shortfall: t closed form vs trapezoid oracle") {
    const Marginal t = Marginal::student_t(3.0);
    // 1e6-panel trapezoid on (beta, 1-1e-9), integrating in u = (1-t)^{2/3}
    // so the quantile's (1-t)^{-1/3} growth becomes a bounded integrand,
    // plus the power-tail remainder beyond 1-1e-9.
    const double beta = 0.95;
    const double delta = 1e-9;
    const int panels = 1000000;
    const double u_lo = std::pow(delta, 2.0 / 3.0);
    const double u_hi = std::pow(1.0 - beta, 2.0 / 3.0);
    const auto g = [&](double u) {
        return 1.5 * std::sqrt(u) * t.quantile(1.0 - std::pow(u, 1.5));
    };
    double sum = 0.5 * (g(u_lo) + g(u_hi));
    for (int i = 1; i < panels; ++i) sum += g(u_lo + (u_hi - u_lo) * i / panels);
    const double trapezoid = sum * (u_hi - u_lo) / panels;
    // int_{1-d}^{1} q(t) dt with q(1-s) ~ (A/s)^{1/3}, A = 2 sqrt(3)/pi
    const double a_tail = 2.0 * std::numbers::sqrt3 / std::numbers::pi;
    const double tail = 1.5 * std::cbrt(a_tail) * std::pow(delta, 2.0 / 3.0);
    const double oracle = (trapezoid + tail) / (1.0 - beta);
    CHECK(t.expected_shortfall(beta) == doctest::Approx(oracle).epsilon(1e-6));
}

TEST_CASE("expected shortfall domain") {
    CHECK_THROWS_AS(Marginal::student_t(1.0).expected_shortfall(0.95), std::domain_error);
    CHECK_THROWS_AS(Marginal::student_t(0.8).expected_shortfall(0.95), std::domain_error);
    CHECK_THROWS_AS(Marginal::normal(0.0, 1.0).expected_shortfall(0.0), std::domain_error);
}

TEST_CASE("ES dominates VaR and is monotone in beta") {
    const Marginal n = Marginal::normal(0.1, 1.3);
    const Marginal t = Marginal::student_t(3.0, -0.4, 0.8);
    double prev_n = -1e300, prev_t = -1e300;
    for (double beta = 0.01; beta < 0.995; beta += 0.01) {
        const double es_n = n.expected_shortfall(beta);
        const double es_t = t.expected_shortfall(beta);
        CHECK(es_n >= n.value_at_risk(beta));
        CHECK(es_t >= t.value_at_risk(beta));
        CHECK(es_n >= prev_n - 1e-10);
        CHECK(es_t >= prev_t - 1e-10);
        prev_n = es_n;
        prev_t = es_t;
    }
}

TEST_CASE("tail integrals agree with direct quadrature of the quantile") {
    const Marginal n = Marginal::normal(0.5, 2.0);
    const Marginal t = Marginal::student_t(3.0, -0.1, 1.2);
    for (const Marginal& m : {n, t}) {
        // difference form avoids the endpoint singularities
        const double direct =
            oracles::integrate([&](double s) { return m.quantile(s); }, 0.6, 0.99, 32);
        CHECK(m.upper_tail_integral(0.6) - m.upper_tail_integral(0.99) ==
              doctest::Approx(direct).epsilon(1e-10));
        const double lower =
            oracles::integrate([&](double s) { return m.quantile(s); }, 0.01, 0.4, 32);
        CHECK(m.lower_tail_integral(0.4) - m.lower_tail_integral(0.01) ==
              doctest::Approx(lower).epsilon(1e-10));
    }
}
