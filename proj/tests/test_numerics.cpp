#include <doctest.h>

#include <cmath>
#include <random>

#include "covar/errors.hpp"
#include "covar/numerics.hpp"
#include "oracles.hpp"

using namespace covar;

TEST_CASE("normal cdf against series/continued-fraction reference") {
    for (double x = -8.0; x <= 8.0; x += 0.173) {
        CHECK(num::normal_cdf(x) == doctest::Approx(oracles::normal_cdf(x)).epsilon(1e-13));
    }
    CHECK(num::normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("normal quantile round trip and frozen points") {
    CHECK(std::fabs(num::normal_quantile(0.5)) < 1e-15);
    // Phi^{-1}(0.95); the digit string is pinned by the reference CDF below.
    const double z95 = 1.6448536269514722;
    CHECK(num::normal_quantile(0.95) == doctest::Approx(z95).epsilon(1e-12));
    CHECK(oracles::normal_cdf(z95) == doctest::Approx(0.95).epsilon(1e-14));

    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> unif(1e-6, 1.0 - 1e-6);
    for (int i = 0; i < 1000; ++i) {
        const double p = unif(gen);
        CHECK(std::fabs(num::normal_cdf(num::normal_quantile(p)) - p) <= 1e-12);
    }
    CHECK_THROWS_AS(num::normal_quantile(0.0), std::domain_error);
    CHECK_THROWS_AS(num::normal_quantile(1.0), std::domain_error);
}

TEST_CASE("incomplete beta basics") {
    CHECK(num::incomplete_beta(2.0, 3.0, 0.0) == 0.0);
    CHECK(num::incomplete_beta(2.0, 3.0, 1.0) == 1.0);
    // symmetry I_x(a,b) = 1 - I_{1-x}(b,a)
    for (double x = 0.05; x < 1.0; x += 0.1) {
        CHECK(num::incomplete_beta(1.5, 0.5, x) ==
              doctest::Approx(1.0 - num::incomplete_beta(0.5, 1.5, 1.0 - x)).epsilon(1e-13));
    }
    // I_x(1,b) = 1-(1-x)^b
    CHECK(num::incomplete_beta(1.0, 4.0, 0.3) ==
          doctest::Approx(1.0 - std::pow(0.7, 4.0)).epsilon(1e-14));
}

TEST_CASE("student t cdf: closed small-nu forms agree with direct density quadrature") {
    for (double nu : {1.0, 2.0, 3.0, 4.0, 5.5}) {
        for (double x = -6.0; x <= 6.0; x += 0.91) {
            CHECK(num::student_t_cdf(x, nu) ==
                  doctest::Approx(oracles::t_cdf(x, nu)).epsilon(1e-11));
        }
    }
    // the nu=3 elementary branch must agree with the incomplete-beta branch
    for (double x = -30.0; x <= 30.0; x += 1.7) {
        CHECK(num::student_t_cdf(x, 3.0) ==
              doctest::Approx(num::student_t_cdf(x, 3.0 + 1e-9)).epsilon(1e-8));
    }
    CHECK(num::student_t_cdf(0.0, 3.0) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("student t quantile round trips") {
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> unif(1e-8, 1.0 - 1e-8);
    for (double nu : {0.7, 1.0, 2.0, 3.0, 4.0, 7.3}) {
        for (int i = 0; i < 400; ++i) {
            const double p = unif(gen);
            const double q = num::student_t_quantile(p, nu);
            CHECK(std::fabs(num::student_t_cdf(q, nu) - p) <= 1e-11);
        }
    }
    CHECK_THROWS_AS(num::student_t_quantile(0.0, 3.0), std::domain_error);
    CHECK_THROWS_AS(num::student_t_quantile(0.5, -1.0), std::domain_error);
}

TEST_CASE("gauss legendre integrates polynomials exactly") {
    const auto& rule = num::gauss_legendre(8);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        sum += rule.weights[i] * std::pow(rule.nodes[i], 14);  // degree 14 < 2*8-1
    }
    CHECK(sum == doctest::Approx(2.0 / 15.0).epsilon(1e-13));
}

TEST_CASE("adaptive quadrature") {
    const double s = num::integrate_adaptive([](double x) { return std::sin(x); }, 0.0,
                                             std::numbers::pi, 1e-12);
    CHECK(s == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("graded breakpoints are sorted and hit the endpoints") {
    const auto b1 = num::graded_breakpoints(0.95, 1.0 - 1e-7, 16, 3e-7, false, true);
    CHECK(b1.front() == 0.95);
    CHECK(b1.back() == doctest::Approx(1.0 - 1e-7).epsilon(1e-15));
    CHECK(std::is_sorted(b1.begin(), b1.end()));
    const auto b2 = num::graded_breakpoints(1e-7, 1.0 - 1e-7, 16, 3e-7, true, true);
    CHECK(std::is_sorted(b2.begin(), b2.end()));
    CHECK(b2.front() == doctest::Approx(1e-7));
    CHECK(b2.back() == doctest::Approx(1.0 - 1e-7));
}

TEST_CASE("invert_increasing") {
    // smooth
    const double r = num::invert_increasing([](double x) { return x * x * x; }, 0.2, 0.0, 1.0);
    CHECK(r == doctest::Approx(std::cbrt(0.2)).epsilon(1e-10));
    // flat stretch (comonotone-style conditional CDF)
    const auto flat = [](double v) { return v <= 0.95 ? 0.0 : (v - 0.95) / 0.05; };
    const double q = num::invert_increasing(flat, 0.5, 0.0, 1.0);
    CHECK(q == doctest::Approx(0.975).epsilon(1e-9));
    // not bracketed
    CHECK_THROWS_AS(num::invert_increasing([](double x) { return x; }, 2.0, 0.0, 1.0),
                    std::domain_error);
}

TEST_CASE("splitmix64 known vector") {
    CHECK(num::splitmix64(0) == 0xE220A8397B1DCDAFULL);
}
