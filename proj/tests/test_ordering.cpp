#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "covar/measures.hpp"
#include "covar/numerics.hpp"
#include "covar/ordering.hpp"

using namespace covar;
using namespace covar::ordering;

namespace {

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> grid(n);
    for (int i = 0; i < n; ++i) grid[i] = a + (b - a) * i / (n - 1);
    return grid;
}

}  // namespace

TEST_CASE("concordance grid checks") {
    CHECK(concordance_leq(Copula::gaussian(0.3), Copula::gaussian(0.7), 50).ordered());
    CHECK(concordance_leq(Copula::gumbel(1.2), Copula::gumbel(2.0), 50).ordered());
    CHECK(concordance_leq(Copula::student_t(0.2, 3.0), Copula::student_t(0.6, 3.0), 50).ordered());

    const auto reversed = concordance_leq(Copula::gaussian(0.7), Copula::gaussian(0.3), 50);
    REQUIRE_FALSE(reversed.ordered());
    CHECK(reversed.violation->gap > 0.0);
    CHECK(reversed.violation->u > 0.0);
    CHECK(reversed.violation->u < 1.0);
    CHECK(reversed.violation->v > 0.0);
    CHECK(reversed.violation->v < 1.0);

    CHECK_THROWS_AS(concordance_leq(Copula::gaussian(0.3), Copula::gaussian(0.7), 1),
                    std::domain_error);
}

TEST_CASE("monotonicity sweeps reproduce the qualitative pictures") {
    const Levels lv(0.95, 0.95);
    const auto rho_grid = linspace(0.2, 0.9, 15);

    // the exceed variant is increasing in rho
    CHECK(monotonicity_sweep(ModelFamily::Gaussian, rho_grid, MeasureKind::CovarGeq, lv)
              .monotone());

    // the equal variant decreases beyond rho0 = 1/sqrt(2)
    const auto eq_sweep =
        monotonicity_sweep(ModelFamily::Gaussian, rho_grid, MeasureKind::CovarEq, lv);
    REQUIRE_FALSE(eq_sweep.monotone());
    const double rho0 = 1.0 / std::numbers::sqrt2;
    for (const auto& [i, j] : eq_sweep.violations) {
        CHECK(eq_sweep.params[i] >= rho0 - 0.05);
        CHECK(j == i + 1);
    }

    // Gumbel: strongest decay of the equal variant within theta in (1.5, 2)
    const auto theta_sweep = monotonicity_sweep(ModelFamily::GumbelT3, linspace(1.0, 3.0, 21),
                                                MeasureKind::CovarEq, lv);
    REQUIRE_FALSE(theta_sweep.monotone());
    double worst_drop = 0.0;
    double worst_mid = 0.0;
    for (std::size_t i = 0; i + 1 < theta_sweep.values.size(); ++i) {
        const double drop = theta_sweep.values[i] - theta_sweep.values[i + 1];
        if (drop > worst_drop) {
            worst_drop = drop;
            worst_mid = 0.5 * (theta_sweep.params[i] + theta_sweep.params[i + 1]);
        }
    }
    CHECK(worst_mid >= 1.4);
    CHECK(worst_mid <= 2.1);

    CHECK_THROWS_AS(
        monotonicity_sweep(ModelFamily::Gaussian, {0.5, 0.2}, MeasureKind::CovarGeq, lv),
        std::domain_error);
}

TEST_CASE("gaussian derivative sign") {
    CHECK(gaussian_derivative_sign(0.5, Levels(0.95, 0.95)) == 1);
    CHECK(gaussian_derivative_sign(1.0 / std::numbers::sqrt2, Levels(0.95, 0.95)) == 0);
    CHECK(gaussian_derivative_sign(0.8, Levels(0.95, 0.95)) == -1);
    // case (ii): alpha >= 1/2, beta < 1/2, increasing for rho > -rho0
    CHECK(gaussian_derivative_sign(-0.9, Levels(0.95, 0.3)) == 1);

    // sign agreement with the finite difference of the closed form at random
    // points, excluding a 1e-4 neighbourhood of the zero set
    std::mt19937_64 gen(29);
    std::uniform_real_distribution<double> unif(0.01, 0.99);
    std::uniform_real_distribution<double> rho_dist(-0.99, 0.99);
    const double h = 1e-6;
    int tested = 0;
    while (tested < 1000) {
        const double rho = rho_dist(gen);
        const Levels lv(unif(gen), unif(gen));
        const double za = num::normal_quantile(lv.alpha);
        const double zb = num::normal_quantile(lv.beta);
        if (std::fabs(za * std::sqrt(1.0 - rho * rho) - rho * zb) < 1e-4) continue;
        ++tested;
        const double fd = (covar_eq_gaussian_analytic(0.0, 1.0, rho + h, lv) -
                           covar_eq_gaussian_analytic(0.0, 1.0, rho - h, lv)) /
                          (2.0 * h);
        const int fd_sign = fd > 0.0 ? 1 : (fd < 0.0 ? -1 : 0);
        CHECK(gaussian_derivative_sign(rho, lv) == fd_sign);
    }
}

TEST_CASE("beta0 values and monotonicity in the dependence parameter") {
    CHECK(beta0(Copula::independence(), 0.95) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(beta0(Copula::comonotone(), 0.95) == doctest::Approx(0.0));
    CHECK(beta0(Copula::comonotone(), 0.7) == doctest::Approx(0.0));
    CHECK(beta0(Copula::gaussian(0.5), 0.95) <= 0.5);

    double prev = 1.0;
    for (double rho : linspace(0.0, 0.9, 10)) {
        const double b0 = beta0(Copula::gaussian(rho), 0.95);
        CHECK(b0 <= prev + 1e-12);
        CHECK(b0 >= 0.0);
        CHECK(b0 <= 1.0);
        prev = b0;
    }
    prev = 1.0;
    for (double theta : linspace(1.0, 3.0, 9)) {
        const double b0 = beta0(Copula::gumbel(theta), 0.95);
        CHECK(b0 <= prev + 1e-12);
        prev = b0;
    }
    CHECK_THROWS_AS(beta0(Copula::gaussian(0.5), 0.0), std::domain_error);
}

TEST_CASE("beta0 bound: scale-ordered models compare above beta0") {
    // sigma_Y < sigma_Y' and rho <= rho': covar_geq ordered for beta >= beta0
    const BivariateModel small{Marginal::normal(0.0, 1.0), Marginal::normal(0.0, 1.0),
                               Copula::gaussian(0.3)};
    const BivariateModel large{Marginal::normal(0.0, 1.0), Marginal::normal(0.0, 1.5),
                               Copula::gaussian(0.6)};
    for (double alpha : {0.9, 0.95}) {
        const double b0 = beta0(Copula::gaussian(0.3), alpha);
        for (double beta = std::max(b0 + 1e-6, 0.05); beta < 0.995; beta += 0.05) {
            const Levels lv(alpha, beta);
            CHECK(covar_geq(small, lv) <= covar_geq(large, lv) + 1e-9);
        }
    }
}

TEST_CASE("theorem 3(b) converse: measure ordering and copula ordering are consistent") {
    const std::vector<double> level_grid = {0.5, 0.75, 0.9, 0.95, 0.99};
    const auto covar_ordered = [&](const BivariateModel& a, const BivariateModel& b) {
        for (double alpha : level_grid) {
            for (double beta : level_grid) {
                const Levels lv(alpha, beta);
                if (covar_geq(a, lv) > covar_geq(b, lv) + 1e-9) return false;
            }
        }
        return true;
    };
    const auto model = [](const Copula& c) {
        return BivariateModel{Marginal::normal(0.0, 1.0), Marginal::normal(0.0, 1.0), c};
    };

    // ordered pair: both checkers agree
    CHECK(covar_ordered(model(Copula::gaussian(0.3)), model(Copula::gaussian(0.7))));
    CHECK(concordance_leq(Copula::gaussian(0.3), Copula::gaussian(0.7), 30).ordered());
    CHECK(covar_ordered(model(Copula::gumbel(1.3)), model(Copula::gumbel(2.5))));
    CHECK(concordance_leq(Copula::gumbel(1.3), Copula::gumbel(2.5), 30).ordered());

    // reversed pair: both checkers flag it
    CHECK_FALSE(covar_ordered(model(Copula::gaussian(0.7)), model(Copula::gaussian(0.3))));
    CHECK_FALSE(concordance_leq(Copula::gaussian(0.7), Copula::gaussian(0.3), 30).ordered());
}
