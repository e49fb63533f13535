#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

#include "covar/numerics.hpp"

namespace covar {

/// Seedable random generator used by every sampler in the library.
///
/// Engine: std::mt19937_64 (the algorithm name recorded in output metadata).
/// All variate transforms are implemented here rather than through
/// std::*_distribution so that draw sequences are fully pinned down by the
/// seed. Parallel work must use distinct streams obtained from
/// derive_seed(master, index); generator state is never shared.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    static constexpr std::string_view algorithm() { return "mt19937_64"; }

    /// Stream-splitting rule: seed XOR splitmix64(index).
    static std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
        return master ^ num::splitmix64(index);
    }

    /// Uniform on the open interval (0,1): 53-bit mantissa, offset by half an ulp.
    double uniform01() {
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal via the Marsaglia polar method (second variate cached).
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform01() - 1.0;
            v = 2.0 * uniform01() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double m = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * m;
        has_spare_ = true;
        return u * m;
    }

    /// Standard exponential.
    double exponential() { return -std::log(uniform01()); }

    /// Gamma(shape, 1) by Marsaglia-Tsang squeeze; shape boosting for shape < 1.
    double gamma(double shape) {
        if (shape < 1.0) {
            const double g = gamma(shape + 1.0);
            return g * std::pow(uniform01(), 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x, v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform01();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
        }
    }

    /// Chi-square with nu > 0 degrees of freedom.
    double chi_squared(double nu) { return 2.0 * gamma(0.5 * nu); }

  private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace covar
