#include "covar/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "covar/errors.hpp"

namespace covar::num {

namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014326779399461;
constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr double kPi = std::numbers::pi;

}  // namespace

double normal_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double normal_cdf(double x) { return 0.5 * std::erfc(-x / kSqrt2); }

// Wichura's algorithm AS 241 (PPND16), max error below 1e-15 over (0,1),
// followed by one Newton step against normal_cdf so that quantile and CDF
// are consistent to machine precision.
double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::domain_error("normal_quantile: p must be in (0,1)");

    const double q = p - 0.5;
    double z;
    if (std::fabs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        z = q *
            (((((((2.5090809287301226727e+3 * r + 3.3430575583588128105e+4) * r +
                  6.7265770927008700853e+4) *
                     r +
                 4.5921953931549871457e+4) *
                    r +
                1.3731693765509461125e+4) *
                   r +
               1.9715909503065514427e+3) *
                  r +
              1.3314166789178437745e+2) *
                 r +
             3.3871328727963666080e+0) /
            (((((((5.2264952788528545610e+3 * r + 2.8729085735721942674e+4) * r +
                  3.9307895800092710610e+4) *
                     r +
                 2.1213794301586595867e+4) *
                    r +
                5.3941960214247511077e+3) *
                   r +
               6.8718700749205790830e+2) *
                  r +
              4.2313330701600911252e+1) *
                 r +
             1.0);
    } else {
        double r = (q < 0.0) ? p : 1.0 - p;
        r = std::sqrt(-std::log(r));
        if (r <= 5.0) {
            r -= 1.6;
            z = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                      2.41780725177450611770e-1) *
                         r +
                     1.27045825245236838258e+0) *
                        r +
                    3.64784832476320460504e+0) *
                       r +
                   5.76949722146069140550e+0) *
                      r +
                  4.63033784615654529590e+0) *
                     r +
                 1.42343711074968357734e+0) /
                (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                      1.51986665636164571966e-2) *
                         r +
                     1.48103976427480074590e-1) *
                        r +
                    6.89767334985100004550e-1) *
                       r +
                   1.67638483018380384940e+0) *
                      r +
                  2.05319162663775882187e+0) *
                     r +
                 1.0);
        } else {
            r -= 5.0;
            z = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                      1.24266094738807843860e-3) *
                         r +
                     2.65321895265761230930e-2) *
                        r +
                    2.96560571828504891230e-1) *
                       r +
                   1.78482653991729133580e+0) *
                      r +
                  5.46378491116411436990e+0) *
                     r +
                 6.65790464350110377720e+0) /
                (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                      1.84631831751005468180e-5) *
                         r +
                     7.86869131145613259100e-4) *
                        r +
                    1.48753612908506148525e-2) *
                       r +
                   1.36929880922735805310e-1) *
                      r +
                  5.99832206555887937690e-1) *
                     r +
                 1.0);
        }
        if (q < 0.0) z = -z;
    }

    const double d = normal_pdf(z);
    if (d > 0.0) z -= (normal_cdf(z) - p) / d;
    return z;
}

namespace {

// Continued fraction for the incomplete beta (Numerical Recipes style
// modified Lentz).
double beta_cf(double a, double b, double x) {
    constexpr int kMaxIter = 400;
    constexpr double kEps = 3e-16;
    constexpr double kFpMin = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) return h;
    }
    throw ConvergenceError("incomplete_beta: continued fraction did not converge");
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0 && b > 0.0)) throw std::domain_error("incomplete_beta: a,b must be positive");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double lbeta = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b);
    const double front = std::exp(lbeta + a * std::log(x) + b * std::log1p(-x));
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * beta_cf(a, b, x) / a;
    }
    return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

namespace {

struct TNormCache {
    double nu = -1.0;
    double log_norm = 0.0;
};

double t_log_norm(double nu) {
    thread_local TNormCache cache;
    if (cache.nu != nu) {
        cache.nu = nu;
        cache.log_norm = std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) -
                         0.5 * std::log(nu * kPi);
    }
    return cache.log_norm;
}

bool near_integer(double nu, int k) { return std::fabs(nu - k) < 1e-12; }

}  // namespace

double student_t_pdf(double x, double nu) {
    if (!(nu > 0.0)) throw std::domain_error("student_t_pdf: nu must be positive");
    return std::exp(t_log_norm(nu) - 0.5 * (nu + 1.0) * std::log1p(x * x / nu));
}

double student_t_cdf(double x, double nu) {
    if (!(nu > 0.0)) throw std::domain_error("student_t_cdf: nu must be positive");
    if (std::isinf(x)) return x > 0.0 ? 1.0 : 0.0;
    // Elementary forms for small integer nu.
    if (near_integer(nu, 1)) return 0.5 + std::atan(x) / kPi;
    if (near_integer(nu, 2)) return 0.5 * (1.0 + x / std::sqrt(2.0 + x * x));
    if (near_integer(nu, 3)) {
        const double s = x / std::numbers::sqrt3;
        return 0.5 + (std::atan(s) + s / (1.0 + s * s)) / kPi;
    }
    if (near_integer(nu, 4)) {
        const double w = x / std::sqrt(4.0 + x * x);
        return 0.5 + 0.75 * w * (1.0 - w * w / 3.0);
    }
    const double u = nu / (nu + x * x);
    const double tail = 0.5 * incomplete_beta(0.5 * nu, 0.5, u);
    return x >= 0.0 ? 1.0 - tail : tail;
}

double student_t_quantile(double p, double nu) {
    if (!(nu > 0.0)) throw std::domain_error("student_t_quantile: nu must be positive");
    if (!(p > 0.0 && p < 1.0)) throw std::domain_error("student_t_quantile: p must be in (0,1)");
    if (near_integer(nu, 1)) return std::tan(kPi * (p - 0.5));
    if (near_integer(nu, 2)) {
        const double w = 2.0 * p - 1.0;
        return w * std::sqrt(2.0 / ((1.0 - w) * (1.0 + w)));
    }

    // Seed: Cornish-Fisher expansion around the normal quantile, switching to
    // the power-tail inversion deep in the tails.
    const double pmin = std::min(p, 1.0 - p);
    double x;
    if (pmin < 0.01) {
        // survival(x) ~ c_nu * nu^{(nu-1)/2} * x^{-nu}
        const double log_x =
            (t_log_norm(nu) + 0.5 * (nu - 1.0) * std::log(nu) - std::log(pmin)) / nu;
        x = std::exp(log_x);
        if (p < 0.5) x = -x;
    } else {
        const double z = normal_quantile(p);
        const double z3 = z * z * z;
        const double z5 = z3 * z * z;
        x = z + (z3 + z) / (4.0 * nu) + (5.0 * z5 + 16.0 * z3 + 3.0 * z) / (96.0 * nu * nu);
    }

    // Expand a bracket around the seed.
    double lo = x, hi = x;
    double step = std::max(0.5, 0.25 * std::fabs(x));
    for (int i = 0; i < 200 && student_t_cdf(lo, nu) > p; ++i) {
        lo -= step;
        step *= 2.0;
    }
    step = std::max(0.5, 0.25 * std::fabs(x));
    for (int i = 0; i < 200 && student_t_cdf(hi, nu) < p; ++i) {
        hi += step;
        step *= 2.0;
    }

    // Newton with bisection safeguard.
    x = std::clamp(x, lo, hi);
    for (int i = 0; i < 100; ++i) {
        const double fx = student_t_cdf(x, nu) - p;
        if (fx > 0.0) {
            hi = x;
        } else if (fx < 0.0) {
            lo = x;
        } else {
            return x;
        }
        const double d = student_t_pdf(x, nu);
        double next = (d > 0.0) ? x - fx / d : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::fabs(next - x) <= 1e-16 * (1.0 + std::fabs(x))) return next;
        x = next;
    }
    return x;
}

// ---------------------------------------------------------------------------
// Gauss-Legendre
// ---------------------------------------------------------------------------

namespace {

GaussLegendre compute_gauss_legendre(int n) {
    GaussLegendre rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / pp;
            x -= dx;
            if (std::fabs(dx) < 1e-15) break;
        }
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

double gl_panel(const std::function<double(double)>& f, double a, double b,
                const GaussLegendre& rule) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        sum += rule.weights[i] * f(c + h * rule.nodes[i]);
    }
    return h * sum;
}

}  // namespace

const GaussLegendre& gauss_legendre(int n) {
    static std::map<int, GaussLegendre> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, compute_gauss_legendre(n)).first;
    return it->second;
}

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double abs_tol, int max_panels) {
    if (a == b) return 0.0;
    const GaussLegendre& rule = gauss_legendre(15);
    struct Panel {
        double a, b, coarse;
    };
    std::vector<Panel> stack;
    stack.push_back({a, b, gl_panel(f, a, b, rule)});
    double total = 0.0;
    int used = 1;
    const double span = std::fabs(b - a);
    while (!stack.empty()) {
        const Panel p = stack.back();
        stack.pop_back();
        const double mid = 0.5 * (p.a + p.b);
        const double left = gl_panel(f, p.a, mid, rule);
        const double right = gl_panel(f, mid, p.b, rule);
        const double fine = left + right;
        const double local_tol = abs_tol * std::fabs(p.b - p.a) / span;
        if (std::fabs(fine - p.coarse) <= std::max(local_tol, 1e-300) ||
            std::fabs(p.b - p.a) < 1e-14 * span) {
            total += fine;
        } else {
            used += 2;
            if (used > max_panels)
                throw ConvergenceError("integrate_adaptive: panel budget exhausted");
            stack.push_back({p.a, mid, left});
            stack.push_back({mid, p.b, right});
        }
    }
    return total;
}

std::vector<double> graded_breakpoints(double a, double b, int n_panels, double edge_gap,
                                       bool grade_lower, bool grade_upper) {
    std::vector<double> breaks;
    if (!(b > a)) throw std::domain_error("graded_breakpoints: empty interval");
    if (grade_lower && grade_upper) {
        const double mid = 0.5 * (a + b);
        const int half = std::max(2, n_panels / 2);
        auto lo = graded_breakpoints(a, mid, half, edge_gap, true, false);
        auto hi = graded_breakpoints(mid, b, half, edge_gap, false, true);
        breaks = lo;
        breaks.insert(breaks.end(), hi.begin() + 1, hi.end());
        return breaks;
    }
    if (!grade_lower && !grade_upper) {
        breaks.reserve(n_panels + 1);
        for (int i = 0; i <= n_panels; ++i) breaks.push_back(a + (b - a) * i / n_panels);
        return breaks;
    }
    const double len = b - a;
    const double gap = std::min(edge_gap, 0.25 * len);
    const int k = std::max(1, n_panels - 1);
    const double ratio = std::pow(gap / len, 1.0 / k);
    // Distances from the graded end shrink geometrically down to `gap`.
    breaks.reserve(k + 2);
    if (grade_upper) {
        breaks.push_back(a);
        for (int j = 1; j <= k; ++j) breaks.push_back(b - len * std::pow(ratio, j));
        breaks.push_back(b);
    } else {
        breaks.push_back(a);
        for (int j = k; j >= 1; --j) breaks.push_back(a + len * std::pow(ratio, j));
        breaks.push_back(b);
    }
    return breaks;
}

double integrate_panels(const std::function<double(double)>& f, const std::vector<double>& breaks,
                        int m) {
    const GaussLegendre& rule = gauss_legendre(m);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        total += gl_panel(f, breaks[i], breaks[i + 1], rule);
    }
    return total;
}

// ---------------------------------------------------------------------------
// Root finding
// ---------------------------------------------------------------------------

double invert_increasing(const std::function<double(double)>& f, double target, double lo,
                         double hi, const InvertOptions& opts) {
    double a = lo, b = hi;
    double fa = f(a) - target;
    double fb = f(b) - target;
    if (std::fabs(fa) <= opts.f_tol) return a;
    if (std::fabs(fb) <= opts.f_tol) return b;
    if (fa > 0.0 || fb < 0.0) {
        if (fa > 0.0 && fa <= opts.accept_tol) return a;
        if (fb < 0.0 && -fb <= opts.accept_tol) return b;
        throw std::domain_error("invert_increasing: target not bracketed");
    }

    double best_x = (std::fabs(fa) < std::fabs(fb)) ? a : b;
    double best_f = std::min(std::fabs(fa), std::fabs(fb));
    int side = 0;
    for (int iter = 0; iter < opts.max_iter; ++iter) {
        double x;
        if (iter % 6 == 5 || fb == fa) {
            x = 0.5 * (a + b);  // periodic bisection keeps flat stretches moving
        } else {
            x = (a * fb - b * fa) / (fb - fa);
            const double width = b - a;
            if (!(x > a + 1e-3 * width * 1e-9) || !(x < b - 1e-3 * width * 1e-9)) {
                x = 0.5 * (a + b);
            }
        }
        const double fx = f(x) - target;
        if (std::fabs(fx) < best_f) {
            best_f = std::fabs(fx);
            best_x = x;
        }
        if (std::fabs(fx) <= opts.f_tol) return x;
        if (fx < 0.0) {
            a = x;
            fa = fx;
            if (side == -1) fb *= 0.5;
            side = -1;
        } else {
            b = x;
            fb = fx;
            if (side == 1) fa *= 0.5;
            side = 1;
        }
        if (b - a <= 1e-16 * (1.0 + std::fabs(a) + std::fabs(b))) break;
    }
    if (best_f <= opts.accept_tol) return best_x;
    throw ConvergenceError("invert_increasing: tolerance not met within iteration budget");
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace covar::num
