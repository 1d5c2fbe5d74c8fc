#include "perceptsim/distributions.hpp"

#include "perceptsim/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace perceptsim {

namespace {

constexpr int kMaxIterations = 300;
constexpr double kTolerance = 1e-14;
constexpr double kTiny = 1e-300;

void check_df(double df, const char* what) {
    if (!(df >= 1.0) || !std::isfinite(df)) throw DomainError(fmt::format("{}: invalid df {}", what, df));
}

// Continued fraction for I_x(a, b), modified Lentz.
double beta_fraction(double a, double b, double x) {
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIterations; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kTolerance) return h;
    }
    throw ConvergenceError(fmt::format("incomplete beta: no convergence for a={}, b={}, x={}", a, b, x));
}

// lgamma(x) minus its Stirling approximation, x >= 10.
double stirling_correction(double x) {
    const double x2 = 1.0 / (x * x);
    return (1.0 / 12.0 +
            x2 * (-1.0 / 360.0 +
                  x2 * (1.0 / 1260.0 +
                        x2 * (-1.0 / 1680.0 + x2 * (1.0 / 1188.0 + x2 * (-691.0 / 360360.0 + x2 / 156.0)))))) /
           x;
}

// log B(a, b). Large arguments go through Stirling corrections instead of
// differencing lgamma values, which cancel badly once a + b is large.
double log_beta(double a, double b) {
    const double p = std::min(a, b);
    const double q = std::max(a, b);
    const double ln_sqrt_2pi = 0.918938533204672741780329736406;
    if (p >= 10.0) {
        const double corr = stirling_correction(p) + stirling_correction(q) - stirling_correction(p + q);
        return -0.5 * std::log(q) + ln_sqrt_2pi + corr + (p - 0.5) * std::log(p / (p + q)) +
               q * std::log1p(-p / (p + q));
    }
    if (q >= 10.0) {
        const double corr = stirling_correction(q) - stirling_correction(p + q);
        return std::lgamma(p) + corr + p - p * std::log(p + q) + (q - 0.5) * std::log1p(-p / (p + q));
    }
    return std::lgamma(p) + std::lgamma(q) - std::lgamma(p + q);
}

// log of x^a (1-x)^b / B(a, b).
double beta_front_log(double a, double b, double x) {
    return a * std::log(x) + b * std::log1p(-x) - log_beta(a, b);
}

// Returns I_x(a, b) when `upper` is false, 1 - I_x(a, b) when true, choosing
// the side of the symmetry I_x(a, b) = 1 - I_{1-x}(b, a) on which the
// continued fraction converges quickly.
double incomplete_beta(double a, double b, double x, bool upper) {
    if (!(a > 0.0) || !(b > 0.0)) throw DomainError(fmt::format("incomplete beta: a={}, b={} must be positive", a, b));
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError(fmt::format("incomplete beta: x={} not in [0, 1]", x));
    if (x == 0.0) return upper ? 1.0 : 0.0;
    if (x == 1.0) return upper ? 0.0 : 1.0;

    const double front = beta_front_log(a, b, x);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        const double lower = std::exp(front) * beta_fraction(a, b, x) / a;
        return upper ? 1.0 - lower : lower;
    }
    const double tail = std::exp(front) * beta_fraction(b, a, 1.0 - x) / b;
    return upper ? tail : 1.0 - tail;
}

double gamma_series(double a, double x) {
    double sum = 1.0 / a;
    double del = sum;
    double ap = a;
    for (int n = 1; n <= kMaxIterations; ++n) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * kTolerance) {
            return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
        }
    }
    throw ConvergenceError(fmt::format("incomplete gamma series: no convergence for a={}, x={}", a, x));
}

double gamma_fraction(double a, double x) {
    double b = x + 1.0 - a;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= kMaxIterations; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = b + an / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kTolerance) return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
    }
    throw ConvergenceError(fmt::format("incomplete gamma fraction: no convergence for a={}, x={}", a, x));
}

void check_gamma(double a, double x) {
    if (!(a > 0.0)) throw DomainError(fmt::format("incomplete gamma: a={} must be positive", a));
    if (!(x >= 0.0)) throw DomainError(fmt::format("incomplete gamma: x={} must be non-negative", x));
}

}  // namespace

double regularized_beta(double a, double b, double x) { return incomplete_beta(a, b, x, false); }

double regularized_gamma_p(double a, double x) {
    check_gamma(a, x);
    if (x == 0.0) return 0.0;
    if (std::isinf(x)) return 1.0;
    return x < a + 1.0 ? gamma_series(a, x) : 1.0 - gamma_fraction(a, x);
}

double regularized_gamma_q(double a, double x) {
    check_gamma(a, x);
    if (x == 0.0) return 1.0;
    if (std::isinf(x)) return 0.0;
    return x < a + 1.0 ? 1.0 - gamma_series(a, x) : gamma_fraction(a, x);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double t_cdf(double t, double df) {
    check_df(df, "t_cdf");
    if (std::isnan(t)) throw DomainError("t_cdf: NaN statistic");
    if (std::isinf(t)) return t > 0 ? 1.0 : 0.0;
    // P(|T| > |t|) = I_{df/(df+t^2)}(df/2, 1/2)
    const double tail = 0.5 * t_two_sided_p(t, df);
    return t > 0.0 ? 1.0 - tail : tail;
}

double t_two_sided_p(double t, double df) {
    check_df(df, "t_two_sided_p");
    if (std::isnan(t)) throw DomainError("t_two_sided_p: NaN statistic");
    if (std::isinf(t)) return 0.0;
    const double t2 = t * t;
    // Use whichever of x = df/(df+t^2) or 1 - x = t^2/(df+t^2) is computed
    // without cancellation.
    if (t2 < df) {
        return incomplete_beta(0.5, 0.5 * df, t2 / (df + t2), true);
    }
    return incomplete_beta(0.5 * df, 0.5, df / (df + t2), false);
}

double f_cdf(double x, double df1, double df2) {
    check_df(df1, "f_cdf");
    check_df(df2, "f_cdf");
    if (!(x >= 0.0)) throw DomainError(fmt::format("f_cdf: x={} must be non-negative", x));
    if (std::isinf(x)) return 1.0;
    return incomplete_beta(0.5 * df1, 0.5 * df2, df1 * x / (df1 * x + df2), false);
}

double f_sf(double x, double df1, double df2) {
    check_df(df1, "f_sf");
    check_df(df2, "f_sf");
    if (!(x >= 0.0)) throw DomainError(fmt::format("f_sf: x={} must be non-negative", x));
    if (std::isinf(x)) return 0.0;
    return incomplete_beta(0.5 * df2, 0.5 * df1, df2 / (df2 + df1 * x), false);
}

double chi2_cdf(double x, double df) {
    check_df(df, "chi2_cdf");
    if (!(x >= 0.0)) throw DomainError(fmt::format("chi2_cdf: x={} must be non-negative", x));
    return regularized_gamma_p(0.5 * df, 0.5 * x);
}

double chi2_sf(double x, double df) {
    check_df(df, "chi2_sf");
    if (!(x >= 0.0)) throw DomainError(fmt::format("chi2_sf: x={} must be non-negative", x));
    return regularized_gamma_q(0.5 * df, 0.5 * x);
}

double t_quantile(double p, double df) {
    check_df(df, "t_quantile");
    if (!(p > 0.0 && p < 1.0)) throw DomainError(fmt::format("t_quantile: p={} not in (0, 1)", p));
    if (p == 0.5) return 0.0;
    double lo = -1.0;
    double hi = 1.0;
    while (t_cdf(lo, df) > p) lo *= 2.0;
    while (t_cdf(hi, df) < p) hi *= 2.0;
    for (int i = 0; i < 200 && hi - lo > 1e-13 * std::max(1.0, std::fabs(hi)); ++i) {
        const double mid = 0.5 * (lo + hi);
        (t_cdf(mid, df) < p ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace perceptsim
