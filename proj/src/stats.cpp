#include "perceptsim/stats.hpp"

#include "perceptsim/error.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <fmt/format.h>

namespace perceptsim {

namespace {

void require_finite(std::span<const double> values, const char* what) {
    if (values.empty()) throw DomainError(fmt::format("{}: empty input", what));
    for (double v : values) {
        if (!std::isfinite(v)) throw DomainError(fmt::format("{}: non-finite input", what));
    }
}

void require_spread(std::span<const double> values, const char* what) {
    require_finite(values, what);
    if (values.size() < 3) throw DomainError(fmt::format("{}: needs at least 3 values", what));
    auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    if (*lo == *hi || central_moment(values, 2) <= 0.0) {
        throw DomainError(fmt::format("{}: zero variance", what));
    }
}

}  // namespace

double mean(std::span<const double> values) {
    require_finite(values, "mean");
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum / static_cast<double>(values.size());
}

double central_moment(std::span<const double> values, int order) {
    const double m = mean(values);
    double sum = 0.0;
    for (double v : values) sum += std::pow(v - m, order);
    return sum / static_cast<double>(values.size());
}

double quantile_sorted(std::span<const double> sorted, double p) {
    if (sorted.empty()) throw DomainError("quantile: empty input");
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError(fmt::format("quantile: p = {} not in [0, 1]", p));
    const double h = static_cast<double>(sorted.size() - 1) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

DescriptiveSummary describe(std::span<const double> values) {
    require_finite(values, "describe");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());

    DescriptiveSummary s;
    s.count = sorted.size();
    // Summing sorted values makes the result independent of input order.
    double sum = 0.0;
    for (double v : sorted) sum += v;
    s.mean = sum / static_cast<double>(s.count);
    if (sorted.front() == sorted.back()) {
        s.mean = sorted.front();
    } else if (s.count > 1) {
        double ss = 0.0;
        for (double v : sorted) ss += (v - s.mean) * (v - s.mean);
        s.sd = std::sqrt(ss / static_cast<double>(s.count - 1));
    }
    s.min = sorted.front();
    s.max = sorted.back();
    s.q25 = quantile_sorted(sorted, 0.25);
    s.median = quantile_sorted(sorted, 0.5);
    s.q75 = quantile_sorted(sorted, 0.75);
    return s;
}

double skewness(std::span<const double> values) {
    require_spread(values, "skewness");
    const double m2 = central_moment(values, 2);
    return central_moment(values, 3) / std::pow(m2, 1.5);
}

double kurtosis(std::span<const double> values) {
    require_spread(values, "kurtosis");
    const double m2 = central_moment(values, 2);
    return central_moment(values, 4) / (m2 * m2);
}

}  // namespace perceptsim
