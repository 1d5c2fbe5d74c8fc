#pragma once

#include <cstddef>
#include <span>

namespace perceptsim {

// Quantiles use linear interpolation between closest ranks
// (h = (n - 1) p, Hyndman-Fan type 7). `sd` uses the n - 1 denominator and
// is reported as 0 for a single value.
struct DescriptiveSummary {
    std::size_t count = 0;
    double mean = 0.0;
    double sd = 0.0;
    double min = 0.0;
    double q25 = 0.0;
    double median = 0.0;
    double q75 = 0.0;
    double max = 0.0;
};

// Throws DomainError on empty or non-finite input.
DescriptiveSummary describe(std::span<const double> values);

// Type-7 quantile of already sorted data, p in [0, 1].
double quantile_sorted(std::span<const double> sorted, double p);

double mean(std::span<const double> values);

// Population (n-denominator) central moment of order `order`.
double central_moment(std::span<const double> values, int order);

// m3 / m2^(3/2) and m4 / m2^2 (Pearson, not excess). Need n >= 3 and
// nonzero variance, otherwise DomainError.
double skewness(std::span<const double> values);
double kurtosis(std::span<const double> values);

}  // namespace perceptsim
