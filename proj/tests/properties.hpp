#pragma once

// Randomized property checks shared by the unit suite and the acceptance
// binary. Each returns how many generated cases ran and how many failed.

#include "perceptsim/composer.hpp"
#include "perceptsim/histogram.hpp"
#include "perceptsim/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

namespace props {

struct Outcome {
    int cases = 0;
    int failures = 0;
    std::string first_failure;

    bool passed() const { return cases > 0 && failures == 0; }
};

inline perceptsim::LikertScale random_scale(std::mt19937_64& gen) {
    std::uniform_int_distribution<int> lo(-3, 3);
    std::uniform_int_distribution<int> width(1, 10);
    const int min = lo(gen);
    return {min, min + width(gen)};
}

inline std::vector<perceptsim::CodedItem> random_items(std::mt19937_64& gen, const perceptsim::LikertScale& scale,
                                                       std::size_t m) {
    std::uniform_real_distribution<double> mean(scale.min, scale.max);
    std::uniform_real_distribution<double> log_sd(std::log(0.05), std::log(3.0));
    std::vector<perceptsim::CodedItem> items;
    for (std::size_t i = 0; i < m; ++i) {
        const double sd = std::exp(log_sd(gen));
        items.push_back({"i" + std::to_string(i), mean(gen), sd, perceptsim::inverse_weight(sd)});
    }
    return items;
}

inline void fail(Outcome& o, std::string what) {
    if (o.failures++ == 0) o.first_failure = std::move(what);
}

inline Outcome reverse_involution(std::uint64_t seed, int cases) {
    std::mt19937_64 gen(seed);
    Outcome o;
    for (int c = 0; c < cases; ++c, ++o.cases) {
        const auto scale = random_scale(gen);
        const double x = std::uniform_real_distribution<double>(scale.min, scale.max)(gen);
        const double back = perceptsim::reverse_code(perceptsim::reverse_code(x, scale), scale);
        if (std::fabs(back - x) > 1e-12 * std::max(1.0, std::fabs(x))) fail(o, "x=" + std::to_string(x));
    }
    return o;
}

inline Outcome sd_invariant_under_reversal(std::uint64_t seed, int cases) {
    std::mt19937_64 gen(seed);
    Outcome o;
    for (int c = 0; c < cases; ++c, ++o.cases) {
        const auto scale = random_scale(gen);
        auto items = random_items(gen, scale, 2 + gen() % 8);
        const double sd = perceptsim::bessel_weighted_sd(items, perceptsim::weighted_mean(items));
        for (auto& item : items) item.mean = perceptsim::reverse_code(item.mean, scale);
        const double flipped = perceptsim::bessel_weighted_sd(items, perceptsim::weighted_mean(items));
        if (std::fabs(flipped - sd) > 1e-9 * std::max(sd, 1e-300) + 1e-13) fail(o, "case " + std::to_string(c));
    }
    return o;
}

inline Outcome mean_in_convex_hull(std::uint64_t seed, int cases) {
    std::mt19937_64 gen(seed);
    Outcome o;
    for (int c = 0; c < cases; ++c, ++o.cases) {
        const auto scale = random_scale(gen);
        auto items = random_items(gen, scale, 1 + gen() % 10);
        const auto [lo_it, hi_it] = std::minmax_element(items.begin(), items.end(), [](const auto& a, const auto& b) {
            return a.mean < b.mean;
        });
        const double lo_mean = lo_it->mean;
        const double hi_mean = hi_it->mean;
        const double m = perceptsim::weighted_mean(items);
        if (m < lo_mean || m > hi_mean) fail(o, "case " + std::to_string(c));
        std::shuffle(items.begin(), items.end(), gen);
        const double magnitude = std::max(std::fabs(lo_mean), std::fabs(hi_mean));
        if (std::fabs(perceptsim::weighted_mean(items) - m) > 1e-12 * magnitude) {
            fail(o, "permutation changed the mean in case " + std::to_string(c));
        }
    }
    return o;
}

inline Outcome normalized_weights_scale_invariant(std::uint64_t seed, int cases) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> u(0.01, 2.0);
    std::uniform_real_distribution<double> factor(0.01, 100.0);
    Outcome o;
    for (int c = 0; c < cases; ++c, ++o.cases) {
        const std::size_t k = 1 + gen() % 6;
        std::vector<perceptsim::ThemeComposite> base;
        for (std::size_t t = 0; t < k; ++t) base.push_back({"T" + std::to_string(t), 3.0, u(gen), 0.0, 2});
        auto scaled = base;
        const double f = factor(gen);
        for (auto& comp : scaled) comp.weighted_sd *= f;
        const auto a = perceptsim::resolve_parameters(base, {});
        const auto b = perceptsim::resolve_parameters(scaled, {});
        for (std::size_t t = 0; t < k; ++t) {
            if (std::fabs(a[t].normalized_weight - b[t].normalized_weight) > 1e-12) {
                fail(o, "case " + std::to_string(c));
                break;
            }
        }
    }
    return o;
}

inline Outcome histogram_conserves_counts(std::uint64_t seed, int cases) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> z(0.0, 1.0);
    Outcome o;
    for (int c = 0; c < cases; ++c, ++o.cases) {
        std::vector<double> v(1 + gen() % 400);
        const double spread = (c % 5 == 0) ? 0.0 : std::exp(z(gen));
        for (auto& x : v) x = 4.0 + spread * z(gen);
        const std::size_t bins = 1 + gen() % 60;
        const auto h = perceptsim::make_histogram(v, bins);
        std::size_t total = 0;
        for (const auto& b : h) total += b.count;
        bool contiguous = h.size() == bins;
        for (std::size_t i = 1; i < h.size(); ++i) contiguous = contiguous && h[i].lower == h[i - 1].upper;
        if (total != v.size() || !contiguous) fail(o, "case " + std::to_string(c));
    }
    return o;
}

}  // namespace props
