#include "perceptsim/simulator.hpp"

#include "perceptsim/error.hpp"
#include "perceptsim/rng.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace perceptsim {

namespace {

void normalize(std::vector<ThemeParameters>& params) {
    double total = 0.0;
    for (const auto& p : params) total += p.weight;
    for (auto& p : params) p.normalized_weight = p.weight / total;
}

void check_parameters(std::span<const ThemeParameters> parameters) {
    if (parameters.empty()) throw DomainError("simulation needs at least one theme");
    for (const auto& p : parameters) {
        if (!(p.sd > 0.0) || !std::isfinite(p.sd) || !std::isfinite(p.mean)) {
            throw DomainError(fmt::format("theme '{}': sd must be positive and finite, got {}", p.theme_id, p.sd));
        }
    }
}

}  // namespace

void check_config(const SimulationConfig& config) {
    if (config.n == 0) throw DomainError("cohort size n must be at least 1");
    if (!(config.noise_sd >= 0.0) || !std::isfinite(config.noise_sd)) {
        throw DomainError(fmt::format("noise_sd must be non-negative, got {}", config.noise_sd));
    }
    if (!(config.clip_min < config.clip_max)) {
        throw DomainError(fmt::format("clip_min {} must be below clip_max {}", config.clip_min, config.clip_max));
    }
}

std::vector<ThemeParameters> resolve_parameters(std::span<const ThemeComposite> composites,
                                                std::span<const ThemeOverride> overrides) {
    std::vector<ThemeParameters> params;
    params.reserve(composites.size());
    for (const auto& c : composites) params.push_back({c.theme_id, c.weighted_mean, c.weighted_sd, 0.0, 0.0});

    for (const auto& o : overrides) {
        auto it = std::find_if(params.begin(), params.end(),
                               [&](const ThemeParameters& p) { return p.theme_id == o.theme_id; });
        if (it == params.end()) throw DomainError(fmt::format("override names unknown theme '{}'", o.theme_id));
        it->mean = o.mean;
        it->sd = o.sd;
    }

    check_parameters(params);
    for (auto& p : params) p.weight = inverse_weight(p.sd);
    normalize(params);
    return params;
}

Cohort run_simulation(std::span<const ThemeParameters> parameters, const SimulationConfig& config) {
    check_config(config);
    check_parameters(parameters);

    Cohort cohort;
    cohort.config_echo = config;
    cohort.composites_echo.assign(parameters.begin(), parameters.end());
    for (auto& p : cohort.composites_echo) p.weight = inverse_weight(p.sd);
    normalize(cohort.composites_echo);

    const std::size_t n = config.n;
    VariateStream stream(config.seed);

    cohort.theme_scores.resize(parameters.size());
    for (std::size_t k = 0; k < parameters.size(); ++k) {
        auto& column = cohort.theme_scores[k];
        column.resize(n);
        for (std::size_t j = 0; j < n; ++j) column[j] = stream.normal(parameters[k].mean, parameters[k].sd);
    }

    double total_weight = 0.0;
    for (const auto& p : cohort.composites_echo) total_weight += p.weight;

    cohort.success.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        double weighted = 0.0;
        for (std::size_t k = 0; k < parameters.size(); ++k) {
            weighted += cohort.composites_echo[k].weight * cohort.theme_scores[k][j];
        }
        const double raw = weighted / total_weight + config.noise_sd * stream.standard_normal();
        const double clipped = std::clamp(raw, config.clip_min, config.clip_max);
        if (clipped != raw) ++cohort.clipped_count;
        cohort.success[j] = clipped;
    }
    return cohort;
}

Cohort run_simulation(std::span<const ThemeComposite> composites, const SimulationConfig& config) {
    auto params = resolve_parameters(composites, config.overrides);
    return run_simulation(params, config);
}

SuccessMoments expected_success_moments(std::span<const ThemeParameters> parameters, double noise_sd) {
    check_parameters(parameters);
    if (!(noise_sd >= 0.0)) throw DomainError("noise_sd must be non-negative");
    double num = 0.0;
    double total = 0.0;
    for (const auto& p : parameters) {
        const double w = inverse_weight(p.sd);
        num += w * p.mean;
        total += w;
    }
    return {num / total, std::sqrt(1.0 / total + noise_sd * noise_sd)};
}

}  // namespace perceptsim
