#pragma once

#include "perceptsim/composer.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace perceptsim {

// Replaces the computed (mean, sd) of one theme.
struct ThemeOverride {
    std::string theme_id;
    double mean = 0.0;
    double sd = 0.0;

    friend bool operator==(const ThemeOverride&, const ThemeOverride&) = default;
};

struct SimulationConfig {
    std::size_t n = 10000;
    double noise_sd = 0.05;
    double clip_min = 1.0;
    double clip_max = 5.0;
    std::uint64_t seed = 42;
    std::vector<ThemeOverride> overrides;

    friend bool operator==(const SimulationConfig&, const SimulationConfig&) = default;
};

// Normal parameters actually fed to the generator for one theme, with the
// inverse-variance weight derived from `sd`.
struct ThemeParameters {
    std::string theme_id;
    double mean = 0.0;
    double sd = 0.0;
    double weight = 0.0;             // 1 / sd^2
    double normalized_weight = 0.0;  // weight / sum of weights
};

struct Cohort {
    // theme_scores[k][j] is the draw for theme k, respondent j.
    std::vector<std::vector<double>> theme_scores;
    std::vector<double> success;
    std::size_t clipped_count = 0;
    SimulationConfig config_echo;
    std::vector<ThemeParameters> composites_echo;

    std::size_t size() const noexcept { return success.size(); }
    std::size_t theme_count() const noexcept { return theme_scores.size(); }
};

struct SuccessMoments {
    double mean = 0.0;
    double sd = 0.0;
};

// Throws DomainError on an invalid config (n = 0, negative noise, empty or
// inverted clip range).
void check_config(const SimulationConfig& config);

// Composite (mean, sd) per theme with `overrides` applied by theme id and
// weights recomputed from the resulting SDs. Throws DomainError on an
// override naming an unknown theme or any sd <= 0.
std::vector<ThemeParameters> resolve_parameters(std::span<const ThemeComposite> composites,
                                                std::span<const ThemeOverride> overrides);

// Draws the cohort. Stream layout: all n draws for theme 1, then theme 2,
// ..., then n noise draws. For each respondent
//
//     success = clamp(sum(w_k T_k) / sum(w_k) + noise, clip_min, clip_max)
//
// Identical (parameters, config) always give bit-identical output.
Cohort run_simulation(std::span<const ThemeParameters> parameters, const SimulationConfig& config);

// Convenience: resolve_parameters(composites, config.overrides) then simulate.
Cohort run_simulation(std::span<const ThemeComposite> composites, const SimulationConfig& config);

// Pre-clip success moments: mean = sum(w mu)/sum(w), sd = sqrt(1/sum(w) + noise^2).
SuccessMoments expected_success_moments(std::span<const ThemeParameters> parameters, double noise_sd);

}  // namespace perceptsim
