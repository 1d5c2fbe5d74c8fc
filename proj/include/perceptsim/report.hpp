#pragma once

#include "perceptsim/composer.hpp"
#include "perceptsim/histogram.hpp"
#include "perceptsim/regression.hpp"
#include "perceptsim/simulator.hpp"
#include "perceptsim/stats.hpp"
#include "perceptsim/study.hpp"
#include "perceptsim/sus.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace perceptsim {

inline constexpr std::string_view kToolVersion = "1.0.0";

// Fixed-point rendering with `digits` decimals. Rounds the exact binary value;
// exact ties go to even. Only used for display, never fed back into math.
std::string format_fixed(double value, int digits = 4);

// Hex SHA-256 of `bytes`.
std::string sha256_hex(std::string_view bytes);

// A computed theme composite compared against the value published for it.
struct CompositeErratum {
    std::string theme_id;
    double computed_mean = 0.0;
    double computed_sd = 0.0;
    double published_mean = 0.0;
    double published_sd = 0.0;
    bool diverges = false;
    std::string note;
};

// One entry per theme that carries a published composite.
std::vector<CompositeErratum> compare_published(const StudySpec& spec, std::span<const ThemeComposite> composites);

struct SusComparison {
    SusResult items_based;
    SusResult composite_linear;
    std::optional<SusRange> published;
    bool published_reproduced = false;  // either computed score inside the published range
};

SusComparison compare_sus(const StudySpec& spec, double success_mean);

struct StudyEcho {
    std::string path;
    std::string sha256;
    StudyMetadata metadata;
};

// Effective configuration of a run after flag / env / file / default
// resolution.
struct RunSettings {
    SimulationConfig simulation;
    std::size_t bins = 50;
    bool replicate_paper = false;
    std::string format = "json";
    std::optional<std::string> out_dir;
    bool svg = false;
    bool timestamp = true;
};

struct RunReport {
    StudyEcho study_echo;
    std::vector<ThemeComposite> composites;
    std::vector<CompositeErratum> errata;
    std::vector<ThemeParameters> parameters;
    DescriptiveSummary cohort_summary;
    std::size_t clipped_count = 0;
    std::vector<HistogramBin> histogram;
    std::optional<OlsFit> ols;
    SusComparison sus;
    RunSettings config_echo;
    std::vector<std::string> warnings;
    std::string tool_version{kToolVersion};
    std::optional<std::string> timestamp;
};

nlohmann::ordered_json to_json(const ThemeComposite& composite);
nlohmann::ordered_json to_json(const DescriptiveSummary& summary);
nlohmann::ordered_json to_json(const OlsFit& fit);
nlohmann::ordered_json to_json(const SusResult& sus);
nlohmann::ordered_json to_json(const SimulationConfig& config);
nlohmann::ordered_json to_json(const RunSettings& settings);
nlohmann::ordered_json to_json(std::span<const HistogramBin> bins);
nlohmann::ordered_json to_json(const RunReport& report);

// Plain-text regression summary laid out like the statsmodels OLS table.
std::string render_ols_table(const OlsFit& fit, std::string_view dependent = "success");

// One human-readable line, e.g. "SUS (items-based): 73.85 -> Acceptable".
std::string render_sus_line(const SusResult& sus);

// `theme_1,...,theme_K,success` with 17 significant digits.
std::string cohort_csv(const Cohort& cohort);

// Reads a cohort CSV back. The result carries theme columns and success
// only; config/composite echoes are left default. ParseError on malformed
// input.
Cohort parse_cohort_csv(std::string_view text);

// `bin_lower,bin_upper,count`.
std::string histogram_csv(std::span<const HistogramBin> bins);

// `theme_id,weighted_mean,weighted_sd,total_weight,item_count`.
std::string composites_csv(std::span<const ThemeComposite> composites);

std::string utc_timestamp();

}  // namespace perceptsim
