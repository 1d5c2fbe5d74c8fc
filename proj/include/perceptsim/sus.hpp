#pragma once

#include "perceptsim/study.hpp"

#include <string_view>

namespace perceptsim {

enum class SusBand { Poor, Marginal, Acceptable, Good, Excellent };
enum class SusMethod { ItemsBased, CompositeLinear };

struct SusResult {
    double score = 0.0;  // 0..100
    SusBand band = SusBand::Poor;
    SusMethod method = SusMethod::ItemsBased;
};

std::string_view to_string(SusBand band) noexcept;
std::string_view to_string(SusMethod method) noexcept;

// Poor [0, 50], Marginal (50, 69], Acceptable (69, 79], Good (79, 89],
// Excellent (89, 100]. DomainError outside [0, 100].
SusBand sus_band(double score);

// Standard SUS scoring generalized to any integer scale: positive items
// contribute mean - min, reverse items max - mean, and the total is scaled by
// 100 / (items * (max - min)). On the 10-item 1..5 instrument this is the
// usual 2.5 x sum of contributions.
SusResult sus_from_items(const StudySpec& spec);

// 100 (mean - min) / (max - min).
SusResult sus_from_composite(double mean, const LikertScale& scale);

}  // namespace perceptsim
