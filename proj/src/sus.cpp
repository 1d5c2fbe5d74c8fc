#include "perceptsim/sus.hpp"

#include "perceptsim/error.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace perceptsim {

std::string_view to_string(SusBand band) noexcept {
    switch (band) {
        case SusBand::Poor: return "Poor";
        case SusBand::Marginal: return "Marginal";
        case SusBand::Acceptable: return "Acceptable";
        case SusBand::Good: return "Good";
        case SusBand::Excellent: return "Excellent";
    }
    return "Poor";
}

std::string_view to_string(SusMethod method) noexcept {
    return method == SusMethod::ItemsBased ? "items-based" : "composite-linear";
}

SusBand sus_band(double score) {
    if (!(score >= 0.0 && score <= 100.0)) throw DomainError(fmt::format("sus_band: score {} not in [0, 100]", score));
    if (score <= 50.0) return SusBand::Poor;
    if (score <= 69.0) return SusBand::Marginal;
    if (score <= 79.0) return SusBand::Acceptable;
    if (score <= 89.0) return SusBand::Good;
    return SusBand::Excellent;
}

SusResult sus_from_items(const StudySpec& spec) {
    if (spec.items.empty()) throw DomainError("sus_from_items: study has no items");
    const double range = spec.scale.span();
    if (!(range > 0.0)) throw DomainError("sus_from_items: degenerate scale");

    double total = 0.0;
    for (const auto& item : spec.items) {
        if (!spec.scale.contains(item.mean)) {
            throw DomainError(fmt::format("sus_from_items: item '{}' mean outside scale", item.id));
        }
        total += item.reverse ? static_cast<double>(spec.scale.max) - item.mean
                              : item.mean - static_cast<double>(spec.scale.min);
    }
    SusResult result;
    result.method = SusMethod::ItemsBased;
    result.score = std::clamp(total * 100.0 / (range * static_cast<double>(spec.items.size())), 0.0, 100.0);
    result.band = sus_band(result.score);
    return result;
}

SusResult sus_from_composite(double mean, const LikertScale& scale) {
    if (!std::isfinite(mean) || !scale.contains(mean)) {
        throw DomainError(fmt::format("sus_from_composite: {} outside scale [{}, {}]", mean, scale.min, scale.max));
    }
    SusResult result;
    result.method = SusMethod::CompositeLinear;
    result.score = std::clamp(100.0 * (mean - scale.min) / scale.span(), 0.0, 100.0);
    result.band = sus_band(result.score);
    return result;
}

}  // namespace perceptsim
