#include "perceptsim/composer.hpp"

#include "perceptsim/error.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace perceptsim {

double reverse_code(double mean, const LikertScale& scale) {
    if (!std::isfinite(mean) || !scale.contains(mean)) {
        throw DomainError(fmt::format("reverse_code: {} outside scale [{}, {}]", mean, scale.min, scale.max));
    }
    // min + max is an exact small integer, so subtracting once rounds once and
    // subtracting again recovers the input.
    const double pivot = static_cast<double>(scale.min) + static_cast<double>(scale.max);
    return pivot - mean;
}

double inverse_weight(double sd) {
    if (!(sd > 0.0) || !std::isfinite(sd)) {
        throw DomainError(fmt::format("inverse_weight: sd must be positive, got {}", sd));
    }
    return 1.0 / (sd * sd);
}

CodedItem code_item(const ItemStat& item, const LikertScale& scale) {
    CodedItem coded;
    coded.id = item.id;
    coded.mean = item.reverse ? reverse_code(item.mean, scale) : item.mean;
    coded.sd = item.sd;
    coded.weight = inverse_weight(item.sd);
    return coded;
}

double weighted_mean(std::span<const CodedItem> items) {
    if (items.empty()) throw DomainError("weighted_mean: no items");
    double num = 0.0;
    double den = 0.0;
    double lo = items.front().mean;
    double hi = lo;
    for (const auto& item : items) {
        num += item.weight * item.mean;
        den += item.weight;
        lo = std::min(lo, item.mean);
        hi = std::max(hi, item.mean);
    }
    // Rounding can push the quotient an ulp outside the item means.
    return std::clamp(num / den, lo, hi);
}

double bessel_weighted_sd(std::span<const CodedItem> items, double mean) {
    const auto m = items.size();
    if (m < 2) throw DomainError(fmt::format("bessel_weighted_sd: needs at least 2 items, got {}", m));
    double num = 0.0;
    double total = 0.0;
    for (const auto& item : items) {
        const double d = item.mean - mean;
        num += item.weight * d * d;
        total += item.weight;
    }
    const double md = static_cast<double>(m);
    const double var = num / ((md - 1.0) / md * total);
    return std::sqrt(var);
}

ThemeComposite compose_theme(const StudySpec& spec, const ThemeSpec& theme) {
    std::vector<CodedItem> coded;
    coded.reserve(theme.item_ids.size());
    for (const auto& ref : theme.item_ids) {
        const ItemStat* item = spec.find_item(ref);
        if (item == nullptr) {
            throw DomainError(fmt::format("theme '{}' references unknown item '{}'", theme.id, ref));
        }
        coded.push_back(code_item(*item, spec.scale));
    }
    if (coded.size() < 2) {
        throw DomainError(fmt::format("theme '{}' needs at least 2 items for a weighted SD, has {}", theme.id,
                                      coded.size()));
    }

    ThemeComposite out;
    out.theme_id = theme.id;
    out.weighted_mean = weighted_mean(coded);
    out.weighted_sd = bessel_weighted_sd(coded, out.weighted_mean);
    for (const auto& c : coded) out.total_weight += c.weight;
    out.item_count = coded.size();
    return out;
}

std::vector<ThemeComposite> compose_all(const StudySpec& spec) {
    std::vector<ThemeComposite> out;
    out.reserve(spec.themes.size());
    for (const auto& theme : spec.themes) out.push_back(compose_theme(spec, theme));
    return out;
}

}  // namespace perceptsim
