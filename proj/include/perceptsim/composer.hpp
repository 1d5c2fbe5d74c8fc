#pragma once

#include "perceptsim/study.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace perceptsim {

// An item after directional alignment: `mean` is reverse-coded when the
// source item is flagged, `sd` is the source SD untouched, and `weight` is
// the unnormalized inverse-variance weight 1/sd^2.
struct CodedItem {
    std::string id;
    double mean = 0.0;
    double sd = 0.0;
    double weight = 0.0;
};

// Fixed-effect composite for one theme. `weighted_sd` is the Bessel-corrected
// weighted SD; `total_weight` is the sum of unnormalized item weights.
struct ThemeComposite {
    std::string theme_id;
    double weighted_mean = 0.0;
    double weighted_sd = 0.0;
    double total_weight = 0.0;
    std::size_t item_count = 0;
};

// x' = min + max - x. Exact involution on representable inputs in range.
double reverse_code(double mean, const LikertScale& scale);

// 1 / sd^2. Throws DomainError unless sd > 0.
double inverse_weight(double sd);

CodedItem code_item(const ItemStat& item, const LikertScale& scale);

// sum(w_i x_i) / sum(w_i). Throws DomainError on an empty list.
double weighted_mean(std::span<const CodedItem> items);

/// Bessel-corrected weighted SD around `mean`:
///
///     s^2 = sum(w_i (x_i - mean)^2) / ((M - 1) / M * sum(w_i))
///
/// Weights stay unnormalized. Requires M >= 2.
double bessel_weighted_sd(std::span<const CodedItem> items, double mean);

// Chains the above for one theme of `spec`. Requires at least two items.
ThemeComposite compose_theme(const StudySpec& spec, const ThemeSpec& theme);

// compose_theme over every theme, in file order.
std::vector<ThemeComposite> compose_all(const StudySpec& spec);

}  // namespace perceptsim
