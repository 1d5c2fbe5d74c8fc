#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace perceptsim {

struct HistogramBin {
    double lower = 0.0;
    double upper = 0.0;
    std::size_t count = 0;
};

// `bins` equal-width bins spanning [min, max] of the data. Bins are
// half-open except the last, which also takes the maximum. Constant data puts
// all mass in the first bin (every bin then has zero width). Throws
// DomainError on empty/non-finite data or bins == 0.
std::vector<HistogramBin> make_histogram(std::span<const double> values, std::size_t bins);

// Minimal standalone SVG bar chart with axis labels.
std::string histogram_svg(std::span<const HistogramBin> bins, const std::string& title, const std::string& x_label);

}  // namespace perceptsim
