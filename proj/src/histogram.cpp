#include "perceptsim/histogram.hpp"

#include "perceptsim/error.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace perceptsim {

std::vector<HistogramBin> make_histogram(std::span<const double> values, std::size_t bins) {
    if (bins == 0) throw DomainError("histogram: bin count must be at least 1");
    if (values.empty()) throw DomainError("histogram: empty input");
    for (double v : values) {
        if (!std::isfinite(v)) throw DomainError("histogram: non-finite input");
    }
    const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    const double lo = *lo_it;
    const double hi = *hi_it;
    const double width = (hi - lo) / static_cast<double>(bins);

    std::vector<HistogramBin> out(bins);
    for (std::size_t b = 0; b < bins; ++b) {
        out[b].lower = b == 0 ? lo : lo + width * static_cast<double>(b);
        out[b].upper = b + 1 == bins ? hi : lo + width * static_cast<double>(b + 1);
    }
    // Edges are shared between neighbours, so the bins stay contiguous.
    for (std::size_t b = 1; b < bins; ++b) out[b].lower = out[b - 1].upper;

    for (double v : values) {
        std::size_t b = 0;
        if (width > 0.0) {
            b = static_cast<std::size_t>((v - lo) / width);
            b = std::min(b, bins - 1);
            // Floating-point division can land one bin off near an edge.
            while (b > 0 && v < out[b].lower) --b;
            while (b + 1 < bins && v >= out[b].upper) ++b;
        }
        ++out[b].count;
    }
    return out;
}

namespace {

std::string xml_escape(const std::string& text) {
    std::string out;
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

std::string histogram_svg(std::span<const HistogramBin> bins, const std::string& title, const std::string& x_label) {
    constexpr double kWidth = 640.0;
    constexpr double kHeight = 400.0;
    constexpr double kLeft = 60.0;
    constexpr double kRight = 20.0;
    constexpr double kTop = 40.0;
    constexpr double kBottom = 50.0;
    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;

    std::size_t peak = 0;
    for (const auto& b : bins) peak = std::max(peak, b.count);
    const double bar_w = bins.empty() ? 0.0 : plot_w / static_cast<double>(bins.size());

    std::string svg = fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\">\n"
        "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        "<text x=\"{2}\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">{3}</text>\n",
        kWidth, kHeight, kWidth / 2.0, xml_escape(title));
    for (std::size_t i = 0; i < bins.size(); ++i) {
        const double h = peak == 0 ? 0.0 : plot_h * static_cast<double>(bins[i].count) / static_cast<double>(peak);
        svg += fmt::format(
            "<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"cornflowerblue\" "
            "stroke=\"black\" stroke-width=\"0.5\"/>\n",
            kLeft + bar_w * static_cast<double>(i), kTop + plot_h - h, bar_w, h);
    }
    svg += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"black\"/>\n", kLeft,
                       kTop + plot_h, kLeft + plot_w);
    svg += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"black\"/>\n", kLeft, kTop,
                       kTop + plot_h);
    if (!bins.empty()) {
        svg += fmt::format(
            "<text x=\"{}\" y=\"{}\" text-anchor=\"start\" font-family=\"sans-serif\" font-size=\"11\">{:.4f}</text>\n",
            kLeft, kTop + plot_h + 15.0, bins.front().lower);
        svg += fmt::format(
            "<text x=\"{}\" y=\"{}\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">{:.4f}</text>\n",
            kLeft + plot_w, kTop + plot_h + 15.0, bins.back().upper);
    }
    svg += fmt::format(
        "<text x=\"{}\" y=\"{}\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">{}</text>\n",
        kLeft - 5.0, kTop + 4.0, peak);
    svg += fmt::format(
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">{}</text>\n",
        kLeft + plot_w / 2.0, kHeight - 12.0, xml_escape(x_label));
    svg += fmt::format(
        "<text x=\"16\" y=\"{0}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
        "transform=\"rotate(-90 16 {0})\">Frequency</text>\n",
        kTop + plot_h / 2.0);
    svg += "</svg>\n";
    return svg;
}

}  // namespace perceptsim
