#include "perceptsim/report.hpp"

#include "perceptsim/error.hpp"
#include "perceptsim/reference.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>

#include <fmt/format.h>
#include <openssl/evp.h>

namespace perceptsim {

using nlohmann::ordered_json;

std::string format_fixed(double value, int digits) { return fmt::format("{:.{}f}", value, digits); }

std::string sha256_hex(std::string_view bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int length = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
        throw Error("sha256: digest failed");
    }
    std::string hex;
    hex.reserve(2 * length);
    for (unsigned int i = 0; i < length; ++i) hex += fmt::format("{:02x}", digest[i]);
    return hex;
}

std::vector<CompositeErratum> compare_published(const StudySpec& spec, std::span<const ThemeComposite> composites) {
    std::vector<CompositeErratum> out;
    for (const auto& composite : composites) {
        const ThemeSpec* theme = spec.find_theme(composite.theme_id);
        if (theme == nullptr || !theme->published) continue;
        CompositeErratum e;
        e.theme_id = composite.theme_id;
        e.computed_mean = composite.weighted_mean;
        e.computed_sd = composite.weighted_sd;
        e.published_mean = theme->published->mean;
        e.published_sd = theme->published->sd;
        e.diverges = std::fabs(e.computed_mean - e.published_mean) > reference::kPublishedTolerance ||
                     std::fabs(e.computed_sd - e.published_sd) > reference::kPublishedTolerance;
        e.note = fmt::format("theme {}: computed ({}, {}) {} published ({}, {})", e.theme_id,
                             format_fixed(e.computed_mean), format_fixed(e.computed_sd),
                             e.diverges ? "diverges from" : "matches", format_fixed(e.published_mean),
                             format_fixed(e.published_sd));
        out.push_back(std::move(e));
    }
    return out;
}

SusComparison compare_sus(const StudySpec& spec, double success_mean) {
    SusComparison c;
    c.items_based = sus_from_items(spec);
    c.composite_linear = sus_from_composite(success_mean, spec.scale);
    c.published = spec.metadata.published_sus;
    if (c.published) {
        auto inside = [&](double s) { return s >= c.published->low && s <= c.published->high; };
        c.published_reproduced = inside(c.items_based.score) || inside(c.composite_linear.score);
    }
    return c;
}

ordered_json to_json(const ThemeComposite& composite) {
    ordered_json j;
    j["theme_id"] = composite.theme_id;
    j["weighted_mean"] = composite.weighted_mean;
    j["weighted_sd"] = composite.weighted_sd;
    j["total_weight"] = composite.total_weight;
    j["item_count"] = composite.item_count;
    return j;
}

ordered_json to_json(const DescriptiveSummary& s) {
    ordered_json j;
    j["count"] = s.count;
    j["mean"] = s.mean;
    j["sd"] = s.sd;
    j["min"] = s.min;
    j["q25"] = s.q25;
    j["median"] = s.median;
    j["q75"] = s.q75;
    j["max"] = s.max;
    return j;
}

ordered_json to_json(const OlsFit& fit) {
    ordered_json j;
    j["n_obs"] = fit.n_obs;
    j["df_model"] = fit.df_model;
    j["df_resid"] = fit.df_resid;
    ordered_json coefs = ordered_json::array();
    for (std::size_t i = 0; i < fit.coefficients.size(); ++i) {
        ordered_json c;
        c["name"] = fit.names[i];
        c["coef"] = fit.coefficients[i];
        c["std_err"] = fit.std_errors[i];
        c["t"] = fit.t_values[i];
        c["p_value"] = fit.p_values[i];
        c["ci_low"] = fit.conf_low[i];
        c["ci_high"] = fit.conf_high[i];
        coefs.push_back(std::move(c));
    }
    j["coefficients"] = std::move(coefs);
    j["r_squared"] = fit.r_squared;
    j["adj_r_squared"] = fit.adj_r_squared;
    j["f_statistic"] = fit.f_statistic;
    j["f_p_value"] = fit.f_p_value;
    j["log_likelihood"] = fit.log_likelihood;
    j["aic"] = fit.aic;
    j["bic"] = fit.bic;
    j["durbin_watson"] = fit.durbin_watson;
    j["jarque_bera"] = fit.jarque_bera;
    j["jb_p_value"] = fit.jb_p_value;
    j["skew"] = fit.skew;
    j["kurtosis"] = fit.kurtosis;
    j["kurtosis_convention"] = "pearson (normal = 3), population moments";
    j["condition_number"] = fit.condition_number;
    return j;
}

ordered_json to_json(const SusResult& sus) {
    ordered_json j;
    j["score"] = sus.score;
    j["band"] = std::string(to_string(sus.band));
    j["method"] = std::string(to_string(sus.method));
    return j;
}

ordered_json to_json(const SimulationConfig& config) {
    ordered_json j;
    j["n"] = config.n;
    j["noise_sd"] = config.noise_sd;
    j["clip_min"] = config.clip_min;
    j["clip_max"] = config.clip_max;
    j["seed"] = config.seed;
    ordered_json overrides = ordered_json::array();
    for (const auto& o : config.overrides) {
        overrides.push_back(ordered_json{{"theme_id", o.theme_id}, {"mean", o.mean}, {"sd", o.sd}});
    }
    j["overrides"] = std::move(overrides);
    return j;
}

ordered_json to_json(const RunSettings& settings) {
    ordered_json j = to_json(settings.simulation);
    j["bins"] = settings.bins;
    j["replicate_paper"] = settings.replicate_paper;
    j["format"] = settings.format;
    j["svg"] = settings.svg;
    return j;
}

ordered_json to_json(std::span<const HistogramBin> bins) {
    ordered_json arr = ordered_json::array();
    for (const auto& b : bins) {
        arr.push_back(ordered_json{{"bin_lower", b.lower}, {"bin_upper", b.upper}, {"count", b.count}});
    }
    return arr;
}

ordered_json to_json(const RunReport& report) {
    ordered_json j;
    ordered_json study;
    study["path"] = report.study_echo.path;
    study["sha256"] = report.study_echo.sha256;
    study["source"] = report.study_echo.metadata.source ? ordered_json(*report.study_echo.metadata.source) : nullptr;
    study["notes"] = report.study_echo.metadata.notes ? ordered_json(*report.study_echo.metadata.notes) : nullptr;
    j["study_echo"] = std::move(study);

    j["composites"] = ordered_json::array();
    for (const auto& c : report.composites) j["composites"].push_back(to_json(c));

    j["errata"] = ordered_json::array();
    for (const auto& e : report.errata) {
        ordered_json node;
        node["theme_id"] = e.theme_id;
        node["computed"] = {{"mean", e.computed_mean}, {"sd", e.computed_sd}};
        node["published"] = {{"mean", e.published_mean}, {"sd", e.published_sd}};
        node["diverges"] = e.diverges;
        node["note"] = e.note;
        j["errata"].push_back(std::move(node));
    }

    j["simulation_parameters"] = ordered_json::array();
    for (const auto& p : report.parameters) {
        j["simulation_parameters"].push_back(ordered_json{{"theme_id", p.theme_id},
                                                          {"mean", p.mean},
                                                          {"sd", p.sd},
                                                          {"weight", p.weight},
                                                          {"normalized_weight", p.normalized_weight}});
    }

    j["cohort_summary"] = to_json(report.cohort_summary);
    j["clipped_count"] = report.clipped_count;
    j["histogram"] = to_json(std::span<const HistogramBin>(report.histogram));
    j["ols"] = report.ols ? to_json(*report.ols) : ordered_json(nullptr);

    ordered_json sus;
    sus["items_based"] = to_json(report.sus.items_based);
    sus["composite_linear"] = to_json(report.sus.composite_linear);
    sus["band_cut_points"] = "Poor [0,50], Marginal (50,69], Acceptable (69,79], Good (79,89], Excellent (89,100]";
    if (report.sus.published) {
        sus["published_prediction"] = {{"low", report.sus.published->low},
                                       {"high", report.sus.published->high},
                                       {"reproduced", report.sus.published_reproduced}};
    } else {
        sus["published_prediction"] = nullptr;
    }
    j["sus"] = std::move(sus);

    j["config_echo"] = to_json(report.config_echo);
    j["warnings"] = report.warnings;
    j["tool_version"] = report.tool_version;
    j["timestamp"] = report.timestamp ? ordered_json(*report.timestamp) : ordered_json(nullptr);
    return j;
}

namespace {

std::string cell(double v, int digits = 4) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return format_fixed(v, digits);
}

}  // namespace

std::string render_ols_table(const OlsFit& fit, std::string_view dependent) {
    const std::string rule(78, '=');
    const std::string thin(78, '-');
    std::string out;
    out += fmt::format("{:^78}\n", "OLS Regression Results");
    out += rule + "\n";
    out += fmt::format("{:<20}{:>18}   {:<22}{:>15}\n", "Dep. Variable:", dependent, "R-squared:", cell(fit.r_squared, 3));
    out += fmt::format("{:<20}{:>18}   {:<22}{:>15}\n", "Model:", "OLS", "Adj. R-squared:",
                       cell(fit.adj_r_squared, 3));
    out += fmt::format("{:<20}{:>18}   {:<22}{:>15}\n", "Method:", "Least Squares", "F-statistic:",
                       cell(fit.f_statistic, 1));
    out += fmt::format("{:<20}{:>18}   {:<22}{:>15}\n", "No. Observations:", fit.n_obs, "Prob (F-statistic):",
                       cell(fit.f_p_value, 3));
    out += fmt::format("{:<20}{:>18}   {:<22}{:>15}\n", "Df Residuals:", fit.df_resid, "Log-Likelihood:",
                       cell(fit.log_likelihood, 1));
    out += fmt::format("{:<20}{:>18}   {:<22}{:>15}\n", "Df Model:", fit.df_model, "BIC:", cell(fit.bic, 1));
    out += rule + "\n";
    out += fmt::format("{:<12}{:>10}{:>10}{:>10}{:>10}{:>13}{:>13}\n", "", "coef", "std err", "t", "P>|t|",
                       "[0.025", "0.975]");
    out += thin + "\n";
    for (std::size_t i = 0; i < fit.coefficients.size(); ++i) {
        out += fmt::format("{:<12}{:>10}{:>10}{:>10}{:>10}{:>13}{:>13}\n", fit.names[i], cell(fit.coefficients[i]),
                           cell(fit.std_errors[i], 3), cell(fit.t_values[i], 3), cell(fit.p_values[i], 3),
                           cell(fit.conf_low[i], 3), cell(fit.conf_high[i], 3));
    }
    out += rule + "\n";
    out += fmt::format("{:<20}{:>18}   {:<22}{:>15}\n", "Durbin-Watson:", cell(fit.durbin_watson, 3),
                       "Jarque-Bera (JB):", cell(fit.jarque_bera, 3));
    out += fmt::format("{:<20}{:>18}   {:<22}{:>15}\n", "Skew:", cell(fit.skew, 3), "Prob(JB):",
                       cell(fit.jb_p_value, 3));
    out += fmt::format("{:<20}{:>18}   {:<22}{:>15}\n", "Kurtosis:", cell(fit.kurtosis, 3), "Cond. No.",
                       cell(fit.condition_number, 0) + ".");
    out += rule + "\n";
    return out;
}

std::string render_sus_line(const SusResult& sus) {
    return fmt::format("SUS ({}): {} -> {}", to_string(sus.method), format_fixed(sus.score, 2), to_string(sus.band));
}

std::string cohort_csv(const Cohort& cohort) {
    std::string out;
    for (std::size_t k = 0; k < cohort.theme_count(); ++k) out += fmt::format("theme_{},", k + 1);
    out += "success\n";
    for (std::size_t j = 0; j < cohort.size(); ++j) {
        for (std::size_t k = 0; k < cohort.theme_count(); ++k) out += fmt::format("{:.17g},", cohort.theme_scores[k][j]);
        out += fmt::format("{:.17g}\n", cohort.success[j]);
    }
    return out;
}

namespace {

std::vector<std::string_view> split_line(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        auto pos = line.find(',', start);
        fields.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return fields;
}

double parse_double(std::string_view field, std::size_t line_no) {
    while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
    while (!field.empty() && (field.back() == ' ' || field.back() == '\t')) field.remove_suffix(1);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size() || !std::isfinite(value)) {
        throw ParseError(fmt::format("cohort csv line {}: '{}' is not a finite number", line_no, field));
    }
    return value;
}

}  // namespace

Cohort parse_cohort_csv(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start < text.size()) {
        auto pos = text.find('\n', start);
        auto line = text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (!line.empty()) lines.push_back(line);
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    if (lines.empty()) throw ParseError("cohort csv: empty input");

    const auto header = split_line(lines[0]);
    if (header.empty() || header.back() != "success") throw ParseError("cohort csv: last column must be 'success'");
    const std::size_t k = header.size() - 1;
    for (std::size_t c = 0; c < k; ++c) {
        if (header[c] != fmt::format("theme_{}", c + 1)) {
            throw ParseError(fmt::format("cohort csv: column {} must be 'theme_{}'", c + 1, c + 1));
        }
    }

    Cohort cohort;
    cohort.theme_scores.assign(k, {});
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto fields = split_line(lines[i]);
        if (fields.size() != header.size()) {
            throw ParseError(fmt::format("cohort csv line {}: expected {} fields, got {}", i + 1, header.size(),
                                         fields.size()));
        }
        for (std::size_t c = 0; c < k; ++c) cohort.theme_scores[c].push_back(parse_double(fields[c], i + 1));
        cohort.success.push_back(parse_double(fields[k], i + 1));
    }
    cohort.config_echo.n = cohort.success.size();
    return cohort;
}

std::string histogram_csv(std::span<const HistogramBin> bins) {
    std::string out = "bin_lower,bin_upper,count\n";
    for (const auto& b : bins) out += fmt::format("{:.17g},{:.17g},{}\n", b.lower, b.upper, b.count);
    return out;
}

std::string composites_csv(std::span<const ThemeComposite> composites) {
    std::string out = "theme_id,weighted_mean,weighted_sd,total_weight,item_count\n";
    for (const auto& c : composites) {
        out += fmt::format("{},{:.17g},{:.17g},{:.17g},{}\n", c.theme_id, c.weighted_mean, c.weighted_sd,
                           c.total_weight, c.item_count);
    }
    return out;
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace perceptsim
