#include "perceptsim/cli.hpp"

#include "perceptsim/composer.hpp"
#include "perceptsim/error.hpp"
#include "perceptsim/histogram.hpp"
#include "perceptsim/reference.hpp"
#include "perceptsim/regression.hpp"
#include "perceptsim/report.hpp"
#include "perceptsim/simulator.hpp"
#include "perceptsim/stats.hpp"
#include "perceptsim/study.hpp"
#include "perceptsim/sus.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

namespace perceptsim {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr const char* kSeedEnv = "PERCEPTSIM_SEED";

class UsageError : public Error {
public:
    using Error::Error;
};

class InvalidStudy : public Error {
public:
    using Error::Error;
};

// Raised once a stage has failed and its message has been reported.
struct StageFailure {
    int code;
};

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const InvalidStudy*>(&e)) return kExitFindings;
    if (dynamic_cast<const UsageError*>(&e) || dynamic_cast<const ParseError*>(&e) ||
        dynamic_cast<const SchemaError*>(&e)) {
        return kExitUsage;
    }
    return kExitNumeric;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError(fmt::format("cannot read '{}'", path));
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw UsageError(fmt::format("cannot write '{}'", path.string()));
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw UsageError(fmt::format("write failed for '{}'", path.string()));
}

fs::path prepare_out_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw UsageError(fmt::format("cannot create output directory '{}': {}", dir, ec.message()));
    return fs::path(dir);
}

// Runs `body` as pipeline stage `stage`; library errors are reported with the
// stage tag and converted into a StageFailure carrying the exit code.
template <typename F>
auto stage(std::string_view name, std::ostream& err, F&& body) -> decltype(body()) {
    try {
        return body();
    } catch (const SchemaError& e) {
        err << fmt::format("perceptsim: error [{}]: schema error at {}\n", name, e.what());
        throw StageFailure{kExitUsage};
    } catch (const Error& e) {
        err << fmt::format("perceptsim: error [{}]: {}\n", name, e.what());
        throw StageFailure{exit_code_for(e)};
    } catch (const json::exception& e) {
        err << fmt::format("perceptsim: error [{}]: {}\n", name, e.what());
        throw StageFailure{kExitUsage};
    }
}

ThemeOverride parse_override(const std::string& text) {
    // ID=MEAN,SD
    const auto eq = text.rfind('=');
    const auto comma = text.find(',', eq == std::string::npos ? 0 : eq);
    if (eq == std::string::npos || eq == 0 || comma == std::string::npos) {
        throw UsageError(fmt::format("--override-theme expects ID=MEAN,SD, got '{}'", text));
    }
    auto number = [&](std::string_view s) {
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || ptr != s.data() + s.size()) {
            throw UsageError(fmt::format("--override-theme: '{}' is not a number", s));
        }
        return v;
    };
    ThemeOverride o;
    o.theme_id = text.substr(0, eq);
    o.mean = number(std::string_view(text).substr(eq + 1, comma - eq - 1));
    o.sd = number(std::string_view(text).substr(comma + 1));
    return o;
}

std::uint64_t parse_seed(std::string_view text, std::string_view origin) {
    std::uint64_t seed = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), seed);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw UsageError(fmt::format("{}: '{}' is not an unsigned 64-bit seed", origin, text));
    }
    return seed;
}

// Raw flag values as given on the command line.
struct FlagValues {
    std::string config_path;
    std::uint64_t seed = 0;
    std::size_t n = 0;
    double noise_sd = 0.0;
    double clip_min = 0.0;
    double clip_max = 0.0;
    std::size_t bins = 0;
    bool replicate_paper = false;
    std::vector<std::string> overrides;
    std::string format;
    std::string out_dir;
    bool svg = false;
    bool no_timestamp = false;

    CLI::Option* seed_opt = nullptr;
    CLI::Option* n_opt = nullptr;
    CLI::Option* noise_opt = nullptr;
    CLI::Option* clip_min_opt = nullptr;
    CLI::Option* clip_max_opt = nullptr;
    CLI::Option* bins_opt = nullptr;
    CLI::Option* replicate_opt = nullptr;
    CLI::Option* override_opt = nullptr;
    CLI::Option* format_opt = nullptr;
    CLI::Option* out_opt = nullptr;
    CLI::Option* svg_opt = nullptr;
    CLI::Option* no_timestamp_opt = nullptr;
};

void add_output_flags(CLI::App& cmd, FlagValues& f, std::vector<std::string> formats) {
    f.format_opt = cmd.add_option("--format", f.format, "Output format")->check(CLI::IsMember(formats));
    f.out_opt = cmd.add_option("--out", f.out_dir, "Write artifacts into this directory instead of stdout");
    cmd.add_option("--config", f.config_path, "JSON config file; flags override its values");
}

void add_simulation_flags(CLI::App& cmd, FlagValues& f) {
    f.seed_opt = cmd.add_option("--seed", f.seed, "RNG seed (default 42, or $PERCEPTSIM_SEED)");
    f.n_opt = cmd.add_option("--n", f.n, "Cohort size (default 10000)");
    f.noise_opt = cmd.add_option("--noise-sd", f.noise_sd, "SD of the additive success noise (default 0.05)");
    f.clip_min_opt = cmd.add_option("--clip-min", f.clip_min, "Lower success bound (default scale min)");
    f.clip_max_opt = cmd.add_option("--clip-max", f.clip_max, "Upper success bound (default scale max)");
    f.replicate_opt = cmd.add_flag("--replicate-paper", f.replicate_paper,
                                   "Use the reference run's hard-coded theme parameters");
    f.override_opt = cmd.add_option("--override-theme", f.overrides, "Replace a composite: ID=MEAN,SD (repeatable)");
}

void add_report_flags(CLI::App& cmd, FlagValues& f) {
    f.bins_opt = cmd.add_option("--bins", f.bins, "Histogram bins (default 50)");
    f.svg_opt = cmd.add_flag("--svg", f.svg, "Also write histogram.svg (needs --out)");
    f.no_timestamp_opt = cmd.add_flag("--no-timestamp", f.no_timestamp, "Omit the report timestamp");
}

bool given(const CLI::Option* opt) { return opt != nullptr && opt->count() > 0; }

// Settings with optional clip bounds, before the study's scale is known.
struct PendingSettings {
    RunSettings settings;
    std::optional<double> clip_min;
    std::optional<double> clip_max;
};

void apply_config_file(const std::string& path, PendingSettings& p) {
    const std::string text = read_file(path);
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(fmt::format("config '{}': {}", path, e.what()));
    }
    if (!doc.is_object()) throw SchemaError("/", "config must be a JSON object");
    auto& s = p.settings;
    for (const auto& [key, value] : doc.items()) {
        const std::string at = "/" + key;
        auto need = [&](bool ok, const char* what) {
            if (!ok) throw SchemaError(at, fmt::format("expected {}", what));
        };
        if (key == "seed") {
            need(value.is_number_unsigned(), "an unsigned integer");
            s.simulation.seed = value.get<std::uint64_t>();
        } else if (key == "n") {
            need(value.is_number_unsigned(), "an unsigned integer");
            s.simulation.n = value.get<std::size_t>();
        } else if (key == "noise_sd") {
            need(value.is_number(), "a number");
            s.simulation.noise_sd = value.get<double>();
        } else if (key == "clip_min") {
            need(value.is_number(), "a number");
            p.clip_min = value.get<double>();
        } else if (key == "clip_max") {
            need(value.is_number(), "a number");
            p.clip_max = value.get<double>();
        } else if (key == "bins") {
            need(value.is_number_unsigned(), "an unsigned integer");
            s.bins = value.get<std::size_t>();
        } else if (key == "replicate_paper") {
            need(value.is_boolean(), "a boolean");
            s.replicate_paper = value.get<bool>();
        } else if (key == "overrides") {
            need(value.is_array(), "an array");
            s.simulation.overrides.clear();
            for (std::size_t i = 0; i < value.size(); ++i) {
                const auto& o = value[i];
                const std::string oat = fmt::format("{}/{}", at, i);
                if (!o.is_object() || !o.contains("theme_id") || !o.contains("mean") || !o.contains("sd") ||
                    o.size() != 3 || !o["theme_id"].is_string() || !o["mean"].is_number() || !o["sd"].is_number()) {
                    throw SchemaError(oat, "expected {theme_id, mean, sd}");
                }
                s.simulation.overrides.push_back(
                    {o["theme_id"].get<std::string>(), o["mean"].get<double>(), o["sd"].get<double>()});
            }
        } else if (key == "format") {
            need(value.is_string(), "a string");
            s.format = value.get<std::string>();
        } else if (key == "out") {
            need(value.is_string(), "a string");
            s.out_dir = value.get<std::string>();
        } else if (key == "svg") {
            need(value.is_boolean(), "a boolean");
            s.svg = value.get<bool>();
        } else if (key == "timestamp") {
            need(value.is_boolean(), "a boolean");
            s.timestamp = value.get<bool>();
        } else {
            throw SchemaError(at, "unknown config key");
        }
    }
}

// default < config file < PERCEPTSIM_SEED (seed only) < flags.
PendingSettings resolve_settings(const FlagValues& f, std::string default_format) {
    PendingSettings p;
    p.settings.format = std::move(default_format);
    if (!f.config_path.empty()) apply_config_file(f.config_path, p);

    auto& s = p.settings;
    if (given(f.seed_opt)) {
        s.simulation.seed = f.seed;
    } else if (const char* env = std::getenv(kSeedEnv); env != nullptr && *env != '\0') {
        s.simulation.seed = parse_seed(env, kSeedEnv);
    }
    if (given(f.n_opt)) s.simulation.n = f.n;
    if (given(f.noise_opt)) s.simulation.noise_sd = f.noise_sd;
    if (given(f.clip_min_opt)) p.clip_min = f.clip_min;
    if (given(f.clip_max_opt)) p.clip_max = f.clip_max;
    if (given(f.bins_opt)) s.bins = f.bins;
    if (given(f.replicate_opt)) s.replicate_paper = f.replicate_paper;
    if (given(f.override_opt)) {
        s.simulation.overrides.clear();
        for (const auto& text : f.overrides) s.simulation.overrides.push_back(parse_override(text));
    }
    if (given(f.format_opt)) s.format = f.format;
    if (given(f.out_opt)) s.out_dir = f.out_dir;
    if (given(f.svg_opt)) s.svg = f.svg;
    if (given(f.no_timestamp_opt) && f.no_timestamp) s.timestamp = false;
    return p;
}

// Fills clip bounds from the scale and expands --replicate-paper into
// positional overrides; explicit overrides win over replicated ones.
RunSettings finalize(PendingSettings p, const StudySpec& spec) {
    RunSettings s = std::move(p.settings);
    s.simulation.clip_min = p.clip_min.value_or(static_cast<double>(spec.scale.min));
    s.simulation.clip_max = p.clip_max.value_or(static_cast<double>(spec.scale.max));
    if (s.replicate_paper) {
        if (spec.themes.size() != reference::kReplicationThemes.size()) {
            throw UsageError(fmt::format("--replicate-paper needs a study with {} themes, this one has {}",
                                         reference::kReplicationThemes.size(), spec.themes.size()));
        }
        std::vector<ThemeOverride> merged;
        for (std::size_t k = 0; k < spec.themes.size(); ++k) {
            merged.push_back({spec.themes[k].id, reference::kReplicationThemes[k].mean,
                              reference::kReplicationThemes[k].sd});
        }
        for (const auto& o : s.simulation.overrides) {
            auto it = std::find_if(merged.begin(), merged.end(),
                                   [&](const ThemeOverride& m) { return m.theme_id == o.theme_id; });
            if (it == merged.end()) {
                merged.push_back(o);
            } else {
                *it = o;
            }
        }
        s.simulation.overrides = std::move(merged);
    }
    if (s.bins == 0) throw UsageError("--bins must be at least 1");
    return s;
}

StudySpec load_study(const std::string& path, std::string* raw_out = nullptr) {
    std::string raw = read_file(path);
    StudySpec spec = parse_study_spec(raw);
    if (raw_out != nullptr) *raw_out = std::move(raw);
    return spec;
}

void require_valid(const StudySpec& spec) {
    const auto findings = validate_study(spec);
    if (!findings.empty()) {
        throw InvalidStudy(fmt::format("study is invalid: {} {}", findings.front().path, findings.front().message));
    }
}

void print_errata(std::span<const CompositeErratum> errata, std::ostream& err) {
    for (const auto& e : errata) {
        if (e.diverges) err << "perceptsim: note: " << e.note << "\n";
    }
}

// ---------------------------------------------------------------- commands

int cmd_validate(const std::string& path, std::ostream& out, std::ostream& err) {
    const StudySpec spec = stage("parse", err, [&] { return load_study(path); });
    const auto findings = validate_study(spec);
    for (const auto& f : findings) out << fmt::format("{}\t{}\t{}\n", to_string(f.severity), f.path, f.message);
    return findings.empty() ? kExitOk : kExitFindings;
}

int cmd_compose(const std::string& path, const FlagValues& flags, std::ostream& out, std::ostream& err) {
    const StudySpec spec = stage("parse", err, [&] { return load_study(path); });
    auto pending = stage("config", err, [&] { return resolve_settings(flags, "json"); });
    const auto composites = stage("compose", err, [&] {
        require_valid(spec);
        return compose_all(spec);
    });
    print_errata(compare_published(spec, composites), err);

    std::string body;
    if (pending.settings.format == "csv") {
        body = composites_csv(composites);
    } else {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const auto& c : composites) arr.push_back(to_json(c));
        body = arr.dump(2) + "\n";
    }
    if (pending.settings.out_dir) {
        stage("write", err, [&] {
            auto dir = prepare_out_dir(*pending.settings.out_dir);
            write_file(dir / (pending.settings.format == "csv" ? "composites.csv" : "composites.json"), body);
        });
    } else {
        out << body;
    }
    return kExitOk;
}

int cmd_simulate(const std::string& path, const FlagValues& flags, std::ostream& out, std::ostream& err) {
    const StudySpec spec = stage("parse", err, [&] { return load_study(path); });
    const RunSettings settings = stage("config", err, [&] { return finalize(resolve_settings(flags, "csv"), spec); });
    const auto composites = stage("compose", err, [&] {
        require_valid(spec);
        return compose_all(spec);
    });
    const Cohort cohort = stage("simulate", err, [&] { return run_simulation(composites, settings.simulation); });
    const auto summary = stage("describe", err, [&] { return describe(cohort.success); });

    nlohmann::ordered_json js;
    js["cohort_summary"] = to_json(summary);
    js["clipped_count"] = cohort.clipped_count;
    js["config_echo"] = to_json(settings);

    if (settings.out_dir) {
        stage("write", err, [&] {
            auto dir = prepare_out_dir(*settings.out_dir);
            write_file(dir / "cohort.csv", cohort_csv(cohort));
            write_file(dir / "summary.json", js.dump(2) + "\n");
        });
    } else if (settings.format == "json") {
        out << js.dump(2) << "\n";
    } else {
        out << cohort_csv(cohort);
    }
    return kExitOk;
}

Cohort load_cohort(const std::string& path) { return parse_cohort_csv(read_file(path)); }

int cmd_regress(const std::string& path, const FlagValues& flags, std::ostream& out, std::ostream& err) {
    const Cohort cohort = stage("parse", err, [&] { return load_cohort(path); });
    auto pending = stage("config", err, [&] { return resolve_settings(flags, "json"); });
    const OlsFit fit = stage("regress", err, [&] { return fit_cohort(cohort); });

    std::string body;
    std::string name;
    if (pending.settings.format == "text") {
        body = render_ols_table(fit);
        name = "ols.txt";
    } else if (pending.settings.format == "csv") {
        body = "name,coef,std_err,t,p_value,ci_low,ci_high\n";
        for (std::size_t i = 0; i < fit.coefficients.size(); ++i) {
            body += fmt::format("{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", fit.names[i],
                                fit.coefficients[i], fit.std_errors[i], fit.t_values[i], fit.p_values[i],
                                fit.conf_low[i], fit.conf_high[i]);
        }
        name = "ols.csv";
    } else {
        body = to_json(fit).dump(2) + "\n";
        name = "ols.json";
    }
    if (pending.settings.out_dir) {
        stage("write", err, [&] { write_file(prepare_out_dir(*pending.settings.out_dir) / name, body); });
    } else {
        out << body;
    }
    return kExitOk;
}

int cmd_histogram(const std::string& path, const FlagValues& flags, std::ostream& out, std::ostream& err) {
    const Cohort cohort = stage("parse", err, [&] { return load_cohort(path); });
    auto pending = stage("config", err, [&] { return resolve_settings(flags, "csv"); });
    const auto& s = pending.settings;
    if (s.bins == 0) {
        err << "perceptsim: error [config]: --bins must be at least 1\n";
        return kExitUsage;
    }
    if (s.svg && !s.out_dir) {
        err << "perceptsim: error [config]: --svg needs --out\n";
        return kExitUsage;
    }
    const auto bins = stage("histogram", err, [&] { return make_histogram(cohort.success, s.bins); });
    const std::string body = s.format == "json" ? to_json(std::span<const HistogramBin>(bins)).dump(2) + "\n"
                                                : histogram_csv(bins);
    if (s.out_dir) {
        stage("write", err, [&] {
            auto dir = prepare_out_dir(*s.out_dir);
            write_file(dir / (s.format == "json" ? "histogram.json" : "histogram.csv"), body);
            if (s.svg) write_file(dir / "histogram.svg", histogram_svg(bins, "Simulated Success Score", "Success Score"));
        });
    } else {
        out << body;
    }
    return kExitOk;
}

int cmd_sus(const std::string& path, std::optional<double> mean, const FlagValues& flags, std::ostream& out,
            std::ostream& err) {
    const StudySpec spec = stage("parse", err, [&] { return load_study(path); });
    auto pending = stage("config", err, [&] { return resolve_settings(flags, "json"); });
    const SusResult items = stage("sus", err, [&] { return sus_from_items(spec); });
    std::optional<SusResult> composite;
    if (mean) composite = stage("sus", err, [&] { return sus_from_composite(*mean, spec.scale); });

    if (pending.settings.format == "text") {
        out << render_sus_line(items) << "\n";
        if (composite) out << render_sus_line(*composite) << "\n";
        return kExitOk;
    }
    nlohmann::ordered_json js;
    js["items_based"] = to_json(items);
    js["composite_linear"] = composite ? to_json(*composite) : nlohmann::ordered_json(nullptr);
    out << js.dump(2) << "\n";
    err << render_sus_line(items) << "\n";
    if (composite) err << render_sus_line(*composite) << "\n";
    return kExitOk;
}

int cmd_run(const std::string& path, const FlagValues& flags, std::ostream& out, std::ostream& err) {
    std::string raw;
    const StudySpec spec = stage("parse", err, [&] { return load_study(path, &raw); });
    const RunSettings settings = stage("config", err, [&] { return finalize(resolve_settings(flags, "json"), spec); });
    if (settings.svg && !settings.out_dir) {
        err << "perceptsim: error [config]: --svg needs --out\n";
        return kExitUsage;
    }

    RunReport report;
    report.study_echo = {path, sha256_hex(raw), spec.metadata};
    report.config_echo = settings;
    if (settings.timestamp) report.timestamp = utc_timestamp();

    report.composites = stage("compose", err, [&] {
        require_valid(spec);
        return compose_all(spec);
    });
    report.errata = compare_published(spec, report.composites);
    print_errata(report.errata, err);

    const Cohort cohort = stage("simulate", err, [&] { return run_simulation(report.composites, settings.simulation); });
    report.parameters = cohort.composites_echo;
    report.clipped_count = cohort.clipped_count;
    report.cohort_summary = stage("describe", err, [&] { return describe(cohort.success); });
    if (cohort.size() == 1) report.warnings.push_back("describe: single respondent, sd reported as 0");
    report.histogram = stage("histogram", err, [&] { return make_histogram(cohort.success, settings.bins); });
    report.sus = stage("sus", err, [&] { return compare_sus(spec, report.cohort_summary.mean); });
    if (report.sus.published && !report.sus.published_reproduced) {
        report.warnings.push_back(fmt::format(
            "sus: published SUS-equivalent range {}-{} not reproduced (items-based {}, composite-linear {})",
            report.sus.published->low, report.sus.published->high, format_fixed(report.sus.items_based.score, 2),
            format_fixed(report.sus.composite_linear.score, 2)));
    }

    int status = kExitOk;
    try {
        report.ols = stage("regress", err, [&] { return fit_cohort(cohort); });
    } catch (const StageFailure& failure) {
        report.warnings.push_back("regress: regression refused, see stderr");
        status = failure.code;
    }

    const std::string report_json = to_json(report).dump(2) + "\n";
    if (settings.out_dir) {
        stage("write", err, [&] {
            auto dir = prepare_out_dir(*settings.out_dir);
            write_file(dir / "report.json", report_json);
            write_file(dir / "cohort.csv", cohort_csv(cohort));
            write_file(dir / "histogram.csv", histogram_csv(report.histogram));
            if (settings.svg) {
                write_file(dir / "histogram.svg",
                           histogram_svg(report.histogram, "Simulated Success Score", "Success Score"));
            }
            if (report.ols) write_file(dir / "ols.txt", render_ols_table(*report.ols));
        });
    } else {
        out << report_json;
    }
    for (const auto& w : report.warnings) err << "perceptsim: warning: " << w << "\n";
    return status;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"perceptsim: Likert summary statistics to theme composites, Monte Carlo cohorts and OLS diagnostics",
                 "perceptsim"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kToolVersion));

    std::string study_path;
    std::string cohort_path;
    std::optional<double> sus_mean;

    auto* validate = app.add_subcommand("validate", "Check a study file; findings one per line");
    validate->add_option("study", study_path, "Study JSON")->required();

    FlagValues compose_flags;
    auto* compose = app.add_subcommand("compose", "Compute theme composites");
    compose->add_option("study", study_path, "Study JSON")->required();
    add_output_flags(*compose, compose_flags, {"json", "csv"});

    FlagValues simulate_flags;
    auto* simulate = app.add_subcommand("simulate", "Generate a cohort (CSV to stdout or cohort.csv in --out)");
    simulate->add_option("study", study_path, "Study JSON")->required();
    add_output_flags(*simulate, simulate_flags, {"csv", "json"});
    add_simulation_flags(*simulate, simulate_flags);

    FlagValues regress_flags;
    auto* regress = app.add_subcommand("regress", "OLS of success on theme columns of a cohort CSV");
    regress->add_option("cohort", cohort_path, "Cohort CSV")->required();
    add_output_flags(*regress, regress_flags, {"json", "csv", "text"});

    FlagValues histogram_flags;
    auto* histogram = app.add_subcommand("histogram", "Histogram of cohort success scores");
    histogram->add_option("cohort", cohort_path, "Cohort CSV")->required();
    add_output_flags(*histogram, histogram_flags, {"csv", "json"});
    histogram_flags.bins_opt = histogram->add_option("--bins", histogram_flags.bins, "Bin count (default 50)");
    histogram_flags.svg_opt = histogram->add_flag("--svg", histogram_flags.svg, "Also write histogram.svg");

    FlagValues sus_flags;
    auto* sus = app.add_subcommand("sus", "SUS score of the study items (and of a composite mean)");
    sus->add_option("study", study_path, "Study JSON")->required();
    sus->add_option("--mean", sus_mean, "Composite mean to map linearly onto 0-100");
    add_output_flags(*sus, sus_flags, {"json", "text"});

    FlagValues run_flags;
    auto* run = app.add_subcommand("run", "Full pipeline: compose, simulate, describe, regress, SUS");
    run->add_option("study", study_path, "Study JSON")->required();
    add_output_flags(*run, run_flags, {"json"});
    add_simulation_flags(*run, run_flags);
    add_report_flags(*run, run_flags);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (validate->parsed()) return cmd_validate(study_path, out, err);
        if (compose->parsed()) return cmd_compose(study_path, compose_flags, out, err);
        if (simulate->parsed()) return cmd_simulate(study_path, simulate_flags, out, err);
        if (regress->parsed()) return cmd_regress(cohort_path, regress_flags, out, err);
        if (histogram->parsed()) return cmd_histogram(cohort_path, histogram_flags, out, err);
        if (sus->parsed()) return cmd_sus(study_path, sus_mean, sus_flags, out, err);
        if (run->parsed()) return cmd_run(study_path, run_flags, out, err);
    } catch (const StageFailure& failure) {
        return failure.code;
    }
    return kExitUsage;
}

}  // namespace perceptsim
