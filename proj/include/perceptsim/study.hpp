#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace perceptsim {

// Integer-bounded response scale, e.g. the 1..5 Likert format.
struct LikertScale {
    int min = 1;
    int max = 5;

    double span() const noexcept { return static_cast<double>(max) - static_cast<double>(min); }
    bool contains(double value) const noexcept { return value >= min && value <= max; }

    friend bool operator==(const LikertScale&, const LikertScale&) = default;
};

// Summary statistics reported for one questionnaire item.
struct ItemStat {
    std::string id;
    std::optional<std::string> text;
    double mean = 0.0;
    double sd = 0.0;
    bool reverse = false;

    friend bool operator==(const ItemStat&, const ItemStat&) = default;
};

// Externally reported composite for a theme, kept so computed values can be
// compared against it. Never used as an input to computation.
struct PublishedComposite {
    double mean = 0.0;
    double sd = 0.0;

    friend bool operator==(const PublishedComposite&, const PublishedComposite&) = default;
};

struct ThemeSpec {
    std::string id;
    std::string name;
    std::vector<std::string> item_ids;
    std::optional<PublishedComposite> published;

    friend bool operator==(const ThemeSpec&, const ThemeSpec&) = default;
};

struct SusRange {
    double low = 0.0;
    double high = 0.0;

    friend bool operator==(const SusRange&, const SusRange&) = default;
};

struct StudyMetadata {
    std::optional<std::string> source;
    std::optional<std::string> notes;
    // Externally predicted SUS-equivalent range, reported next to the
    // computed SUS scores.
    std::optional<SusRange> published_sus;

    friend bool operator==(const StudyMetadata&, const StudyMetadata&) = default;
};

// Immutable once parsed.
struct StudySpec {
    LikertScale scale;
    std::vector<ItemStat> items;
    std::vector<ThemeSpec> themes;
    StudyMetadata metadata;

    // nullptr when no item has this id.
    const ItemStat* find_item(std::string_view id) const noexcept;
    const ThemeSpec* find_theme(std::string_view id) const noexcept;

    friend bool operator==(const StudySpec&, const StudySpec&) = default;
};

enum class Severity { Error, Warning };

struct Finding {
    Severity severity = Severity::Error;
    std::string path;  // e.g. "/themes/0/items/2"
    std::string message;

    friend bool operator==(const Finding&, const Finding&) = default;
};

std::string_view to_string(Severity severity) noexcept;

// Parses a study document. Throws ParseError on malformed JSON and
// SchemaError (with the offending path) on missing keys, wrong types,
// unknown keys, duplicate item ids, or an item mean outside the scale.
StudySpec parse_study_spec(std::string_view raw);

// Inverse of parse_study_spec; output is pretty-printed JSON with keys in
// schema order.
std::string serialize_study_spec(const StudySpec& spec);

// Every violated invariant as a finding, sorted by path. Empty means valid.
std::vector<Finding> validate_study(const StudySpec& spec);

}  // namespace perceptsim
