#include "perceptsim/study.hpp"

#include "perceptsim/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <set>

#include <fmt/format.h>
#include <json.hpp>

namespace perceptsim {

using nlohmann::json;
using nlohmann::ordered_json;

const ItemStat* StudySpec::find_item(std::string_view id) const noexcept {
    auto it = std::find_if(items.begin(), items.end(), [&](const ItemStat& s) { return s.id == id; });
    return it == items.end() ? nullptr : &*it;
}

const ThemeSpec* StudySpec::find_theme(std::string_view id) const noexcept {
    auto it = std::find_if(themes.begin(), themes.end(), [&](const ThemeSpec& t) { return t.id == id; });
    return it == themes.end() ? nullptr : &*it;
}

std::string_view to_string(Severity severity) noexcept {
    return severity == Severity::Error ? "error" : "warning";
}

namespace {

// Strict reader over one JSON object: every key must be consumed, so
// anything left over at the end is an unknown key.
class ObjectReader {
public:
    ObjectReader(const json& node, std::string path) : node_(node), path_(std::move(path)) {
        if (!node_.is_object()) {
            throw SchemaError(path_.empty() ? "/" : path_, "expected an object");
        }
    }

    const json& required(const std::string& key) {
        auto it = node_.find(key);
        if (it == node_.end()) {
            throw SchemaError(path_ + "/" + key, "missing required key");
        }
        seen_.insert(key);
        return *it;
    }

    const json* optional(const std::string& key) {
        auto it = node_.find(key);
        if (it == node_.end() || it->is_null()) {
            if (it != node_.end()) seen_.insert(key);
            return nullptr;
        }
        seen_.insert(key);
        return &*it;
    }

    std::string child(const std::string& key) const { return path_ + "/" + key; }

    void finish() const {
        for (const auto& [key, _] : node_.items()) {
            if (!seen_.contains(key)) {
                throw SchemaError(path_ + "/" + key, "unknown key");
            }
        }
    }

private:
    const json& node_;
    std::string path_;
    std::set<std::string> seen_;
};

double as_number(const json& node, const std::string& path) {
    if (!node.is_number()) throw SchemaError(path, "expected a number");
    double value = node.get<double>();
    if (!std::isfinite(value)) throw SchemaError(path, "expected a finite number");
    return value;
}

int as_integer(const json& node, const std::string& path) {
    if (node.is_number_integer()) {
        auto value = node.get<long long>();
        if (value < -1000000 || value > 1000000) throw SchemaError(path, "integer out of range");
        return static_cast<int>(value);
    }
    throw SchemaError(path, "expected an integer");
}

std::string as_string(const json& node, const std::string& path) {
    if (!node.is_string()) throw SchemaError(path, "expected a string");
    return node.get<std::string>();
}

bool as_bool(const json& node, const std::string& path) {
    if (!node.is_boolean()) throw SchemaError(path, "expected a boolean");
    return node.get<bool>();
}

const json& as_array(const json& node, const std::string& path) {
    if (!node.is_array()) throw SchemaError(path, "expected an array");
    return node;
}

PublishedComposite read_published(const json& node, const std::string& path) {
    ObjectReader r(node, path);
    PublishedComposite p;
    p.mean = as_number(r.required("mean"), r.child("mean"));
    p.sd = as_number(r.required("sd"), r.child("sd"));
    r.finish();
    return p;
}

LikertScale read_scale(const json& node, const std::string& path) {
    ObjectReader r(node, path);
    LikertScale scale;
    scale.min = as_integer(r.required("min"), r.child("min"));
    scale.max = as_integer(r.required("max"), r.child("max"));
    r.finish();
    if (scale.max <= scale.min) throw SchemaError(path, "scale max must exceed min");
    return scale;
}

ItemStat read_item(const json& node, const std::string& path, const LikertScale& scale) {
    ObjectReader r(node, path);
    ItemStat item;
    item.id = as_string(r.required("id"), r.child("id"));
    if (item.id.empty()) throw SchemaError(r.child("id"), "item id must not be empty");
    if (const json* text = r.optional("text")) item.text = as_string(*text, r.child("text"));
    item.mean = as_number(r.required("mean"), r.child("mean"));
    item.sd = as_number(r.required("sd"), r.child("sd"));
    item.reverse = as_bool(r.required("reverse"), r.child("reverse"));
    r.finish();
    if (!scale.contains(item.mean)) {
        throw SchemaError(r.child("mean"),
                          fmt::format("item '{}' mean {} outside scale [{}, {}]", item.id, item.mean,
                                      scale.min, scale.max));
    }
    return item;
}

ThemeSpec read_theme(const json& node, const std::string& path) {
    ObjectReader r(node, path);
    ThemeSpec theme;
    theme.id = as_string(r.required("id"), r.child("id"));
    theme.name = as_string(r.required("name"), r.child("name"));
    const json& ids = as_array(r.required("items"), r.child("items"));
    for (std::size_t j = 0; j < ids.size(); ++j) {
        theme.item_ids.push_back(as_string(ids[j], fmt::format("{}/{}", r.child("items"), j)));
    }
    if (const json* p = r.optional("published")) theme.published = read_published(*p, r.child("published"));
    r.finish();
    return theme;
}

StudyMetadata read_metadata(const json& node, const std::string& path) {
    ObjectReader r(node, path);
    StudyMetadata meta;
    if (const json* s = r.optional("source")) meta.source = as_string(*s, r.child("source"));
    if (const json* n = r.optional("notes")) meta.notes = as_string(*n, r.child("notes"));
    if (const json* p = r.optional("published_sus")) {
        const json& range = as_array(*p, r.child("published_sus"));
        if (range.size() != 2) throw SchemaError(r.child("published_sus"), "expected [low, high]");
        meta.published_sus = SusRange{as_number(range[0], r.child("published_sus") + "/0"),
                                      as_number(range[1], r.child("published_sus") + "/1")};
    }
    r.finish();
    return meta;
}

// Orders "/items/10" after "/items/2".
bool path_less(const std::string& a, const std::string& b) {
    auto split = [](const std::string& s) {
        std::vector<std::string> parts;
        std::size_t start = 0;
        while (start <= s.size()) {
            auto pos = s.find('/', start);
            if (pos == std::string::npos) pos = s.size();
            parts.push_back(s.substr(start, pos - start));
            start = pos + 1;
        }
        return parts;
    };
    auto numeric = [](const std::string& s, unsigned long long& out) {
        if (s.empty()) return false;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
        return ec == std::errc{} && ptr == s.data() + s.size();
    };
    auto pa = split(a);
    auto pb = split(b);
    for (std::size_t i = 0; i < std::min(pa.size(), pb.size()); ++i) {
        if (pa[i] == pb[i]) continue;
        unsigned long long na = 0;
        unsigned long long nb = 0;
        if (numeric(pa[i], na) && numeric(pb[i], nb)) return na < nb;
        return pa[i] < pb[i];
    }
    return pa.size() < pb.size();
}

}  // namespace

StudySpec parse_study_spec(std::string_view raw) {
    json doc;
    try {
        doc = json::parse(raw.begin(), raw.end());
    } catch (const json::parse_error& e) {
        throw ParseError(fmt::format("malformed study file: {}", e.what()));
    }

    ObjectReader top(doc, "");
    StudySpec spec;
    spec.scale = read_scale(top.required("scale"), "/scale");

    const json& items = as_array(top.required("items"), "/items");
    std::set<std::string> ids;
    for (std::size_t i = 0; i < items.size(); ++i) {
        auto path = fmt::format("/items/{}", i);
        ItemStat item = read_item(items[i], path, spec.scale);
        if (!ids.insert(item.id).second) {
            throw SchemaError(path + "/id", fmt::format("duplicate item id '{}'", item.id));
        }
        spec.items.push_back(std::move(item));
    }

    const json& themes = as_array(top.required("themes"), "/themes");
    for (std::size_t t = 0; t < themes.size(); ++t) {
        spec.themes.push_back(read_theme(themes[t], fmt::format("/themes/{}", t)));
    }

    if (const json* meta = top.optional("metadata")) spec.metadata = read_metadata(*meta, "/metadata");
    top.finish();
    return spec;
}

std::string serialize_study_spec(const StudySpec& spec) {
    ordered_json doc;
    doc["scale"] = {{"min", spec.scale.min}, {"max", spec.scale.max}};
    doc["items"] = ordered_json::array();
    for (const auto& item : spec.items) {
        ordered_json node;
        node["id"] = item.id;
        if (item.text) node["text"] = *item.text;
        node["mean"] = item.mean;
        node["sd"] = item.sd;
        node["reverse"] = item.reverse;
        doc["items"].push_back(std::move(node));
    }
    doc["themes"] = ordered_json::array();
    for (const auto& theme : spec.themes) {
        ordered_json node;
        node["id"] = theme.id;
        node["name"] = theme.name;
        node["items"] = theme.item_ids;
        if (theme.published) {
            node["published"] = {{"mean", theme.published->mean}, {"sd", theme.published->sd}};
        }
        doc["themes"].push_back(std::move(node));
    }
    ordered_json meta = ordered_json::object();
    if (spec.metadata.source) meta["source"] = *spec.metadata.source;
    if (spec.metadata.notes) meta["notes"] = *spec.metadata.notes;
    if (spec.metadata.published_sus) {
        meta["published_sus"] = {spec.metadata.published_sus->low, spec.metadata.published_sus->high};
    }
    doc["metadata"] = std::move(meta);
    return doc.dump(2) + "\n";
}

std::vector<Finding> validate_study(const StudySpec& spec) {
    std::vector<Finding> findings;
    auto add = [&](std::string path, std::string message) {
        findings.push_back({Severity::Error, std::move(path), std::move(message)});
    };

    const bool scale_ok = spec.scale.max > spec.scale.min;
    if (!scale_ok) {
        add("/scale", fmt::format("scale max {} must exceed min {}", spec.scale.max, spec.scale.min));
    }

    std::map<std::string, std::size_t> first_index;
    for (std::size_t i = 0; i < spec.items.size(); ++i) {
        const auto& item = spec.items[i];
        auto base = fmt::format("/items/{}", i);
        if (!first_index.emplace(item.id, i).second) {
            add(base + "/id", fmt::format("duplicate item id '{}'", item.id));
        }
        if (scale_ok && !(std::isfinite(item.mean) && spec.scale.contains(item.mean))) {
            add(base + "/mean", fmt::format("item '{}' mean {} outside scale [{}, {}]", item.id, item.mean,
                                            spec.scale.min, spec.scale.max));
        }
        if (!(std::isfinite(item.sd) && item.sd > 0.0)) {
            add(base + "/sd", fmt::format("item '{}' sd {} must be positive (weight 1/sd^2 undefined)",
                                          item.id, item.sd));
        }
    }

    if (spec.themes.empty()) add("/themes", "study defines no themes");

    std::map<std::string, std::string> owner;  // item id -> theme id
    std::set<std::string> theme_ids;
    for (std::size_t t = 0; t < spec.themes.size(); ++t) {
        const auto& theme = spec.themes[t];
        auto base = fmt::format("/themes/{}", t);
        if (!theme_ids.insert(theme.id).second) {
            add(base + "/id", fmt::format("duplicate theme id '{}'", theme.id));
        }
        if (theme.item_ids.empty()) add(base + "/items", fmt::format("theme '{}' has no items", theme.id));
        for (std::size_t j = 0; j < theme.item_ids.size(); ++j) {
            const auto& ref = theme.item_ids[j];
            auto path = fmt::format("{}/items/{}", base, j);
            if (!first_index.contains(ref)) {
                add(path, fmt::format("theme '{}' references unknown item '{}'", theme.id, ref));
                continue;
            }
            auto [it, inserted] = owner.emplace(ref, theme.id);
            if (!inserted) {
                add(path, fmt::format("item '{}' already belongs to theme '{}'", ref, it->second));
            }
        }
    }

    std::stable_sort(findings.begin(), findings.end(),
                     [](const Finding& a, const Finding& b) { return path_less(a.path, b.path); });
    return findings;
}

}  // namespace perceptsim
