#include "run_config.hpp"

#include "slp/errors.hpp"
#include "slp/io.hpp"
#include "slp/text.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>

namespace slp::cli {

namespace {

using nlohmann::json;

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
    const std::filesystem::path path(p);
    if (path.is_absolute() || base.empty()) return path;
    return base / path;
}

std::string param_text(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number() || v.is_array()) {
        if (v.is_array()) {
            std::string out;
            for (const auto& x : v) {
                if (!out.empty()) out += ',';
                out += param_text(x);
            }
            return out;
        }
        return v.dump();
    }
    throw ConfigError("parameter values must be strings, numbers, booleans or lists");
}

void check_exists(const std::filesystem::path& p, const char* what) {
    if (!p.empty() && !std::filesystem::exists(p)) throw ConfigError(std::string(what) + " '" + p.string() + "' does not exist");
}

}  // namespace

const std::vector<std::string>& known_parameters() {
    static const std::vector<std::string> keys{
        "year",
        "build.degree",
        "build.composition",
        "calendar.christmas_eve",
        "calendar.new_years_eve",
        "quality.max_constant_run",
        "quality.spike_factor",
        "quality.reject_negative",
        "prosumer.drop",
        "seasons.k_min",
        "seasons.k_max",
        "seasons.runs",
        "enhance.smooth",
        "enhance.durations",
        "filter.window",
        "filter.polyorder",
        "daytypes.trees",
        "daytypes.depth",
        "daytypes.folds",
        "fourier.yearly",
        "fourier.weekly",
        "fourier.daily",
        "fourier.form",
        "fourier.domain",
        "evaluate.table",
        "evaluate.share",
        "evaluate.shares",
        "evaluate.repeats",
        "evaluate.window_a",
        "evaluate.window_b",
        "export.model",
        "synth.households",
        "synth.year",
        "synth.noise",
        "synth.level_spread",
        "synth.transition_days",
        "synth.habits",
        "synth.ev_rate",
        "synth.pv_rate",
        "synth.defect_rate",
        "synth.gap_rate",
        "synth.weekly_uplift",
        "synth.year_end_surge",
    };
    return keys;
}

std::string RunConfig::canonical_json() const {
    json j{{"manifest", manifest.generic_string()},
           {"calendar", calendar.generic_string()},
           {"exclusions", exclusions.generic_string()},
           {"seed", seed},
           {"params", params}};
    return j.dump();
}

std::string RunConfig::hash() const { return text::hex64(text::fnv1a(canonical_json())); }

std::string RunConfig::get(const std::string& key, const std::string& fallback) const {
    const auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

int RunConfig::get_int(const std::string& key, int fallback) const {
    const auto it = params.find(key);
    if (it == params.end()) return fallback;
    const auto v = text::parse_double(it->second);
    if (!v || *v != static_cast<double>(static_cast<int>(*v))) {
        throw ConfigError("parameter " + key + " must be an integer, got '" + it->second + "'");
    }
    return static_cast<int>(*v);
}

double RunConfig::get_double(const std::string& key, double fallback) const {
    const auto it = params.find(key);
    if (it == params.end()) return fallback;
    const auto v = text::parse_double(it->second);
    if (!v || !std::isfinite(*v)) throw ConfigError("parameter " + key + " must be a number, got '" + it->second + "'");
    return *v;
}

bool RunConfig::get_bool(const std::string& key, bool fallback) const {
    const auto it = params.find(key);
    if (it == params.end()) return fallback;
    if (it->second == "true" || it->second == "1") return true;
    if (it->second == "false" || it->second == "0") return false;
    throw ConfigError("parameter " + key + " must be true or false, got '" + it->second + "'");
}

std::vector<double> RunConfig::get_list(const std::string& key, const std::vector<double>& fallback) const {
    const auto it = params.find(key);
    if (it == params.end()) return fallback;
    std::vector<double> out;
    for (auto part : text::split(it->second, ',')) {
        const auto v = text::parse_double(text::trim(part));
        if (!v || !std::isfinite(*v)) throw ConfigError("parameter " + key + " must be a comma-separated list of numbers");
        out.push_back(*v);
    }
    if (out.empty()) throw ConfigError("parameter " + key + " must not be empty");
    return out;
}

RunConfig load_run_config(const Overrides& overrides) {
    RunConfig cfg;
    if (overrides.config) {
        check_exists(*overrides.config, "config file");
        json j;
        try {
            j = json::parse(io::read_file(*overrides.config));
        } catch (const json::parse_error& e) {
            throw ConfigError("config file is not valid JSON: " + std::string(e.what()));
        }
        if (!j.is_object()) throw ConfigError("config file must hold a JSON object");
        const auto base = overrides.config->parent_path();
        for (const auto& [key, value] : j.items()) {
            if (key == "manifest" || key == "calendar" || key == "exclusions" || key == "out") {
                if (!value.is_string()) throw ConfigError("config field '" + key + "' must be a path string");
                const auto p = resolve(base, value.get<std::string>());
                if (key == "manifest") cfg.manifest = p;
                if (key == "calendar") cfg.calendar = p;
                if (key == "exclusions") cfg.exclusions = p;
                if (key == "out") cfg.out = p;
            } else if (key == "seed") {
                if (!value.is_number_unsigned()) throw ConfigError("config field 'seed' must be a non-negative integer");
                cfg.seed = value.get<std::uint64_t>();
            } else if (key == "params") {
                if (!value.is_object()) throw ConfigError("config field 'params' must be an object");
                for (const auto& [k, v] : value.items()) cfg.params[k] = param_text(v);
            } else {
                throw ConfigError("unknown config field '" + key + "'");
            }
        }
    }
    if (overrides.manifest) cfg.manifest = *overrides.manifest;
    if (overrides.out) cfg.out = *overrides.out;
    if (overrides.seed) cfg.seed = *overrides.seed;
    for (const auto& s : overrides.sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos || eq == 0) throw ConfigError("--set expects key=value, got '" + s + "'");
        cfg.params[s.substr(0, eq)] = s.substr(eq + 1);
    }
    const auto& known = known_parameters();
    for (const auto& [k, v] : cfg.params) {
        if (std::find(known.begin(), known.end(), k) == known.end()) throw ConfigError("unknown parameter '" + k + "'");
    }
    check_exists(cfg.manifest, "manifest");
    check_exists(cfg.calendar, "calendar file");
    check_exists(cfg.exclusions, "exclusion file");
    return cfg;
}

}  // namespace slp::cli
