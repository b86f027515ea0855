// Copyright 2026 The loopspam Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "loopspam/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <regex>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "json.hpp"

namespace loopspam {

namespace {

std::string where(const YAML::Node &node) {
    const auto mark = node.Mark();
    if (mark.line < 0) {
        return "";
    }
    return "line " + std::to_string(mark.line + 1) + ", column " + std::to_string(mark.column + 1) + ": ";
}

[[noreturn]] void parse_fail(const YAML::Node &node, std::string_view field, const std::string &msg) {
    throw Error(ErrorCode::Parse, "config " + where(node) + "field '" + std::string(field) + "': " + msg);
}

[[noreturn]] void semantic_fail(const YAML::Node &node, std::string_view field, const std::string &msg) {
    throw Error(ErrorCode::Configuration, "config " + where(node) + "field '" + std::string(field) + "': " + msg);
}

template <typename T>
T scalar_as(const YAML::Node &node, std::string_view field, const char *expected) {
    if (!node.IsScalar()) {
        parse_fail(node, field, std::string("expected ") + expected);
    }
    try {
        return node.as<T>();
    } catch (const YAML::Exception &) {
        parse_fail(node, field, std::string("expected ") + expected + ", got '" + node.Scalar() + "'");
    }
}

double angle_from(const YAML::Node &node, std::string_view field) {
    if (!node.IsScalar()) {
        parse_fail(node, field, "expected an angle");
    }
    try {
        return parse_angle(node.Scalar());
    } catch (const Error &e) {
        parse_fail(node, field, e.what());
    }
}

WavePlateSetting setting_from(const YAML::Node &node, std::string_view field) {
    double q = 0.0;
    double h = 0.0;
    if (node.IsMap()) {
        for (const auto &kv : node) {
            const auto key = kv.first.as<std::string>();
            if (key != "qwp" && key != "hwp") {
                parse_fail(kv.first, field, "unknown key '" + key + "' (expected qwp, hwp)");
            }
        }
        if (!node["qwp"] || !node["hwp"]) {
            parse_fail(node, field, "each setting needs both qwp and hwp");
        }
        q = angle_from(node["qwp"], field);
        h = angle_from(node["hwp"], field);
    } else if (node.IsSequence() && node.size() == 2) {
        q = angle_from(node[0], field);
        h = angle_from(node[1], field);
    } else {
        parse_fail(node, field, "a setting is {qwp: <angle>, hwp: <angle>} or [qwp, hwp]");
    }
    return WavePlateSetting::make(q, h);
}

std::vector<WavePlateSetting> settings_from(const YAML::Node &node, std::string_view field) {
    if (!node.IsSequence()) {
        parse_fail(node, field, "expected a list of wave-plate settings");
    }
    std::vector<WavePlateSetting> out;
    for (const auto &item : node) {
        out.push_back(setting_from(item, field));
    }
    return out;
}

const std::set<std::string> &known_keys() {
    static const std::set<std::string> keys = {
        "schema",         "mode",           "scheme",     "state",       "seed",
        "shots",          "jitter",         "repetitions", "threshold",  "prep_settings",
        "meas_settings",  "error_injections", "known_povms", "input_data", "output_dir",
    };
    return keys;
}

}  // namespace

std::string_view run_mode_name(RunMode mode) {
    switch (mode) {
        case RunMode::Simulate:
            return "simulate";
        case RunMode::Analyze:
            return "analyze";
        case RunMode::Reconstruct:
            return "reconstruct";
        case RunMode::Full:
            return "full";
    }
    return "full";
}

RunMode parse_run_mode(std::string_view text) {
    if (text == "simulate") {
        return RunMode::Simulate;
    }
    if (text == "analyze") {
        return RunMode::Analyze;
    }
    if (text == "reconstruct") {
        return RunMode::Reconstruct;
    }
    if (text == "full") {
        return RunMode::Full;
    }
    throw Error(ErrorCode::Configuration,
                "unknown mode '" + std::string(text) + "' (expected simulate, analyze, reconstruct or full)");
}

std::string_view source_state_name(SourceState source) {
    return source == SourceState::PureH ? "pure_h" : "mixed";
}

SourceState parse_source_state(std::string_view text) {
    if (text == "pure_h" || text == "H") {
        return SourceState::PureH;
    }
    if (text == "mixed" || text == "M") {
        return SourceState::Mixed;
    }
    throw Error(ErrorCode::Configuration, "unknown state '" + std::string(text) + "' (expected pure_h or mixed)");
}

double parse_angle(std::string_view text) {
    static const std::regex pattern(
        R"(^\s*([+-])?\s*([0-9]+(?:\.[0-9]*)?(?:[eE][+-]?[0-9]+)?)?\s*(\*?\s*pi)?\s*(?:/\s*([0-9]+(?:\.[0-9]*)?))?\s*$)");
    const std::string s(text);
    std::smatch m;
    if (!std::regex_match(s, m, pattern) || (!m[2].matched && !m[3].matched)) {
        throw Error(ErrorCode::Parse, "cannot parse angle '" + s + "'");
    }
    double value = m[2].matched ? std::stod(m[2].str()) : 1.0;
    if (m[3].matched) {
        value *= std::numbers::pi;
    }
    if (m[4].matched) {
        const double denom = std::stod(m[4].str());
        if (denom == 0.0) {
            throw Error(ErrorCode::Parse, "angle '" + s + "' divides by zero");
        }
        value /= denom;
    }
    if (m[1].matched && m[1].str() == "-") {
        value = -value;
    }
    return value;
}

void RunConfig::validate() const {
    plan.validate();
    if (!(detection_threshold > 0.0) || !std::isfinite(detection_threshold)) {
        throw Error(ErrorCode::Configuration, "threshold: must be a positive number");
    }
    if ((mode == RunMode::Analyze || mode == RunMode::Reconstruct) && !input_data_path &&
        !has_simulation_parameters) {
        throw Error(ErrorCode::Configuration,
                    std::string(run_mode_name(mode)) + " needs input_data or simulation parameters (scheme, ...)");
    }
    if (known_povms && known_povms->size() != 3) {
        throw Error(ErrorCode::Configuration, "known_povms: exactly three observable vectors are required");
    }
}

RunConfig parse_config(std::string_view text, const std::filesystem::path &base_dir) {
    YAML::Node root;
    try {
        root = YAML::Load(std::string(text));
    } catch (const YAML::ParserException &e) {
        throw Error(ErrorCode::Parse, "config line " + std::to_string(e.mark.line + 1) + ", column " +
                                          std::to_string(e.mark.column + 1) + ": " + e.msg);
    }
    if (!root || root.IsNull()) {
        root = YAML::Node(YAML::NodeType::Map);
    }
    if (!root.IsMap()) {
        throw Error(ErrorCode::Parse, "config: top level must be a mapping of fields");
    }
    for (const auto &kv : root) {
        const auto key = kv.first.as<std::string>();
        if (!known_keys().contains(key)) {
            parse_fail(kv.first, key, "unknown field");
        }
    }

    RunConfig cfg;
    auto &plan = cfg.plan;

    if (const auto node = root["schema"]) {
        if (scalar_as<std::string>(node, "schema", "a string") != kConfigSchema) {
            semantic_fail(node, "schema", "unsupported schema (expected " + std::string(kConfigSchema) + ")");
        }
    }
    if (const auto node = root["mode"]) {
        try {
            cfg.mode = parse_run_mode(scalar_as<std::string>(node, "mode", "a string"));
        } catch (const Error &e) {
            semantic_fail(node, "mode", e.what());
        }
    }
    plan.scheme = Scheme::NPlusOne;
    if (const auto node = root["scheme"]) {
        try {
            plan.scheme = parse_scheme(scalar_as<std::string>(node, "scheme", "a string"));
        } catch (const Error &e) {
            semantic_fail(node, "scheme", e.what());
        }
    }
    if (const auto node = root["state"]) {
        try {
            plan.source = parse_source_state(scalar_as<std::string>(node, "state", "a string"));
        } catch (const Error &e) {
            semantic_fail(node, "state", e.what());
        }
    }
    if (const auto node = root["seed"]) {
        plan.noise.seed = scalar_as<std::uint64_t>(node, "seed", "a non-negative integer");
    }
    if (const auto node = root["shots"]) {
        const auto text = scalar_as<std::string>(node, "shots", "a positive integer or 'analytic'");
        if (text == "analytic" || text == "inf") {
            plan.noise.shots_per_setting = std::nullopt;
        } else {
            const auto shots = scalar_as<long long>(node, "shots", "a positive integer or 'analytic'");
            if (shots <= 0) {
                semantic_fail(node, "shots", "must be positive");
            }
            plan.noise.shots_per_setting = static_cast<std::uint64_t>(shots);
        }
    }
    if (const auto node = root["jitter"]) {
        plan.noise.angle_jitter_sigma = angle_from(node, "jitter");
        if (plan.noise.angle_jitter_sigma < 0.0) {
            semantic_fail(node, "jitter", "must be non-negative");
        }
    }
    if (const auto node = root["repetitions"]) {
        plan.repetitions = scalar_as<int>(node, "repetitions", "an integer");
        if (plan.repetitions < 1) {
            semantic_fail(node, "repetitions", "must be positive");
        }
    }
    if (const auto node = root["threshold"]) {
        cfg.detection_threshold = scalar_as<double>(node, "threshold", "a number");
        if (!(cfg.detection_threshold > 0.0)) {
            semantic_fail(node, "threshold", "must be positive");
        }
    }

    const auto dim = static_cast<std::size_t>(scheme_dimension(plan.scheme));
    plan.prep_settings = standard_settings(plan.scheme);
    plan.meas_settings = standard_settings(plan.scheme);
    for (const char *field : {"prep_settings", "meas_settings"}) {
        if (const auto node = root[field]) {
            auto settings = settings_from(node, field);
            if (settings.size() != dim) {
                semantic_fail(node, field,
                              "scheme " + std::string(scheme_name(plan.scheme)) + " requires " + std::to_string(dim) +
                                  " settings, got " + std::to_string(settings.size()));
            }
            (std::string_view(field) == "prep_settings" ? plan.prep_settings : plan.meas_settings) =
                std::move(settings);
        }
    }

    if (const auto node = root["error_injections"]) {
        if (!node.IsSequence()) {
            parse_fail(node, "error_injections", "expected a list");
        }
        for (const auto &item : node) {
            if (!item.IsMap()) {
                parse_fail(item, "error_injections", "each entry is {prep, setting, hwp_offset, qwp_offset}");
            }
            for (const auto &kv : item) {
                const auto key = kv.first.as<std::string>();
                if (key != "prep" && key != "setting" && key != "hwp_offset" && key != "qwp_offset") {
                    parse_fail(kv.first, "error_injections", "unknown key '" + key + "'");
                }
            }
            if (!item["prep"] || !item["setting"]) {
                parse_fail(item, "error_injections", "prep and setting are required");
            }
            ErrorInjection inj;
            inj.prep_index = scalar_as<int>(item["prep"], "error_injections.prep", "an integer");
            inj.setting_index = scalar_as<int>(item["setting"], "error_injections.setting", "an integer");
            if (item["hwp_offset"]) {
                inj.hwp_offset = angle_from(item["hwp_offset"], "error_injections.hwp_offset");
            }
            if (item["qwp_offset"]) {
                inj.qwp_offset = angle_from(item["qwp_offset"], "error_injections.qwp_offset");
            }
            if (inj.prep_index < 1 || static_cast<std::size_t>(inj.prep_index) > dim || inj.setting_index < 1 ||
                static_cast<std::size_t>(inj.setting_index) > dim) {
                semantic_fail(item, "error_injections",
                              "index out of range for scheme " + std::string(scheme_name(plan.scheme)));
            }
            plan.errors.push_back(inj);
        }
    }

    if (const auto node = root["known_povms"]) {
        if (!node.IsSequence() || node.size() != 3) {
            semantic_fail(node, "known_povms", "expected a list of three [w1, w2, w3] vectors");
        }
        std::vector<ObservableVector> povms;
        for (const auto &item : node) {
            if (!item.IsSequence() || item.size() != 3) {
                parse_fail(item, "known_povms", "each entry is [w1, w2, w3]");
            }
            Vec3 w;
            for (int k = 0; k < 3; ++k) {
                w[k] = scalar_as<double>(item[k], "known_povms", "a number");
            }
            try {
                povms.emplace_back(w);
            } catch (const Error &e) {
                semantic_fail(item, "known_povms", e.what());
            }
        }
        cfg.known_povms = std::move(povms);
    }

    if (const auto node = root["input_data"]) {
        std::filesystem::path p = scalar_as<std::string>(node, "input_data", "a path");
        if (p.is_relative() && !base_dir.empty()) {
            p = base_dir / p;
        }
        cfg.input_data_path = p;
    }
    if (const auto node = root["output_dir"]) {
        cfg.output_dir = scalar_as<std::string>(node, "output_dir", "a path");
    }

    for (const char *key : {"scheme", "state", "seed", "shots", "jitter", "repetitions", "prep_settings",
                            "meas_settings", "error_injections"}) {
        if (root[key]) {
            cfg.has_simulation_parameters = true;
        }
    }
    cfg.validate();
    return cfg;
}

RunConfig load_config(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::Io, "cannot open config file " + path.string());
    }
    std::ostringstream text;
    text << in.rdbuf();
    try {
        return parse_config(text.str(), path.parent_path());
    } catch (const Error &e) {
        throw Error(e.code(), path.string() + ": " + e.what());
    }
}

std::string config_to_json_text(const RunConfig &config) {
    using nlohmann::ordered_json;
    const auto &plan = config.plan;
    ordered_json j;
    j["schema"] = kConfigSchema;
    j["mode"] = run_mode_name(config.mode);
    j["scheme"] = scheme_name(plan.scheme);
    j["state"] = source_state_name(plan.source);
    j["seed"] = plan.noise.seed;
    if (plan.noise.shots_per_setting) {
        j["shots"] = *plan.noise.shots_per_setting;
    } else {
        j["shots"] = "analytic";
    }
    j["jitter"] = plan.noise.angle_jitter_sigma;
    j["repetitions"] = plan.repetitions;
    j["threshold"] = config.detection_threshold;
    auto settings = [](const std::vector<WavePlateSetting> &list) {
        ordered_json arr = ordered_json::array();
        for (const auto &s : list) {
            arr.push_back({{"qwp", s.qwp}, {"hwp", s.hwp}});
        }
        return arr;
    };
    j["prep_settings"] = settings(plan.prep_settings);
    j["meas_settings"] = settings(plan.meas_settings);
    ordered_json errors = ordered_json::array();
    for (const auto &e : plan.errors) {
        errors.push_back(
            {{"prep", e.prep_index}, {"setting", e.setting_index}, {"hwp_offset", e.hwp_offset}, {"qwp_offset", e.qwp_offset}});
    }
    j["error_injections"] = errors;
    if (config.known_povms) {
        ordered_json povms = ordered_json::array();
        for (const auto &w : *config.known_povms) {
            povms.push_back({w[0], w[1], w[2]});
        }
        j["known_povms"] = povms;
    }
    if (config.input_data_path) {
        j["input_data"] = config.input_data_path->generic_string();
    }
    if (!config.output_dir.empty()) {
        j["output_dir"] = config.output_dir.generic_string();
    }
    return j.dump(2);
}

}  // namespace loopspam
