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

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "loopspam/optics.hpp"
#include "loopspam/spam_detect.hpp"

namespace loopspam {

inline constexpr std::string_view kConfigSchema = "loopspam.config/1";

enum class RunMode { Simulate, Analyze, Reconstruct, Full };

std::string_view run_mode_name(RunMode mode);
RunMode parse_run_mode(std::string_view text);

std::string_view source_state_name(SourceState source);
SourceState parse_source_state(std::string_view text);

/// Parses an angle in radians: a decimal literal ("0.785") or a multiple of
/// pi ("pi/16", "5pi/16", "5*pi/16", "-pi/4", "pi"). Throws Parse.
double parse_angle(std::string_view text);

struct RunConfig {
    ExperimentPlan plan;
    RunMode mode = RunMode::Full;
    std::optional<std::filesystem::path> input_data_path;
    std::optional<std::vector<ObservableVector>> known_povms;
    double detection_threshold = kDefaultDetectionThreshold;
    std::filesystem::path output_dir;
    // False when neither a scheme nor any other simulation key was given.
    bool has_simulation_parameters = false;

    /// Semantic checks that span several fields. Throws Configuration.
    void validate() const;
};

/// Reads a YAML (or JSON) document. Omitted fields take defaults: the standard
/// angle sets for the scheme, 10^4 shots, ten repetitions, threshold 3.
/// Relative input_data paths resolve against the config file's directory.
/// Syntax errors raise Parse with line/column; semantic ones raise
/// Configuration naming the field.
RunConfig load_config(const std::filesystem::path &path);
RunConfig parse_config(std::string_view text, const std::filesystem::path &base_dir = {});

/// Canonical YAML/JSON text for a config; parse_config reads it back.
std::string config_to_json_text(const RunConfig &config);

}  // namespace loopspam
