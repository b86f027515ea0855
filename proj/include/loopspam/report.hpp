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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "loopspam/config.hpp"
#include "loopspam/expectation_matrix.hpp"
#include "loopspam/spam_detect.hpp"
#include "loopspam/tomography.hpp"

namespace loopspam {

inline constexpr std::string_view kReportSchema = "loopspam.report/1";
inline constexpr std::string_view kPlotSchema = "loopspam.plot/1";
inline constexpr std::string_view kToolVersion = "1.0.0";

enum ExitCode : int {
    kExitNoCorrelation = 0,
    kExitError = 1,
    kExitCorrelationDetected = 2,
};

struct ReconstructionOutputs {
    PrepMatrix states;
    MeasMatrix povms;
    double consistency_residual = 0.0;
    std::optional<ReconstructionScore> score;
};

struct RunError {
    std::string code;
    std::string message;
};

/// Everything a run produced. Wall-clock time is deliberately not part of it
/// so that identical configs give byte-identical report files.
struct RunReport {
    std::string config_echo;  // canonical config text (config_to_json_text)
    RunMode mode = RunMode::Full;
    Scheme scheme = Scheme::TwoN;
    std::uint64_t seed = 0;
    std::string data_source;  // "simulation" or the input file path
    std::vector<ExpectationMatrix> samples;
    std::optional<DeltaStats> stats;
    std::optional<DetectionReport> detection;
    std::optional<ReconstructionOutputs> reconstruction;
    std::optional<RunError> error;
    int exit_code = kExitNoCorrelation;
};

std::string serialize_report(const RunReport &report);
RunReport deserialize_report(std::string_view text);

/// Mean, std and significance grids of Delta(S) - 1 with a metadata header.
/// Throws MissingStats when the report has no statistics and Io on write
/// failure.
void emit_plot_data(const RunReport &report, const std::filesystem::path &path);
std::string format_plot_data(const RunReport &report);

}  // namespace loopspam
