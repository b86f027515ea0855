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

#include "loopspam/config.hpp"
#include "loopspam/report.hpp"

namespace loopspam {

/// Runs the pipeline selected by `config.mode`:
///
///   simulate     generate (or load) the per-repetition S matrices
///   analyze      + embed (n+1) -> Delta statistics -> detect -> localize
///   reconstruct  + loop bootstrap on the mean S, scored against the plan
///   full         analyze, then reconstruct when nothing was detected
///
/// Library errors never escape: they are recorded in the report with
/// exit code 1. Nothing is written to disk.
RunReport run(const RunConfig &config);

/// Writes report.json, measurements.csv (when samples exist) and
/// plot_data.csv (when statistics exist) into `dir`. Throws Io.
void write_outputs(const RunReport &report, const std::filesystem::path &dir);

}  // namespace loopspam
