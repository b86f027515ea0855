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
#include <iosfwd>
#include <string>
#include <vector>

#include "loopspam/expectation_matrix.hpp"

/**
 * Measurement files: one header line, then one comma-separated block per
 * repetition, blocks separated by blank lines.
 *
 *   # loopspam-measurements v1 scheme=n_plus_1 blocks=10
 *   1,0,0,0.853
 *   ...
 *
 * Rows are preparations, columns are detector settings. Lines starting with
 * '#' after the header are comments.
 */

namespace loopspam {

struct MeasurementSet {
    Scheme scheme = Scheme::TwoN;
    std::vector<ExpectationMatrix> blocks;
};

/// Errors carry block/row/column positions (1-based): Parse for malformed
/// text or wrong column counts, Range for entries outside [-1, 1], Io when
/// the file cannot be read.
MeasurementSet load_measurements(const std::filesystem::path &path);
MeasurementSet parse_measurements(std::istream &in);

/// Writes every entry with 17 significant digits so values reload exactly.
void write_measurements(const std::filesystem::path &path, const MeasurementSet &set);
std::string format_measurements(const MeasurementSet &set);

}  // namespace loopspam
