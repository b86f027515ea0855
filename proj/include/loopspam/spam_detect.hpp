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

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "loopspam/expectation_matrix.hpp"

namespace loopspam {

inline constexpr double kDefaultDetectionThreshold = 3.0;
inline constexpr double kSingularityCutoff = 1e-10;

/// Builds the 6x6 matrix from 4x4 data by duplicating rows and columns 2-3
/// into 5-6. Throws Shape unless the input is Compact4.
ExpectationMatrix embed_n_plus_1(const ExpectationMatrix &compact);

/// Inverse via the adjugate. Returns nullopt when
/// |det m| <= rel_cutoff * ||m||_F^3.
std::optional<Eigen::Matrix3d> invert3(const Eigen::Matrix3d &m, double rel_cutoff = kSingularityCutoff);

struct PartialDeterminant {
    Eigen::Matrix3d delta;

    /// Delta - 1; zero for data that factor as S = P W.
    Eigen::Matrix3d deviation() const {
        return delta - Eigen::Matrix3d::Identity();
    }
};

/// Delta(S) = A^-1 B D^-1 C over the corner partition of a Full6 matrix.
/// Throws SingularCorner (naming A or D) when a corner cannot be inverted.
PartialDeterminant partial_determinant(const ExpectationMatrix &s, double rel_cutoff = kSingularityCutoff);

/// Element-wise statistics of Delta(S) - 1 over repetitions.
struct DeltaStats {
    Eigen::Matrix3d mean = Eigen::Matrix3d::Zero();
    Eigen::Matrix3d std = Eigen::Matrix3d::Zero();
    // |mean| / std; +infinity when std == 0 and mean != 0, 0 when both are 0.
    Eigen::Matrix3d significance = Eigen::Matrix3d::Zero();
    int repetitions = 0;
};

/// Requires at least two Full6 samples. The standard deviation uses the N-1
/// denominator; sums run in sample order.
DeltaStats delta_statistics(std::span<const ExpectationMatrix> samples);

struct FlaggedElement {
    int row = 0;  // 1-based
    int col = 0;  // 1-based
    double significance = 0.0;

    bool operator==(const FlaggedElement &) const = default;
};

struct CandidateLocation {
    int prep = 0;     // 1-based preparation a
    int setting = 0;  // 1-based detector setting i
    std::string note;

    bool operator==(const CandidateLocation &) const = default;
};

struct DetectionReport {
    bool detected = false;
    double threshold = kDefaultDetectionThreshold;
    std::vector<FlaggedElement> flagged;
    std::vector<CandidateLocation> candidates;
    Scheme scheme = Scheme::TwoN;
    bool localized = false;
    bool location_indeterminate = false;
    std::string summary;

    bool contains_candidate(int prep, int setting) const;

    bool operator==(const DetectionReport &) const = default;
};

/// Flags every element with significance strictly above `threshold`.
DetectionReport detect(const DeltaStats &stats, double threshold = kDefaultDetectionThreshold);

/// Maps flagged elements to candidate (preparation, setting) pairs.
///
/// 2n: every flagged row r and flagged column c yields preparations {r, r+3}
/// crossed with settings {c, c+3}; the partial determinant cannot tell the
/// two corners sharing a row/column pattern apart, so both are listed.
///
/// n+1: flags confined to row 1 / column 1 mean an error is present but its
/// location is indeterminate. Flags elsewhere are reported as candidates, and
/// any row-1/column-1 flags are noted as duplication artifacts of the
/// embedding.
DetectionReport localize(DetectionReport report, Scheme scheme);

}  // namespace loopspam
