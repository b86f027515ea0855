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

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "loopspam/expectation_matrix.hpp"
#include "loopspam/qubit.hpp"

/**
 * Tomography by exact inversion of S = P W once the data have passed the
 * correlation check. P is M x 3 (rows are Stokes vectors of preparations) and
 * W is 3 x N (columns are observable vectors of settings). Every inversion goes
 * through a 3x3 block; there is no least-squares fallback.
 *
 * Vectors with norm above 1 are scaled back onto the unit sphere and flagged.
 */

namespace loopspam {

struct PrepMatrix {
    std::vector<StokesVector> rows;
    std::vector<bool> renormalized;

    static PrepMatrix from_raw(const Eigen::MatrixXd &p);
    static PrepMatrix from_states(std::vector<StokesVector> states);

    /// M x 3 matrix view.
    Eigen::MatrixXd matrix() const;
    std::size_t size() const {
        return rows.size();
    }
};

struct MeasMatrix {
    std::vector<ObservableVector> cols;
    std::vector<bool> renormalized;

    static MeasMatrix from_raw(const Eigen::MatrixXd &w);
    static MeasMatrix from_observables(std::vector<ObservableVector> observables);

    /// 3 x N matrix view.
    Eigen::MatrixXd matrix() const;
    std::size_t size() const {
        return cols.size();
    }
};

/// P = S W^-1. `s` is M x 3 and `w` holds the three settings of those columns.
/// Throws SingularMeasurement when W is not invertible, Shape on size mismatch.
PrepMatrix qst_invert(const Eigen::MatrixXd &s, const MeasMatrix &w);

/// W = P^-1 S. `s` is 3 x N and `p` holds the three preparations of those rows.
/// Throws SingularPreparation when P is not invertible.
MeasMatrix qdt_invert(const Eigen::MatrixXd &s, const PrepMatrix &p);

struct LoopResult {
    PrepMatrix states;        // a = 1..6
    MeasMatrix observables;   // i = 1..6 (1-3 are the supplied ones)
    double consistency_residual = 0.0;  // max |C - P_{4..6} W_{1..3}|
};

/// Walks the loop: QST on A with the known settings 1-3 gives states 1-3, QDT
/// on B gives settings 4-6, QST on D gives states 4-6, and C is checked
/// against states 4-6 and settings 1-3. Intermediate legs use raw inverted
/// values; renormalization happens only on the final outputs.
/// Throws SingularLeg naming the leg that failed.
LoopResult loop_bootstrap(const ExpectationMatrix &s, const MeasMatrix &known);

/// Same, with raw (possibly gauge-transformed, unphysical) known columns.
/// Returns the raw factors without renormalization.
struct RawLoopResult {
    Eigen::MatrixXd p;  // 6 x 3
    Eigen::MatrixXd w;  // 3 x 6
    double consistency_residual = 0.0;
};
RawLoopResult loop_bootstrap_raw(const ExpectationMatrix &s, const Eigen::Matrix3d &known_w);

struct ReconstructionScore {
    std::vector<double> state_fidelities;
    std::vector<double> povm_fidelities;       // E elements, trace-normalized
    std::vector<double> povm_relative_errors;  // E elements, Frobenius
    std::vector<bool> state_renormalized;
    std::vector<bool> povm_renormalized;

    double min_state_fidelity() const;
    double min_povm_fidelity() const;
    double max_relative_error() const;
};

/// Scores reconstructed states and POVM E-elements against theoretical ones.
/// Throws Shape when list lengths differ.
ReconstructionScore score_reconstruction(const PrepMatrix &rec_states, std::span<const StokesVector> true_states,
                                         const MeasMatrix &rec_povms,
                                         std::span<const ObservableVector> true_povms);

}  // namespace loopspam
