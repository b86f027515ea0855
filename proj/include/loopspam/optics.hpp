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
#include <optional>
#include <random>
#include <vector>

#include "loopspam/expectation_matrix.hpp"
#include "loopspam/qubit.hpp"

/**
 * Polarization bench: source -> preparation HWP -> preparation QWP -> ...
 * -> measurement QWP -> measurement HWP -> PBS. Detector E sits on the PBS
 * port that transmits the sigma_3 = +1 (horizontal) component.
 */

namespace loopspam {

/// Jones matrix of a half-wave plate with its fast axis at theta.
ComplexMatrix2 hwp_unitary(double theta);

/// Jones matrix of a quarter-wave plate with its fast axis at theta.
ComplexMatrix2 qwp_unitary(double theta);

struct WavePlateSetting {
    double qwp = 0.0;
    double hwp = 0.0;

    /// Reduces both angles modulo pi; throws Configuration for non-finite input.
    static WavePlateSetting make(double qwp, double hwp);

    bool operator==(const WavePlateSetting &) const = default;
};

/// The six angle pairs used for both preparation and measurement:
/// QWP {0, pi/4, pi/4, pi/16, 5pi/16, 5pi/16}, HWP {0, 0, pi/8, pi/16, pi/16, 3pi/16}.
/// The n+1 scheme uses the first four.
std::vector<WavePlateSetting> standard_settings(Scheme scheme);

enum class SourceState {
    PureH,  // |H><H|
    Mixed,  // (3/4)|H><H| + (1/4)|V><V|
};

DensityMatrix source_density(SourceState source);

/// A correlated error: the detector plates are offset only when preparation
/// `prep_index` is measured with setting `setting_index` (both 1-based).
struct ErrorInjection {
    int prep_index = 1;
    int setting_index = 1;
    double hwp_offset = 0.0;
    double qwp_offset = 0.0;

    bool operator==(const ErrorInjection &) const = default;
};

struct NoiseModel {
    static constexpr std::uint64_t kDefaultShots = 10000;
    // Calibrated so that std(S_1^1) under a pi/20 detector-HWP injection is
    // about 0.04 over ten repetitions at 10^4 shots.
    static constexpr double kDefaultJitter = 0.012;

    /// Photon counts per (a, i) per repetition; nullopt means analytic mode
    /// (no counting noise, expectations returned exactly).
    std::optional<std::uint64_t> shots_per_setting = kDefaultShots;
    /// Std (radians) of a Gaussian offset drawn once per repetition for each
    /// of the four physical plates.
    double angle_jitter_sigma = kDefaultJitter;
    std::uint64_t seed = 0;

    static NoiseModel analytic() {
        return NoiseModel{std::nullopt, 0.0, 0};
    }
    bool is_analytic() const {
        return !shots_per_setting.has_value();
    }

    bool operator==(const NoiseModel &) const = default;
};

struct ExperimentPlan {
    SourceState source = SourceState::PureH;
    std::vector<WavePlateSetting> prep_settings;
    std::vector<WavePlateSetting> meas_settings;
    Scheme scheme = Scheme::NPlusOne;
    std::vector<ErrorInjection> errors;
    NoiseModel noise;
    int repetitions = 10;

    /// Standard angle sets for `scheme`, default noise, ten repetitions.
    static ExperimentPlan standard(Scheme scheme, SourceState source = SourceState::PureH);

    /// Throws Configuration naming the offending field.
    void validate() const;

    bool operator==(const ExperimentPlan &) const = default;
};

/// Per-repetition offsets of the four plates (radians).
struct PlateJitter {
    double prep_qwp = 0.0;
    double prep_hwp = 0.0;
    double meas_qwp = 0.0;
    double meas_hwp = 0.0;
};

/// rho_a = U rho_src U^dagger with U = QWP(q) HWP(h): light meets the HWP first.
DensityMatrix prepare_state(SourceState source, const WavePlateSetting &setting);

/// Sigma = U^dagger sigma_3 U with U = HWP(h) QWP(q): light meets the QWP first.
ObservableVector measurement_observable(const WavePlateSetting &setting);

/// Noiseless S_a^i (1-based indices) including any matching injections.
/// Throws Bounds for indices out of range.
double true_expectation(const ExperimentPlan &plan, int a, int i);

/// Noiseless matrix of true expectations (the analytic prediction).
ExpectationMatrix true_expectation_matrix(const ExperimentPlan &plan);

/// Ideal Stokes rows and observable columns for the plan's angles, ignoring
/// injections and noise.
std::vector<StokesVector> theoretical_states(const ExperimentPlan &plan);
std::vector<ObservableVector> theoretical_observables(const ExperimentPlan &plan);

using Rng = std::mt19937_64;

/// Independent stream for one repetition, derived from (seed, repetition).
Rng repetition_rng(std::uint64_t seed, int repetition);

/// Draws n_E ~ Binomial(shots, (1 + s_true) / 2) and returns 2 n_E / shots - 1.
/// Returns s_true unchanged in analytic mode.
double sample_expectation(double s_true, const NoiseModel &noise, Rng &rng);

/// One noisy M'xN' matrix for a given repetition index.
ExpectationMatrix simulate_repetition(const ExperimentPlan &plan, int repetition);

/// `plan.repetitions` matrices; identical plans give bit-identical output.
std::vector<ExpectationMatrix> run_experiment(const ExperimentPlan &plan);

}  // namespace loopspam
