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

#include "loopspam/optics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace loopspam {

namespace {

constexpr double kPi = std::numbers::pi;

double reduce_mod_pi(double angle) {
    double r = std::fmod(angle, kPi);
    if (r < 0.0) {
        r += kPi;
    }
    return r;
}

ComplexMatrix2 prep_unitary(double qwp, double hwp) {
    return qwp_unitary(qwp) * hwp_unitary(hwp);
}

ComplexMatrix2 meas_unitary(double qwp, double hwp) {
    return hwp_unitary(hwp) * qwp_unitary(qwp);
}

Vec3 stokes_of(const ComplexMatrix2 &rho) {
    const auto &sigma = pauli_matrices();
    return {(rho * sigma[0]).trace().real(), (rho * sigma[1]).trace().real(), (rho * sigma[2]).trace().real()};
}

Vec3 prepared_stokes(const ComplexMatrix2 &source, double qwp, double hwp) {
    const ComplexMatrix2 u = prep_unitary(qwp, hwp);
    return stokes_of(u * source * u.adjoint());
}

Vec3 observable_of(double qwp, double hwp) {
    const ComplexMatrix2 u = meas_unitary(qwp, hwp);
    const ComplexMatrix2 sigma = u.adjoint() * pauli_matrices()[2] * u;
    // Sigma = w . sigma, so w_k = Tr(Sigma sigma_k) / 2.
    return 0.5 * stokes_of(sigma);
}

// Offsets summed over every injection targeting (a, i), zero-based.
std::pair<double, double> injected_offsets(const ExperimentPlan &plan, int a, int i) {
    double dq = 0.0;
    double dh = 0.0;
    for (const auto &e : plan.errors) {
        if (e.prep_index - 1 == a && e.setting_index - 1 == i) {
            dq += e.qwp_offset;
            dh += e.hwp_offset;
        }
    }
    return {dq, dh};
}

bool has_injection(const ExperimentPlan &plan, int a, int i) {
    return std::any_of(plan.errors.begin(), plan.errors.end(), [&](const ErrorInjection &e) {
        return e.prep_index - 1 == a && e.setting_index - 1 == i;
    });
}

// Full matrix of expectations for one realization of the plate offsets.
Eigen::MatrixXd expectations_with_jitter(const ExperimentPlan &plan, const PlateJitter &j) {
    const int m = static_cast<int>(plan.prep_settings.size());
    const int n = static_cast<int>(plan.meas_settings.size());
    const ComplexMatrix2 source = source_density(plan.source).matrix();

    std::vector<Vec3> states(m);
    for (int a = 0; a < m; ++a) {
        const auto &s = plan.prep_settings[a];
        states[a] = prepared_stokes(source, s.qwp + j.prep_qwp, s.hwp + j.prep_hwp);
    }
    std::vector<Vec3> observables(n);
    for (int i = 0; i < n; ++i) {
        const auto &s = plan.meas_settings[i];
        observables[i] = observable_of(s.qwp + j.meas_qwp, s.hwp + j.meas_hwp);
    }

    Eigen::MatrixXd out(m, n);
    for (int a = 0; a < m; ++a) {
        for (int i = 0; i < n; ++i) {
            Vec3 w = observables[i];
            if (has_injection(plan, a, i)) {
                const auto [dq, dh] = injected_offsets(plan, a, i);
                const auto &s = plan.meas_settings[i];
                w = observable_of(s.qwp + j.meas_qwp + dq, s.hwp + j.meas_hwp + dh);
            }
            out(a, i) = std::clamp(states[a].dot(w), -1.0, 1.0);
        }
    }
    return out;
}

}  // namespace

ComplexMatrix2 hwp_unitary(double theta) {
    const double c = std::cos(2.0 * theta);
    const double s = std::sin(2.0 * theta);
    ComplexMatrix2 u;
    u << c, s, s, -c;
    return u;
}

ComplexMatrix2 qwp_unitary(double theta) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const Complex i{0.0, 1.0};
    const Complex off = (1.0 - i) * s * c;
    ComplexMatrix2 u;
    u << c * c + i * s * s, off, off, s * s + i * c * c;
    return u;
}

WavePlateSetting WavePlateSetting::make(double qwp, double hwp) {
    if (!std::isfinite(qwp) || !std::isfinite(hwp)) {
        throw Error(ErrorCode::Configuration, "wave-plate angles must be finite");
    }
    return {reduce_mod_pi(qwp), reduce_mod_pi(hwp)};
}

std::vector<WavePlateSetting> standard_settings(Scheme scheme) {
    constexpr double p = kPi;
    std::vector<WavePlateSetting> all = {
        WavePlateSetting::make(0.0, 0.0),
        WavePlateSetting::make(p / 4, 0.0),
        WavePlateSetting::make(p / 4, p / 8),
        WavePlateSetting::make(p / 16, p / 16),
        WavePlateSetting::make(5 * p / 16, p / 16),
        WavePlateSetting::make(5 * p / 16, 3 * p / 16),
    };
    all.resize(static_cast<std::size_t>(scheme_dimension(scheme)));
    return all;
}

DensityMatrix source_density(SourceState source) {
    ComplexMatrix2 m = ComplexMatrix2::Zero();
    if (source == SourceState::PureH) {
        m(0, 0) = 1.0;
    } else {
        m(0, 0) = 0.75;
        m(1, 1) = 0.25;
    }
    return DensityMatrix::from_matrix(m);
}

ExperimentPlan ExperimentPlan::standard(Scheme scheme, SourceState source) {
    ExperimentPlan plan;
    plan.source = source;
    plan.scheme = scheme;
    plan.prep_settings = standard_settings(scheme);
    plan.meas_settings = standard_settings(scheme);
    return plan;
}

void ExperimentPlan::validate() const {
    const auto dim = static_cast<std::size_t>(scheme_dimension(scheme));
    const std::string scheme_label(scheme_name(scheme));
    if (prep_settings.size() != dim) {
        throw Error(ErrorCode::Configuration, "prep_settings: scheme " + scheme_label + " requires " +
                                                  std::to_string(dim) + " entries, got " +
                                                  std::to_string(prep_settings.size()));
    }
    if (meas_settings.size() != dim) {
        throw Error(ErrorCode::Configuration, "meas_settings: scheme " + scheme_label + " requires " +
                                                  std::to_string(dim) + " entries, got " +
                                                  std::to_string(meas_settings.size()));
    }
    for (const auto *list : {&prep_settings, &meas_settings}) {
        for (const auto &s : *list) {
            if (!std::isfinite(s.qwp) || !std::isfinite(s.hwp)) {
                throw Error(ErrorCode::Configuration, "settings: wave-plate angles must be finite");
            }
        }
    }
    if (repetitions < 1) {
        throw Error(ErrorCode::Configuration, "repetitions: must be positive");
    }
    if (noise.shots_per_setting && *noise.shots_per_setting == 0) {
        throw Error(ErrorCode::Configuration, "shots: must be positive");
    }
    if (!std::isfinite(noise.angle_jitter_sigma) || noise.angle_jitter_sigma < 0.0) {
        throw Error(ErrorCode::Configuration, "jitter: must be a finite non-negative angle");
    }
    for (const auto &e : errors) {
        if (e.prep_index < 1 || static_cast<std::size_t>(e.prep_index) > dim || e.setting_index < 1 ||
            static_cast<std::size_t>(e.setting_index) > dim) {
            throw Error(ErrorCode::Configuration, "error_injections: index (" + std::to_string(e.prep_index) + ", " +
                                                      std::to_string(e.setting_index) + ") out of range");
        }
        if (!std::isfinite(e.hwp_offset) || !std::isfinite(e.qwp_offset)) {
            throw Error(ErrorCode::Configuration, "error_injections: offsets must be finite");
        }
    }
}

DensityMatrix prepare_state(SourceState source, const WavePlateSetting &setting) {
    const ComplexMatrix2 u = prep_unitary(setting.qwp, setting.hwp);
    ComplexMatrix2 rho = u * source_density(source).matrix() * u.adjoint();
    rho = 0.5 * (rho + rho.adjoint()).eval();
    return DensityMatrix::from_matrix(rho);
}

ObservableVector measurement_observable(const WavePlateSetting &setting) {
    return ObservableVector(observable_of(setting.qwp, setting.hwp));
}

double true_expectation(const ExperimentPlan &plan, int a, int i) {
    if (a < 1 || i < 1 || static_cast<std::size_t>(a) > plan.prep_settings.size() ||
        static_cast<std::size_t>(i) > plan.meas_settings.size()) {
        throw Error(ErrorCode::Bounds, "expectation index (" + std::to_string(a) + ", " + std::to_string(i) +
                                           ") out of range");
    }
    const ComplexMatrix2 source = source_density(plan.source).matrix();
    const auto &ps = plan.prep_settings[a - 1];
    const auto &ms = plan.meas_settings[i - 1];
    const auto [dq, dh] = injected_offsets(plan, a - 1, i - 1);
    const Vec3 s = prepared_stokes(source, ps.qwp, ps.hwp);
    const Vec3 w = observable_of(ms.qwp + dq, ms.hwp + dh);
    return std::clamp(s.dot(w), -1.0, 1.0);
}

ExpectationMatrix true_expectation_matrix(const ExperimentPlan &plan) {
    plan.validate();
    return ExpectationMatrix(expectations_with_jitter(plan, PlateJitter{}));
}

std::vector<StokesVector> theoretical_states(const ExperimentPlan &plan) {
    std::vector<StokesVector> out;
    out.reserve(plan.prep_settings.size());
    for (const auto &s : plan.prep_settings) {
        out.push_back(stokes_from_density(prepare_state(plan.source, s)));
    }
    return out;
}

std::vector<ObservableVector> theoretical_observables(const ExperimentPlan &plan) {
    std::vector<ObservableVector> out;
    out.reserve(plan.meas_settings.size());
    for (const auto &s : plan.meas_settings) {
        out.push_back(measurement_observable(s));
    }
    return out;
}

Rng repetition_rng(std::uint64_t seed, int repetition) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(repetition), 0x5350414dU};
    return Rng(seq);
}

double sample_expectation(double s_true, const NoiseModel &noise, Rng &rng) {
    if (noise.is_analytic()) {
        return s_true;
    }
    const double p = 0.5 * (1.0 + s_true);
    if (p >= 1.0) {
        return 1.0;
    }
    if (p <= 0.0) {
        return -1.0;
    }
    const auto shots = static_cast<std::int64_t>(*noise.shots_per_setting);
    std::binomial_distribution<std::int64_t> counts(shots, p);
    const auto n_e = counts(rng);
    return 2.0 * static_cast<double>(n_e) / static_cast<double>(shots) - 1.0;
}

ExpectationMatrix simulate_repetition(const ExperimentPlan &plan, int repetition) {
    Rng rng = repetition_rng(plan.noise.seed, repetition);
    PlateJitter jitter;
    if (plan.noise.angle_jitter_sigma > 0.0) {
        std::normal_distribution<double> gauss(0.0, plan.noise.angle_jitter_sigma);
        jitter.prep_qwp = gauss(rng);
        jitter.prep_hwp = gauss(rng);
        jitter.meas_qwp = gauss(rng);
        jitter.meas_hwp = gauss(rng);
    }
    Eigen::MatrixXd s = expectations_with_jitter(plan, jitter);
    for (Eigen::Index a = 0; a < s.rows(); ++a) {
        for (Eigen::Index i = 0; i < s.cols(); ++i) {
            s(a, i) = sample_expectation(s(a, i), plan.noise, rng);
        }
    }
    return ExpectationMatrix(std::move(s));
}

std::vector<ExpectationMatrix> run_experiment(const ExperimentPlan &plan) {
    plan.validate();
    std::vector<ExpectationMatrix> out;
    out.reserve(static_cast<std::size_t>(plan.repetitions));
    for (int r = 0; r < plan.repetitions; ++r) {
        out.push_back(simulate_repetition(plan, r));
    }
    return out;
}

}  // namespace loopspam
