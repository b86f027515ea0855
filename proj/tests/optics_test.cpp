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

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "loopspam/optics.hpp"
#include "oracles.hpp"

namespace loopspam {
namespace {

using std::numbers::pi;
constexpr double kTight = 1e-12;

template <typename F>
void expect_code(F &&f, ErrorCode code) {
    try {
        f();
        ADD_FAILURE() << "expected " << error_code_name(code);
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), code) << e.what();
    }
}

double max_abs(const ComplexMatrix2 &m) {
    return m.cwiseAbs().maxCoeff();
}

// Observable through the oracle route: w_k = Tr(U^dag sigma_3 U sigma_k) / 2.
Vec3 observable_oracle(double qwp, double hwp) {
    const ComplexMatrix2 u = hwp_unitary(hwp) * qwp_unitary(qwp);
    return oracles::pauli_coefficients(u.adjoint() * oracles::pauli(2) * u);
}

TEST(HwpUnitary, Examples) {
    EXPECT_LE(max_abs(hwp_unitary(0.0) - ComplexMatrix2(Eigen::Vector2cd(1, -1).asDiagonal())), kTight);
    ComplexMatrix2 swap;
    swap << 0, 1, 1, 0;
    EXPECT_LE(max_abs(hwp_unitary(pi / 4) - swap), kTight);
    ComplexMatrix2 had;
    had << 1, 1, 1, -1;
    EXPECT_LE(max_abs(hwp_unitary(pi / 8) - had / std::sqrt(2.0)), kTight);
    // H goes to diagonal polarization.
    const Vec3 s = oracles::stokes_of_jones(hwp_unitary(pi / 8) * Eigen::Vector2cd(1, 0));
    EXPECT_LE((s - Vec3(1, 0, 0)).norm(), kTight);
}

TEST(QwpUnitary, Examples) {
    const Complex i(0, 1);
    EXPECT_LE(max_abs(qwp_unitary(0.0) - ComplexMatrix2(Eigen::Vector2cd(1, i).asDiagonal())), kTight);
    EXPECT_LE(max_abs(qwp_unitary(pi / 2) - ComplexMatrix2(Eigen::Vector2cd(i, 1).asDiagonal())), kTight);
    const Vec3 s = oracles::stokes_of_jones(qwp_unitary(pi / 4) * Eigen::Vector2cd(1, 0));
    EXPECT_NEAR(std::abs(s[1]), 1.0, kTight);
    EXPECT_NEAR(s[0], 0.0, kTight);
    EXPECT_NEAR(s[2], 0.0, kTight);
}

TEST(WavePlateSetting, ReducesModuloPi) {
    const auto s = WavePlateSetting::make(pi + 0.25, -0.5);
    EXPECT_NEAR(s.qwp, 0.25, kTight);
    EXPECT_NEAR(s.hwp, pi - 0.5, kTight);
    expect_code([] { WavePlateSetting::make(std::numeric_limits<double>::quiet_NaN(), 0); }, ErrorCode::Configuration);
    expect_code([] { WavePlateSetting::make(0, std::numeric_limits<double>::infinity()); }, ErrorCode::Configuration);
}

TEST(PrepareState, Examples) {
    const auto h = prepare_state(SourceState::PureH, {0, 0});
    EXPECT_LE((stokes_from_density(h).vec() - Vec3(0, 0, 1)).norm(), kTight);
    const auto m = prepare_state(SourceState::Mixed, {0, 0});
    EXPECT_NEAR(m.matrix()(0, 0).real(), 0.75, kTight);
    EXPECT_NEAR(m.matrix()(1, 1).real(), 0.25, kTight);
    EXPECT_NEAR(std::abs(m.matrix()(0, 1)), 0.0, kTight);
    const Vec3 c = stokes_from_density(prepare_state(SourceState::PureH, {pi / 4, 0})).vec();
    EXPECT_NEAR(c.norm(), 1.0, kTight);
    EXPECT_NEAR(c[2], 0.0, kTight);
    // Jones-vector oracle: light meets the HWP, then the QWP.
    const Vec3 oracle = oracles::stokes_of_jones(qwp_unitary(pi / 4) * hwp_unitary(0) * Eigen::Vector2cd(1, 0));
    EXPECT_LE((c - oracle).norm(), kTight);
}

TEST(MeasurementObservable, Examples) {
    EXPECT_LE((measurement_observable({0, 0}).vec() - Vec3(0, 0, 1)).norm(), kTight);
    const Vec3 circ = measurement_observable({pi / 4, 0}).vec();
    EXPECT_NEAR(std::abs(circ[1]), 1.0, kTight);
    // Circular preparation 2 measured with circular setting 2 gives -1.
    const Vec3 s2 = stokes_from_density(prepare_state(SourceState::PureH, {pi / 4, 0})).vec();
    EXPECT_NEAR(s2.dot(circ), -1.0, kTight);
}

TEST(MeasurementObservable, HalfWaveAtPiOver8BehindBareQuarterWave) {
    // With the QWP at 0 in front, the PBS no longer sees the diagonal basis:
    // diag(1, i) turns the sigma_1 axis into -sigma_2.
    const Vec3 w = measurement_observable({0, pi / 8}).vec();
    EXPECT_LE((w - observable_oracle(0, pi / 8)).norm(), kTight);
    EXPECT_LE((w - Vec3(0, -1, 0)).norm(), kTight);
    // The HWP alone at pi/8 does measure the diagonal basis.
    const ComplexMatrix2 u = hwp_unitary(pi / 8);
    EXPECT_LE((oracles::pauli_coefficients(u.adjoint() * oracles::pauli(2) * u) - Vec3(1, 0, 0)).norm(), kTight);
}

TEST(TrueExpectation, InjectionExamples) {
    auto plan = ExperimentPlan::standard(Scheme::TwoN);
    EXPECT_NEAR(true_expectation(plan, 1, 1), 1.0, kTight);
    EXPECT_NEAR(true_expectation(plan, 2, 2), -1.0, kTight);
    for (double offset : {pi / 4, pi / 20, pi / 40}) {
        plan.errors = {ErrorInjection{1, 1, offset, 0.0}};
        EXPECT_NEAR(true_expectation(plan, 1, 1), std::cos(4 * offset), kTight) << offset;
        EXPECT_NEAR(true_expectation(plan, 2, 2), -1.0, kTight);
    }
    plan.errors = {ErrorInjection{1, 1, pi / 4, 0.0}};
    EXPECT_EQ(true_expectation(plan, 1, 1), -1.0);
    plan.errors = {ErrorInjection{1, 1, pi / 20, 0.0}};
    EXPECT_NEAR(true_expectation(plan, 1, 1), 0.81, 0.005);
    plan.errors = {ErrorInjection{1, 1, pi / 40, 0.0}};
    EXPECT_NEAR(true_expectation(plan, 1, 1), 0.95, 0.005);
}

TEST(TrueExpectation, QuarterWaveOffsetReachesOffDiagonalElements) {
    auto plan = ExperimentPlan::standard(Scheme::TwoN);
    EXPECT_NEAR(true_expectation(plan, 1, 2), 0.0, kTight);
    plan.errors = {ErrorInjection{1, 2, 0.0, pi / 4}};
    EXPECT_NEAR(true_expectation(plan, 1, 2), 1.0, kTight);
    plan.errors = {ErrorInjection{1, 3, pi / 8, pi / 4}};
    EXPECT_NEAR(true_expectation(plan, 1, 3), -1.0, kTight);
    // A detector HWP offset alone cannot move S_1^2.
    plan.errors = {ErrorInjection{1, 2, 0.3, 0.0}};
    EXPECT_NEAR(true_expectation(plan, 1, 2), 0.0, kTight);
}

TEST(TrueExpectation, Bounds) {
    const auto plan = ExperimentPlan::standard(Scheme::NPlusOne);
    expect_code([&] { true_expectation(plan, 0, 1); }, ErrorCode::Bounds);
    expect_code([&] { true_expectation(plan, 5, 1); }, ErrorCode::Bounds);
    expect_code([&] { true_expectation(plan, 1, 5); }, ErrorCode::Bounds);
}

TEST(SampleExpectation, ExtremesAreExact) {
    NoiseModel noise;
    Rng rng = repetition_rng(1, 0);
    for (std::uint64_t shots : {1ULL, 7ULL, 10000ULL}) {
        noise.shots_per_setting = shots;
        EXPECT_EQ(sample_expectation(1.0, noise, rng), 1.0);
        EXPECT_EQ(sample_expectation(-1.0, noise, rng), -1.0);
    }
}

TEST(SampleExpectation, BinomialMoments) {
    NoiseModel noise;
    noise.shots_per_setting = 10000;
    Rng rng = repetition_rng(5, 0);
    const int n = 1000;
    double sum = 0.0, sq = 0.0;
    for (int k = 0; k < n; ++k) {
        const double x = sample_expectation(0.0, noise, rng);
        sum += x;
        sq += x * x;
    }
    const double mean = sum / n;
    const double sd = std::sqrt((sq - n * mean * mean) / (n - 1));
    EXPECT_LT(std::abs(mean), 3.0 * 0.01);
    EXPECT_NEAR(sd, 0.01, 0.001);
}

TEST(SampleExpectation, AnalyticPassesThrough) {
    Rng rng = repetition_rng(0, 0);
    EXPECT_EQ(sample_expectation(0.123, NoiseModel::analytic(), rng), 0.123);
}

TEST(RunExperiment, AnalyticMatchesFactorization) {
    auto plan = ExperimentPlan::standard(Scheme::TwoN);
    plan.noise = NoiseModel::analytic();
    plan.repetitions = 2;
    const auto out = run_experiment(plan);
    ASSERT_EQ(out.size(), 2u);
    const auto states = theoretical_states(plan);
    const auto obs = theoretical_observables(plan);
    for (int a = 0; a < 6; ++a) {
        for (int i = 0; i < 6; ++i) {
            EXPECT_NEAR(out[0](a, i), states[a].vec().dot(obs[i].vec()), kTight);
        }
    }
    EXPECT_NEAR(out[0](0, 0), 1.0, kTight);
    EXPECT_NEAR(out[0](1, 1), -1.0, kTight);
    EXPECT_EQ(out[0], out[1]);
}

TEST(RunExperiment, SeedDeterminism) {
    auto plan = ExperimentPlan::standard(Scheme::NPlusOne, SourceState::Mixed);
    plan.noise.seed = 42;
    EXPECT_EQ(run_experiment(plan), run_experiment(plan));
    auto other = plan;
    other.noise.seed = 43;
    EXPECT_NE(run_experiment(plan), run_experiment(other));
}

TEST(RunExperiment, ShotNoiseOnlySpreadIsBinomial) {
    auto plan = ExperimentPlan::standard(Scheme::TwoN);
    plan.noise.angle_jitter_sigma = 0.0;
    plan.noise.seed = 3;
    const auto out = run_experiment(plan);
    ASSERT_EQ(out.size(), 10u);
    for (int a = 0; a < 6; ++a) {
        for (int i = 0; i < 6; ++i) {
            double sum = 0.0, sq = 0.0;
            for (const auto &m : out) {
                sum += m(a, i);
                sq += m(a, i) * m(a, i);
            }
            const double mean = sum / 10.0;
            const double sd = std::sqrt(std::max(0.0, (sq - 10.0 * mean * mean) / 9.0));
            EXPECT_LE(sd, 0.02) << a << "," << i;
        }
    }
}

TEST(ExperimentPlan, ValidationNamesField) {
    auto plan = ExperimentPlan::standard(Scheme::TwoN);
    plan.prep_settings.pop_back();
    expect_code([&] { plan.validate(); }, ErrorCode::Configuration);
    plan = ExperimentPlan::standard(Scheme::NPlusOne);
    plan.noise.shots_per_setting = 0;
    expect_code([&] { plan.validate(); }, ErrorCode::Configuration);
    plan = ExperimentPlan::standard(Scheme::NPlusOne);
    plan.noise.angle_jitter_sigma = -1e-3;
    expect_code([&] { plan.validate(); }, ErrorCode::Configuration);
    plan = ExperimentPlan::standard(Scheme::NPlusOne);
    plan.repetitions = 0;
    expect_code([&] { plan.validate(); }, ErrorCode::Configuration);
    plan = ExperimentPlan::standard(Scheme::NPlusOne);
    plan.errors = {ErrorInjection{5, 1, 0.1, 0.0}};
    try {
        plan.validate();
        ADD_FAILURE();
    } catch (const Error &e) {
        EXPECT_NE(std::string(e.what()).find("error_injections"), std::string::npos) << e.what();
    }
}

// Properties.

TEST(OpticsProperty, PlatesAreUnitary) {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> angle(-4.0, 4.0);
    for (int k = 0; k < 100; ++k) {
        const double t = angle(rng);
        for (const auto &u : {hwp_unitary(t), qwp_unitary(t)}) {
            EXPECT_LE(max_abs(u.adjoint() * u - ComplexMatrix2::Identity()), kTight);
        }
        EXPECT_LE(max_abs(hwp_unitary(t) - hwp_unitary(t).adjoint()), kTight);
    }
}

TEST(OpticsProperty, PeriodPi) {
    std::mt19937_64 rng(22);
    std::uniform_real_distribution<double> angle(-4.0, 4.0);
    for (int k = 0; k < 100; ++k) {
        const double t = angle(rng);
        for (int p = 0; p < 3; ++p) {
            const ComplexMatrix2 s = oracles::pauli(p);
            for (auto plate : {&hwp_unitary, &qwp_unitary}) {
                const ComplexMatrix2 u = plate(t), v = plate(t + pi);
                EXPECT_LE(max_abs(u * s * u.adjoint() - v * s * v.adjoint()), kTight);
            }
        }
    }
}

TEST(OpticsProperty, PurityAndProjectivity) {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> angle(0.0, pi);
    for (int k = 0; k < 100; ++k) {
        const WavePlateSetting s{angle(rng), angle(rng)};
        EXPECT_NEAR(prepare_state(SourceState::PureH, s).purity(), 1.0, kTight);
        EXPECT_NEAR(prepare_state(SourceState::Mixed, s).purity(), 0.625, kTight);
        const Vec3 w = measurement_observable(s).vec();
        EXPECT_NEAR(w.norm(), 1.0, kTight);
        EXPECT_LE((w - observable_oracle(s.qwp, s.hwp)).norm(), kTight);
    }
}

TEST(OpticsProperty, NoiselessFactorization) {
    for (auto scheme : {Scheme::TwoN, Scheme::NPlusOne}) {
        for (auto source : {SourceState::PureH, SourceState::Mixed}) {
            auto plan = ExperimentPlan::standard(scheme, source);
            plan.noise = NoiseModel::analytic();
            const auto s = true_expectation_matrix(plan);
            const auto p = theoretical_states(plan);
            const auto w = theoretical_observables(plan);
            for (int a = 0; a < s.size(); ++a) {
                for (int i = 0; i < s.size(); ++i) {
                    EXPECT_NEAR(s(a, i), p[a].vec().dot(w[i].vec()), kTight);
                }
            }
        }
    }
}

}  // namespace
}  // namespace loopspam
