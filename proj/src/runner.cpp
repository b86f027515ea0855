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

#include "loopspam/runner.hpp"

#include <fstream>

#include "loopspam/measurements_io.hpp"
#include "loopspam/optics.hpp"
#include "loopspam/spam_detect.hpp"
#include "loopspam/tomography.hpp"

namespace loopspam {

namespace {

std::vector<ExpectationMatrix> acquire_samples(const RunConfig &config, RunReport &report) {
    if (config.input_data_path) {
        MeasurementSet set = load_measurements(*config.input_data_path);
        if (set.scheme != config.plan.scheme) {
            throw Error(ErrorCode::Configuration,
                        "scheme: config says " + std::string(scheme_name(config.plan.scheme)) + " but " +
                            config.input_data_path->string() + " holds " + std::string(scheme_name(set.scheme)));
        }
        report.data_source = config.input_data_path->string();
        return std::move(set.blocks);
    }
    config.plan.validate();
    report.data_source = "simulation";
    return run_experiment(config.plan);
}

std::vector<ExpectationMatrix> full_samples(const std::vector<ExpectationMatrix> &samples, Scheme scheme) {
    if (scheme == Scheme::TwoN) {
        return samples;
    }
    std::vector<ExpectationMatrix> out;
    out.reserve(samples.size());
    for (const auto &s : samples) {
        out.push_back(embed_n_plus_1(s));
    }
    return out;
}

ExpectationMatrix mean_matrix(const std::vector<ExpectationMatrix> &samples) {
    if (samples.empty()) {
        throw Error(ErrorCode::Shape, "no samples to reconstruct from");
    }
    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(samples.front().size(), samples.front().size());
    for (const auto &s : samples) {
        sum += s.values();
    }
    return ExpectationMatrix(sum / static_cast<double>(samples.size()));
}

ReconstructionOutputs reconstruct(const RunConfig &config, const std::vector<ExpectationMatrix> &full,
                                  bool score_against_plan) {
    const ExpectationMatrix mean = mean_matrix(full);
    std::vector<ObservableVector> known;
    if (config.known_povms) {
        known = *config.known_povms;
    } else {
        // Without supplied detector calibration the nominal settings 1-3 stand in.
        const auto nominal = theoretical_observables(config.plan);
        known.assign(nominal.begin(), nominal.begin() + 3);
    }
    const LoopResult loop = loop_bootstrap(mean, MeasMatrix::from_observables(known));

    // n+1 rows/columns 5 and 6 duplicate 2 and 3 after embedding.
    const auto n = static_cast<std::size_t>(scheme_dimension(config.plan.scheme));
    ReconstructionOutputs out;
    out.states.rows.assign(loop.states.rows.begin(), loop.states.rows.begin() + n);
    out.states.renormalized.assign(loop.states.renormalized.begin(), loop.states.renormalized.begin() + n);
    out.povms.cols.assign(loop.observables.cols.begin(), loop.observables.cols.begin() + n);
    out.povms.renormalized.assign(loop.observables.renormalized.begin(), loop.observables.renormalized.begin() + n);
    out.consistency_residual = loop.consistency_residual;

    if (score_against_plan) {
        const auto states = theoretical_states(config.plan);
        const auto povms = theoretical_observables(config.plan);
        out.score = score_reconstruction(out.states, states, out.povms, povms);
    }
    return out;
}

void write_text(const std::filesystem::path &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorCode::Io, "cannot write " + path.string());
    }
    out << text;
    if (!out) {
        throw Error(ErrorCode::Io, "failed writing " + path.string());
    }
}

}  // namespace

RunReport run(const RunConfig &config) {
    RunReport report;
    report.mode = config.mode;
    report.scheme = config.plan.scheme;
    report.seed = config.plan.noise.seed;
    try {
        report.config_echo = config_to_json_text(config);
        config.validate();
        report.samples = acquire_samples(config, report);
        if (config.mode == RunMode::Simulate) {
            return report;
        }

        const auto full = full_samples(report.samples, config.plan.scheme);
        const bool analyze = config.mode == RunMode::Analyze || config.mode == RunMode::Full;
        if (analyze) {
            report.stats = delta_statistics(full);
            report.detection = localize(detect(*report.stats, config.detection_threshold), config.plan.scheme);
            if (report.detection->detected) {
                report.exit_code = kExitCorrelationDetected;
            }
        }

        // Reconstruction presumes an uncorrelated S; in full mode skip it once
        // a correlation is flagged.
        const bool wants_reconstruction =
            config.mode == RunMode::Reconstruct || (config.mode == RunMode::Full && !report.detection->detected);
        if (wants_reconstruction) {
            const bool score = !config.input_data_path || config.has_simulation_parameters;
            report.reconstruction = reconstruct(config, full, score);
        }
    } catch (const Error &e) {
        report.error = RunError{std::string(error_code_name(e.code())), e.what()};
        report.exit_code = kExitError;
    }
    return report;
}

void write_outputs(const RunReport &report, const std::filesystem::path &dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw Error(ErrorCode::Io, "cannot create output directory " + dir.string() + ": " + ec.message());
    }
    write_text(dir / "report.json", serialize_report(report));
    if (!report.samples.empty()) {
        write_measurements(dir / "measurements.csv", MeasurementSet{report.scheme, report.samples});
    }
    if (report.stats) {
        emit_plot_data(report, dir / "plot_data.csv");
    }
}

}  // namespace loopspam
