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

// loopspam: detect correlated preparation/measurement errors in single-qubit
// polarization experiments and reconstruct states and detectors.
//
//   loopspam full --config run.yaml --out results/
//   loopspam analyze --data counts.csv --scheme n+1
//
// Exit status: 0 no correlation, 2 correlation detected, 1 error.

#include <chrono>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "loopspam/config.hpp"
#include "loopspam/error.hpp"
#include "loopspam/runner.hpp"

namespace {

struct Options {
    std::string config;
    std::string data;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<double> threshold;
    std::string scheme;
};

void add_common_flags(CLI::App *cmd, Options &opts) {
    cmd->add_option("--config", opts.config, "YAML/JSON run configuration")->check(CLI::ExistingFile);
    cmd->add_option("--data", opts.data, "measurement file to analyze instead of simulating")->check(CLI::ExistingFile);
    cmd->add_option("--out", opts.out, "output directory; report goes to stdout when omitted");
    cmd->add_option("--seed", opts.seed, "simulation seed");
    cmd->add_option("--threshold", opts.threshold, "detection threshold in standard deviations");
    cmd->add_option("--scheme", opts.scheme, "2n or n+1");
}

loopspam::RunConfig build_config(const Options &opts, loopspam::RunMode mode) {
    using namespace loopspam;
    RunConfig config;
    if (!opts.config.empty()) {
        config = load_config(opts.config);
    } else {
        config.plan = ExperimentPlan::standard(Scheme::NPlusOne);
        config.has_simulation_parameters = opts.data.empty() || !opts.scheme.empty();
    }
    config.mode = mode;
    if (!opts.scheme.empty()) {
        const Scheme scheme = parse_scheme(opts.scheme);
        if (scheme != config.plan.scheme) {
            config.plan.scheme = scheme;
            config.plan.prep_settings = standard_settings(scheme);
            config.plan.meas_settings = standard_settings(scheme);
        }
        config.has_simulation_parameters = true;
    }
    if (!opts.data.empty()) {
        config.input_data_path = opts.data;
    }
    if (opts.seed) {
        config.plan.noise.seed = *opts.seed;
    }
    if (opts.threshold) {
        config.detection_threshold = *opts.threshold;
    }
    if (!opts.out.empty()) {
        config.output_dir = opts.out;
    }
    return config;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Correlated SPAM error detection and loop tomography for polarization qubits"};
    app.require_subcommand(1);
    Options opts;
    const std::pair<const char *, loopspam::RunMode> commands[] = {
        {"simulate", loopspam::RunMode::Simulate},
        {"analyze", loopspam::RunMode::Analyze},
        {"reconstruct", loopspam::RunMode::Reconstruct},
        {"full", loopspam::RunMode::Full},
    };
    const char *descriptions[] = {
        "generate per-repetition expectation matrices",
        "partial-determinant statistics, detection and localization",
        "loop bootstrap of states and detector settings",
        "analyze, then reconstruct when no correlation is found",
    };
    std::vector<CLI::App *> subs;
    for (std::size_t k = 0; k < std::size(commands); ++k) {
        subs.push_back(app.add_subcommand(commands[k].first, descriptions[k]));
        add_common_flags(subs.back(), opts);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : loopspam::kExitError;
    }

    loopspam::RunMode mode = loopspam::RunMode::Full;
    for (std::size_t k = 0; k < subs.size(); ++k) {
        if (subs[k]->parsed()) {
            mode = commands[k].second;
        }
    }

    const auto start = std::chrono::steady_clock::now();
    loopspam::RunConfig config;
    try {
        config = build_config(opts, mode);
    } catch (const loopspam::Error &e) {
        std::cerr << "loopspam: " << e.what() << "\n";
        return loopspam::kExitError;
    }

    const loopspam::RunReport report = loopspam::run(config);
    int status = report.exit_code;
    try {
        if (config.output_dir.empty()) {
            std::cout << loopspam::serialize_report(report);
        } else {
            loopspam::write_outputs(report, config.output_dir);
        }
    } catch (const loopspam::Error &e) {
        std::cerr << "loopspam: " << e.what() << "\n";
        status = loopspam::kExitError;
    }

    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (report.error) {
        std::cerr << "loopspam: " << report.error->code << ": " << report.error->message << "\n";
    } else if (report.detection) {
        std::cerr << "loopspam: " << report.detection->summary << "\n";
    }
    std::cerr << "loopspam: elapsed " << elapsed << " s\n";
    return status;
}
