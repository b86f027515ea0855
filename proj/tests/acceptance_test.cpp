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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include "loopspam/config.hpp"
#include "loopspam/optics.hpp"
#include "loopspam/runner.hpp"
#include "loopspam/spam_detect.hpp"
#include "loopspam/tomography.hpp"
#include "oracles.hpp"

namespace {

using namespace loopspam;
using std::numbers::pi;
namespace fs = std::filesystem;

constexpr int kSeeds = 100;

struct Outcome {
    bool pass = false;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char *f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

const char *source_label(SourceState s) {
    return s == SourceState::PureH ? "H" : "M";
}

ExperimentPlan plan_for(Scheme scheme, SourceState source, std::uint64_t seed, std::vector<ErrorInjection> errors = {}) {
    auto plan = ExperimentPlan::standard(scheme, source);
    plan.noise.seed = seed;
    plan.errors = std::move(errors);
    return plan;
}

DeltaStats stats_of(const ExperimentPlan &plan) {
    auto samples = run_experiment(plan);
    if (plan.scheme == Scheme::NPlusOne) {
        for (auto &s : samples) {
            s = embed_n_plus_1(s);
        }
    }
    return delta_statistics(samples);
}

RunReport run_plan(const ExperimentPlan &plan, RunMode mode) {
    RunConfig cfg;
    cfg.plan = plan;
    cfg.mode = mode;
    cfg.has_simulation_parameters = true;
    return run(cfg);
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const auto n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Criterion 1: consistency theorem on random factorizations.
Outcome consistency_theorem() {
    std::mt19937_64 rng(20260101);
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    for (int k = 0; k < 10000; ++k) {
        Eigen::MatrixXd p(6, 3), w(3, 6);
        for (int j = 0; j < 6; ++j) {
            p.row(j) = oracles::random_in_ball(rng).transpose();
            w.col(j) = oracles::random_on_sphere(rng);
        }
        const auto pd = partial_determinant(ExpectationMatrix(p * w));
        worst = std::max(worst, pd.deviation().cwiseAbs().maxCoeff());
    }
    const double t = seconds_since(t0);
    return {worst < 1e-9 && t < 10.0,
            "10^4 factorizations, max|Delta-1| = " + fmt("%.2e", worst) + ", " + fmt("%.2f", t) + " s"};
}

// Criterion 2: null experiment.
Outcome null_experiment() {
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::string detail;
    for (auto scheme : {Scheme::TwoN, Scheme::NPlusOne}) {
        for (auto source : {SourceState::PureH, SourceState::Mixed}) {
            int clean = 0;
            for (int seed = 0; seed < kSeeds; ++seed) {
                clean += stats_of(plan_for(scheme, source, seed)).significance.maxCoeff() < 3.0 ? 1 : 0;
            }
            ok = ok && clean >= 95;
            detail += std::string(scheme_name(scheme)) + "/" + source_label(source) + " " + std::to_string(clean) +
                      "/100; ";
        }
    }
    const double t = seconds_since(t0);
    return {ok && t < 60.0, detail + fmt("%.2f", t) + " s"};
}

// Criterion 3: pi/4 injection.
Outcome large_error() {
    bool ok = true;
    std::string detail;
    for (auto scheme : {Scheme::NPlusOne, Scheme::TwoN}) {
        const std::vector<ErrorInjection> err{{1, 1, pi / 4, 0.0}};
        const double s11 = true_expectation(plan_for(scheme, SourceState::PureH, 0, err), 1, 1);
        int hits = 0;
        std::vector<double> sig;
        for (int seed = 0; seed < kSeeds; ++seed) {
            const auto st = stats_of(plan_for(scheme, SourceState::PureH, seed, err));
            sig.push_back(st.significance.maxCoeff());
            hits += sig.back() >= 10.0 ? 1 : 0;
        }
        ok = ok && s11 == -1.0 && hits >= 99;
        detail += std::string(scheme_name(scheme)) + ": S11 = " + fmt("%.17g", s11) + ", >=10 sigma in " +
                  std::to_string(hits) + "/100 (median " + fmt("%.1f", median(sig)) + "); ";
    }
    return {ok, detail};
}

// Criterion 4: pi/20 injection.
Outcome medium_error() {
    bool ok = true;
    std::string detail;
    for (auto scheme : {Scheme::NPlusOne, Scheme::TwoN}) {
        const std::vector<ErrorInjection> err{{1, 1, pi / 20, 0.0}};
        const double s11 = true_expectation(plan_for(scheme, SourceState::PureH, 0, err), 1, 1);
        std::vector<double> sig, sd;
        for (int seed = 0; seed < kSeeds; ++seed) {
            const auto plan = plan_for(scheme, SourceState::PureH, seed, err);
            const auto samples = run_experiment(plan);
            double sum = 0.0, sq = 0.0;
            for (const auto &s : samples) {
                sum += s(0, 0);
                sq += s(0, 0) * s(0, 0);
            }
            const double n = static_cast<double>(samples.size());
            sd.push_back(std::sqrt(std::max(0.0, (sq - sum * sum / n) / (n - 1))));
            sig.push_back(stats_of(plan).significance(0, 0));
        }
        const double med = median(sig);
        const double med_sd = median(sd);
        ok = ok && std::abs(s11 - std::cos(pi / 5)) < 1e-12 && med >= 2.0 && med <= 8.0 && med_sd > 0.03 &&
             med_sd < 0.05;
        detail += std::string(scheme_name(scheme)) + ": S11 = " + fmt("%.4f", s11) + ", median std(S11) = " +
                  fmt("%.3f", med_sd) + ", median significance " + fmt("%.2f", med) + "; ";
    }
    return {ok, detail};
}

// Criterion 5: pi/40 injection stays below threshold.
Outcome small_error() {
    bool ok = true;
    std::string detail;
    for (auto scheme : {Scheme::NPlusOne, Scheme::TwoN}) {
        const std::vector<ErrorInjection> err{{1, 1, pi / 40, 0.0}};
        const double s11 = true_expectation(plan_for(scheme, SourceState::PureH, 0, err), 1, 1);
        int quiet = 0;
        for (int seed = 0; seed < kSeeds; ++seed) {
            quiet += stats_of(plan_for(scheme, SourceState::PureH, seed, err)).significance.maxCoeff() < 3.0 ? 1 : 0;
        }
        ok = ok && std::abs(s11 - std::cos(pi / 10)) < 1e-12 && quiet >= 90;
        detail += std::string(scheme_name(scheme)) + ": S11 = " + fmt("%.4f", s11) + ", undetected in " +
                  std::to_string(quiet) + "/100; ";
    }
    return {ok, detail};
}

// Criterion 6: flagged set of noisy runs equals the analytic support.
Outcome localization() {
    struct Case {
        const char *name;
        Scheme scheme;
        ErrorInjection error;
    };
    const Case cases[] = {
        {"S11/2n", Scheme::TwoN, {1, 1, pi / 4, 0.0}},
        {"S22/2n", Scheme::TwoN, {2, 2, pi / 4, 0.0}},
        {"S22/n+1", Scheme::NPlusOne, {2, 2, pi / 4, 0.0}},
        {"S12/n+1", Scheme::NPlusOne, {1, 2, 0.0, pi / 4}},
        {"S13/n+1", Scheme::NPlusOne, {1, 3, pi / 8, pi / 4}},
    };
    bool ok = true;
    std::string detail;
    for (const auto &c : cases) {
        auto exact = plan_for(c.scheme, SourceState::PureH, 0, {c.error});
        exact.noise = NoiseModel::analytic();
        exact.repetitions = 2;
        const Eigen::Matrix3d dev = stats_of(exact).mean;
        std::set<std::pair<int, int>> support;
        for (int r = 0; r < 3; ++r) {
            for (int col = 0; col < 3; ++col) {
                if (std::abs(dev(r, col)) > 1e-6) {
                    support.insert({r + 1, col + 1});
                }
            }
        }
        int match = 0;
        for (int seed = 0; seed < kSeeds; ++seed) {
            const auto rep = detect(stats_of(plan_for(c.scheme, SourceState::PureH, seed, {c.error})));
            std::set<std::pair<int, int>> flagged;
            for (const auto &f : rep.flagged) {
                flagged.insert({f.row, f.col});
            }
            match += flagged == support ? 1 : 0;
        }
        std::string pattern;
        for (const auto &[r, col] : support) {
            pattern += "(" + std::to_string(r) + "," + std::to_string(col) + ")";
        }
        ok = ok && match >= 90;
        detail += std::string(c.name) + " " + pattern + " " + std::to_string(match) + "/100; ";
    }
    return {ok, detail};
}

// Criterion 7: reconstruction quality.
Outcome reconstruction_quality() {
    bool ok = true;
    std::string detail;
    for (auto scheme : {Scheme::NPlusOne, Scheme::TwoN}) {
        const bool compact = scheme == Scheme::NPlusOne;
        const double fid_bound = compact ? 0.99 : 0.97;
        const double re_bound = compact ? 0.023 : 0.060;
        for (auto source : {SourceState::PureH, SourceState::Mixed}) {
            int good = 0;
            double worst_fid = 1.0, worst_re = 0.0;
            for (int seed = 0; seed < kSeeds; ++seed) {
                const auto rep = run_plan(plan_for(scheme, source, seed), RunMode::Reconstruct);
                if (!rep.reconstruction || !rep.reconstruction->score) {
                    continue;
                }
                const auto &score = *rep.reconstruction->score;
                worst_fid = std::min(worst_fid, score.min_state_fidelity());
                worst_re = std::max(worst_re, score.max_relative_error());
                good += score.min_state_fidelity() > fid_bound && score.max_relative_error() < re_bound ? 1 : 0;
            }
            ok = ok && good >= 90;
            detail += std::string(scheme_name(scheme)) + "/" + source_label(source) + " " + std::to_string(good) +
                      "/100 (worst F " + fmt("%.4f", worst_fid) + ", worst RE " + fmt("%.4f", worst_re) + "); ";
        }
    }
    return {ok, detail};
}

// Criterion 8: noiseless loop bootstrap.
Outcome noiseless_loop() {
    double worst = 0.0, residual = 0.0;
    for (auto source : {SourceState::PureH, SourceState::Mixed}) {
        auto plan = ExperimentPlan::standard(Scheme::TwoN, source);
        plan.noise = NoiseModel::analytic();
        const auto states = theoretical_states(plan);
        const auto obs = theoretical_observables(plan);
        const auto loop =
            loop_bootstrap(true_expectation_matrix(plan), MeasMatrix::from_observables({obs[0], obs[1], obs[2]}));
        residual = std::max(residual, loop.consistency_residual);
        for (int k = 0; k < 6; ++k) {
            worst = std::max(worst, (loop.states.rows[k].vec() - states[k].vec()).cwiseAbs().maxCoeff());
            worst = std::max(worst, (loop.observables.cols[k].vec() - obs[k].vec()).cwiseAbs().maxCoeff());
        }
    }
    return {worst < 1e-9 && residual < 1e-9,
            "6 states + 6 POVMs, max error " + fmt("%.2e", worst) + ", residual " + fmt("%.2e", residual)};
}

// Criterion 9: two simultaneous errors with 2n settings.
Outcome multi_error() {
    int both = 0;
    for (int seed = 0; seed < kSeeds; ++seed) {
        auto plan = plan_for(Scheme::TwoN, SourceState::PureH, seed, {{1, 1, pi / 4, 0.0}, {2, 2, pi / 4, 0.0}});
        plan.noise.angle_jitter_sigma = 0.0;
        const auto rep = run_plan(plan, RunMode::Analyze);
        both += rep.detection && rep.detection->contains_candidate(1, 1) && rep.detection->contains_candidate(2, 2)
                    ? 1
                    : 0;
    }
    return {both >= 90, "(1,1) and (2,2) both candidates in " + std::to_string(both) + "/100"};
}

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

// Criterion 10: byte-identical reports through the CLI.
Outcome determinism() {
    const fs::path dir = fs::temp_directory_path() / ("loopspam_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    const std::vector<std::pair<std::string, std::string>> configs{
        {"null_n1", "scheme: n_plus_1\nseed: 1\n"},
        {"mixed_2n", "scheme: 2n\nstate: mixed\nseed: 12345678901\n"},
        {"err_2n", "scheme: 2n\nseed: 9\nerror_injections: [{prep: 1, setting: 1, hwp_offset: pi/20}]\n"},
        {"recon", "mode: reconstruct\nscheme: n_plus_1\nstate: mixed\nseed: 4\n"},
    };
    bool ok = true;
    int compared = 0;
    for (const auto &[name, text] : configs) {
        const fs::path cfg = dir / (name + ".yaml");
        std::ofstream(cfg) << text;
        const fs::path out = dir / name;
        std::string reports[2];
        for (auto &r : reports) {
            const std::string cmd =
                std::string(LOOPSPAM_CLI_PATH) + " full --config " + cfg.string() + " --out " + out.string() + " 2>/dev/null";
            const int status = std::system(cmd.c_str());
            if (!WIFEXITED(status) || WEXITSTATUS(status) == 1) {
                ok = false;
            }
            r = slurp(out / "report.json") + slurp(out / "plot_data.csv") + slurp(out / "measurements.csv");
        }
        ok = ok && !reports[0].empty() && reports[0] == reports[1];
        ++compared;
    }
    std::error_code ec;
    fs::remove_all(dir, ec);
    return {ok, std::to_string(compared) + " configs run twice, report/plot/measurement files identical"};
}

}  // namespace

int main() {
    const std::pair<const char *, std::function<Outcome()>> criteria[] = {
        {"consistency theorem", consistency_theorem},
        {"null experiment", null_experiment},
        {"large-error detection", large_error},
        {"medium-error detection", medium_error},
        {"small-error non-detection", small_error},
        {"localization patterns", localization},
        {"reconstruction quality", reconstruction_quality},
        {"loop bootstrap", noiseless_loop},
        {"multi-error candidates", multi_error},
        {"determinism", determinism},
    };
    int failures = 0;
    int index = 1;
    for (const auto &[name, check] : criteria) {
        Outcome o;
        try {
            o = check();
        } catch (const std::exception &e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        while (o.detail.size() >= 2 && o.detail.compare(o.detail.size() - 2, 2, "; ") == 0) {
            o.detail.resize(o.detail.size() - 2);
        }
        std::printf("%s criterion %d (%s): %s\n", o.pass ? "PASS" : "FAIL", index, name, o.detail.c_str());
        std::fflush(stdout);
        failures += o.pass ? 0 : 1;
        ++index;
    }
    std::printf("%d/%zu criteria passed\n", index - 1 - failures, std::size(criteria));
    return failures == 0 ? 0 : 1;
}
