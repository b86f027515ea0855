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

#include "loopspam/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace loopspam {

namespace {

using nlohmann::ordered_json;

// JSON has no infinity; significance uses "inf" for a zero-variance nonzero mean.
ordered_json number(double v) {
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    return v;
}

double number_from(const ordered_json &j) {
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf") {
            return std::numeric_limits<double>::infinity();
        }
        if (s == "-inf") {
            return -std::numeric_limits<double>::infinity();
        }
        throw Error(ErrorCode::Parse, "report: unexpected string '" + s + "' where a number belongs");
    }
    return j.get<double>();
}

template <typename Matrix>
ordered_json matrix_json(const Matrix &m) {
    ordered_json rows = ordered_json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        ordered_json row = ordered_json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            row.push_back(number(m(r, c)));
        }
        rows.push_back(row);
    }
    return rows;
}

Eigen::MatrixXd matrix_from(const ordered_json &j) {
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = rows ? static_cast<Eigen::Index>(j.at(0).size()) : 0;
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        if (static_cast<Eigen::Index>(j.at(r).size()) != cols) {
            throw Error(ErrorCode::Parse, "report: ragged matrix");
        }
        for (Eigen::Index c = 0; c < cols; ++c) {
            m(r, c) = number_from(j.at(r).at(c));
        }
    }
    return m;
}

ordered_json vec_json(const Vec3 &v) {
    return ordered_json::array({v[0], v[1], v[2]});
}

Vec3 vec_from(const ordered_json &j) {
    return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()};
}

ordered_json doubles_json(const std::vector<double> &v) {
    ordered_json arr = ordered_json::array();
    for (double x : v) {
        arr.push_back(number(x));
    }
    return arr;
}

std::vector<double> doubles_from(const ordered_json &j) {
    std::vector<double> out;
    for (const auto &x : j) {
        out.push_back(number_from(x));
    }
    return out;
}

ordered_json detection_json(const DetectionReport &d) {
    ordered_json flagged = ordered_json::array();
    for (const auto &f : d.flagged) {
        flagged.push_back({{"row", f.row}, {"col", f.col}, {"significance", number(f.significance)}});
    }
    ordered_json candidates = ordered_json::array();
    for (const auto &c : d.candidates) {
        candidates.push_back({{"prep", c.prep}, {"setting", c.setting}, {"note", c.note}});
    }
    return {{"detected", d.detected},
            {"threshold", d.threshold},
            {"scheme", scheme_name(d.scheme)},
            {"localized", d.localized},
            {"location_indeterminate", d.location_indeterminate},
            {"summary", d.summary},
            {"flagged", flagged},
            {"candidates", candidates}};
}

DetectionReport detection_from(const ordered_json &j) {
    DetectionReport d;
    d.detected = j.at("detected").get<bool>();
    d.threshold = j.at("threshold").get<double>();
    d.scheme = parse_scheme(j.at("scheme").get<std::string>());
    d.localized = j.at("localized").get<bool>();
    d.location_indeterminate = j.at("location_indeterminate").get<bool>();
    d.summary = j.at("summary").get<std::string>();
    for (const auto &f : j.at("flagged")) {
        d.flagged.push_back({f.at("row").get<int>(), f.at("col").get<int>(), number_from(f.at("significance"))});
    }
    for (const auto &c : j.at("candidates")) {
        d.candidates.push_back({c.at("prep").get<int>(), c.at("setting").get<int>(), c.at("note").get<std::string>()});
    }
    return d;
}

ordered_json reconstruction_json(const ReconstructionOutputs &r) {
    ordered_json states = ordered_json::array();
    for (std::size_t a = 0; a < r.states.size(); ++a) {
        states.push_back({{"stokes", vec_json(r.states.rows[a].vec())}, {"renormalized", bool(r.states.renormalized[a])}});
    }
    ordered_json povms = ordered_json::array();
    for (std::size_t i = 0; i < r.povms.size(); ++i) {
        povms.push_back({{"observable", vec_json(r.povms.cols[i].vec())}, {"renormalized", bool(r.povms.renormalized[i])}});
    }
    ordered_json j = {{"states", states}, {"povms", povms}, {"consistency_residual", r.consistency_residual}};
    if (r.score) {
        j["score"] = {{"state_fidelities", doubles_json(r.score->state_fidelities)},
                      {"povm_fidelities", doubles_json(r.score->povm_fidelities)},
                      {"povm_relative_errors", doubles_json(r.score->povm_relative_errors)}};
    } else {
        j["score"] = nullptr;
    }
    return j;
}

ReconstructionOutputs reconstruction_from(const ordered_json &j) {
    ReconstructionOutputs r;
    for (const auto &s : j.at("states")) {
        r.states.rows.emplace_back(vec_from(s.at("stokes")));
        r.states.renormalized.push_back(s.at("renormalized").get<bool>());
    }
    for (const auto &w : j.at("povms")) {
        r.povms.cols.emplace_back(vec_from(w.at("observable")));
        r.povms.renormalized.push_back(w.at("renormalized").get<bool>());
    }
    r.consistency_residual = j.at("consistency_residual").get<double>();
    if (!j.at("score").is_null()) {
        const auto &s = j.at("score");
        ReconstructionScore score;
        score.state_fidelities = doubles_from(s.at("state_fidelities"));
        score.povm_fidelities = doubles_from(s.at("povm_fidelities"));
        score.povm_relative_errors = doubles_from(s.at("povm_relative_errors"));
        score.state_renormalized = r.states.renormalized;
        score.povm_renormalized = r.povms.renormalized;
        r.score = std::move(score);
    }
    return r;
}

std::string format_cell(double v) {
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

std::string serialize_report(const RunReport &report) {
    ordered_json j;
    j["schema"] = kReportSchema;
    j["tool_version"] = kToolVersion;
    j["mode"] = run_mode_name(report.mode);
    j["scheme"] = scheme_name(report.scheme);
    j["seed"] = report.seed;
    j["data_source"] = report.data_source;
    j["config"] = report.config_echo.empty() ? ordered_json(nullptr) : ordered_json::parse(report.config_echo);

    ordered_json samples = ordered_json::array();
    for (const auto &s : report.samples) {
        samples.push_back(matrix_json(s.values()));
    }
    j["samples"] = samples;

    if (report.stats) {
        j["delta_stats"] = {{"repetitions", report.stats->repetitions},
                            {"mean", matrix_json(report.stats->mean)},
                            {"std", matrix_json(report.stats->std)},
                            {"significance", matrix_json(report.stats->significance)}};
    } else {
        j["delta_stats"] = nullptr;
    }
    j["detection"] = report.detection ? detection_json(*report.detection) : ordered_json(nullptr);
    j["reconstruction"] = report.reconstruction ? reconstruction_json(*report.reconstruction) : ordered_json(nullptr);
    if (report.error) {
        j["error"] = {{"code", report.error->code}, {"message", report.error->message}};
    } else {
        j["error"] = nullptr;
    }
    j["exit_code"] = report.exit_code;
    return j.dump(2) + "\n";
}

RunReport deserialize_report(std::string_view text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const ordered_json::parse_error &e) {
        throw Error(ErrorCode::Parse, std::string("report: ") + e.what());
    }
    try {
        if (j.at("schema").get<std::string>() != kReportSchema) {
            throw Error(ErrorCode::Parse, "report: unsupported schema");
        }
        RunReport r;
        r.mode = parse_run_mode(j.at("mode").get<std::string>());
        r.scheme = parse_scheme(j.at("scheme").get<std::string>());
        r.seed = j.at("seed").get<std::uint64_t>();
        r.data_source = j.at("data_source").get<std::string>();
        if (!j.at("config").is_null()) {
            r.config_echo = j.at("config").dump(2);
        }
        for (const auto &s : j.at("samples")) {
            r.samples.emplace_back(matrix_from(s));
        }
        if (!j.at("delta_stats").is_null()) {
            const auto &s = j.at("delta_stats");
            DeltaStats stats;
            stats.repetitions = s.at("repetitions").get<int>();
            stats.mean = matrix_from(s.at("mean"));
            stats.std = matrix_from(s.at("std"));
            stats.significance = matrix_from(s.at("significance"));
            r.stats = stats;
        }
        if (!j.at("detection").is_null()) {
            r.detection = detection_from(j.at("detection"));
        }
        if (!j.at("reconstruction").is_null()) {
            r.reconstruction = reconstruction_from(j.at("reconstruction"));
        }
        if (!j.at("error").is_null()) {
            r.error = RunError{j.at("error").at("code").get<std::string>(), j.at("error").at("message").get<std::string>()};
        }
        r.exit_code = j.at("exit_code").get<int>();
        return r;
    } catch (const ordered_json::exception &e) {
        throw Error(ErrorCode::Parse, std::string("report: ") + e.what());
    }
}

std::string format_plot_data(const RunReport &report) {
    if (!report.stats) {
        throw Error(ErrorCode::MissingStats, "plot data needs partial-determinant statistics; run analyze or full");
    }
    const DeltaStats &s = *report.stats;
    std::ostringstream out;
    out << "# schema: " << kPlotSchema << "\n";
    out << "# tool_version: " << kToolVersion << "\n";
    out << "# scheme: " << scheme_name(report.scheme) << "\n";
    out << "# seed: " << report.seed << "\n";
    out << "# repetitions: " << s.repetitions << "\n";
    if (report.detection) {
        out << "# threshold: " << format_cell(report.detection->threshold) << "\n";
    }
    out << "# quantity: Delta(S) - 1, rows and columns 1-3\n";
    const std::pair<const char *, const Eigen::Matrix3d *> grids[] = {
        {"mean", &s.mean}, {"std", &s.std}, {"significance", &s.significance}};
    for (const auto &[name, grid] : grids) {
        out << "\n# grid: " << name << "\n";
        for (int r = 0; r < 3; ++r) {
            for (int c = 0; c < 3; ++c) {
                out << (c ? "," : "") << format_cell((*grid)(r, c));
            }
            out << "\n";
        }
    }
    return out.str();
}

void emit_plot_data(const RunReport &report, const std::filesystem::path &path) {
    const std::string text = format_plot_data(report);
    std::ofstream out(path);
    if (!out) {
        throw Error(ErrorCode::Io, "cannot write plot data to " + path.string());
    }
    out << text;
    if (!out) {
        throw Error(ErrorCode::Io, "failed writing plot data to " + path.string());
    }
}

}  // namespace loopspam
