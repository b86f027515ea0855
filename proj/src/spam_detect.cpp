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

#include "loopspam/spam_detect.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>
#include <tuple>

namespace loopspam {

ExpectationMatrix embed_n_plus_1(const ExpectationMatrix &compact) {
    if (compact.shape() != ExpectationMatrix::Shape::Compact4) {
        throw Error(ErrorCode::Shape, "n+1 embedding expects a 4x4 matrix");
    }
    // Output index k draws from input index source[k].
    static constexpr int source[6] = {0, 1, 2, 3, 1, 2};
    Eigen::MatrixXd out(6, 6);
    for (int r = 0; r < 6; ++r) {
        for (int c = 0; c < 6; ++c) {
            out(r, c) = compact(source[r], source[c]);
        }
    }
    return ExpectationMatrix(std::move(out));
}

std::optional<Eigen::Matrix3d> invert3(const Eigen::Matrix3d &m, double rel_cutoff) {
    Eigen::Matrix3d adj;
    adj(0, 0) = m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1);
    adj(0, 1) = m(0, 2) * m(2, 1) - m(0, 1) * m(2, 2);
    adj(0, 2) = m(0, 1) * m(1, 2) - m(0, 2) * m(1, 1);
    adj(1, 0) = m(1, 2) * m(2, 0) - m(1, 0) * m(2, 2);
    adj(1, 1) = m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0);
    adj(1, 2) = m(0, 2) * m(1, 0) - m(0, 0) * m(1, 2);
    adj(2, 0) = m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0);
    adj(2, 1) = m(0, 1) * m(2, 0) - m(0, 0) * m(2, 1);
    adj(2, 2) = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    const double det = m(0, 0) * adj(0, 0) + m(0, 1) * adj(1, 0) + m(0, 2) * adj(2, 0);
    const double scale = m.norm();
    if (!std::isfinite(det) || !(std::abs(det) > rel_cutoff * scale * scale * scale)) {
        return std::nullopt;
    }
    return Eigen::Matrix3d(adj / det);
}

PartialDeterminant partial_determinant(const ExpectationMatrix &s, double rel_cutoff) {
    if (s.shape() != ExpectationMatrix::Shape::Full6) {
        throw Error(ErrorCode::Shape, "partial determinant needs a 6x6 matrix; embed n+1 data first");
    }
    const auto a_inv = invert3(s.corner_a(), rel_cutoff);
    if (!a_inv) {
        throw Error(ErrorCode::SingularCorner, "corner A is singular (degenerate choice of settings)");
    }
    const auto d_inv = invert3(s.corner_d(), rel_cutoff);
    if (!d_inv) {
        throw Error(ErrorCode::SingularCorner, "corner D is singular (degenerate choice of settings)");
    }
    return {*a_inv * s.corner_b() * *d_inv * s.corner_c()};
}

DeltaStats delta_statistics(std::span<const ExpectationMatrix> samples) {
    if (samples.size() < 2) {
        throw Error(ErrorCode::Shape, "delta statistics need at least two samples");
    }
    std::vector<Eigen::Matrix3d> deviations;
    deviations.reserve(samples.size());
    for (std::size_t k = 0; k < samples.size(); ++k) {
        try {
            deviations.push_back(partial_determinant(samples[k]).deviation());
        } catch (const Error &e) {
            throw Error(e.code(), "sample " + std::to_string(k + 1) + ": " + e.what());
        }
    }

    const double n = static_cast<double>(deviations.size());
    DeltaStats stats;
    stats.repetitions = static_cast<int>(deviations.size());
    Eigen::Matrix3d sum = Eigen::Matrix3d::Zero();
    for (const auto &d : deviations) {
        sum += d;
    }
    stats.mean = sum / n;
    Eigen::Matrix3d sq = Eigen::Matrix3d::Zero();
    for (const auto &d : deviations) {
        sq += (d - stats.mean).cwiseAbs2();
    }
    stats.std = (sq / (n - 1.0)).cwiseSqrt();
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) {
            const double m = std::abs(stats.mean(r, c));
            const double sd = stats.std(r, c);
            if (sd > 0.0) {
                stats.significance(r, c) = m / sd;
            } else {
                stats.significance(r, c) = m > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
            }
        }
    }
    return stats;
}

bool DetectionReport::contains_candidate(int prep, int setting) const {
    return std::any_of(candidates.begin(), candidates.end(),
                       [&](const CandidateLocation &c) { return c.prep == prep && c.setting == setting; });
}

DetectionReport detect(const DeltaStats &stats, double threshold) {
    if (!(threshold > 0.0)) {
        throw Error(ErrorCode::Configuration, "detection threshold must be positive");
    }
    DetectionReport report;
    report.threshold = threshold;
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) {
            const double sig = stats.significance(r, c);
            if (sig > threshold) {
                report.flagged.push_back({r + 1, c + 1, sig});
            }
        }
    }
    report.detected = !report.flagged.empty();
    report.summary = report.detected ? "correlated SPAM error detected" : "no correlated SPAM error detected";
    return report;
}

DetectionReport localize(DetectionReport report, Scheme scheme) {
    report.scheme = scheme;
    report.localized = true;
    report.candidates.clear();
    report.location_indeterminate = false;
    if (!report.detected) {
        report.summary = "no correlated SPAM error detected";
        return report;
    }

    if (scheme == Scheme::TwoN) {
        std::set<int> rows;
        std::set<int> cols;
        for (const auto &f : report.flagged) {
            rows.insert(f.row);
            cols.insert(f.col);
        }
        std::set<std::pair<int, int>> seen;
        for (int r : rows) {
            for (int c : cols) {
                for (int a : {r, r + 3}) {
                    for (int i : {c, c + 3}) {
                        if (seen.insert({a, i}).second) {
                            std::ostringstream note;
                            note << "partial-determinant row " << r << " / column " << c
                                 << "; corner not identifiable";
                            report.candidates.push_back({a, i, note.str()});
                        }
                    }
                }
            }
        }
        std::sort(report.candidates.begin(), report.candidates.end(), [](const auto &x, const auto &y) {
            return std::tie(x.prep, x.setting) < std::tie(y.prep, y.setting);
        });
        report.summary = "correlated SPAM error detected; " + std::to_string(report.candidates.size()) +
                         " candidate (preparation, setting) pairs";
        return report;
    }

    bool outside_first = false;
    for (const auto &f : report.flagged) {
        if (f.row != 1 && f.col != 1) {
            outside_first = true;
            report.candidates.push_back({f.row, f.col, "flagged element of the embedded partial determinant"});
        }
    }
    if (!outside_first) {
        report.location_indeterminate = true;
        report.summary = "error present, location indeterminate (n+1 flags confined to row 1 / column 1)";
    } else {
        report.summary =
            "correlated SPAM error detected; row 1 / column 1 flags are duplication artifacts of the n+1 embedding";
    }
    return report;
}

}  // namespace loopspam
