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

#include "loopspam/tomography.hpp"

#include <algorithm>
#include <limits>

#include "loopspam/spam_detect.hpp"

namespace loopspam {

namespace {

// Scales v onto the unit sphere when |v| > 1.
Vec3 clip_to_ball(const Vec3 &v, bool &renormalized) {
    const double n = v.norm();
    renormalized = n > 1.0;
    return renormalized ? Vec3(v / n) : v;
}

Eigen::Matrix3d checked_inverse(const Eigen::Matrix3d &m, ErrorCode code, const char *what) {
    if (!m.allFinite()) {
        throw Error(code, std::string(what) + " contains non-finite entries");
    }
    const auto inv = invert3(m);
    if (!inv) {
        throw Error(code, std::string(what) + " is singular");
    }
    return *inv;
}

}  // namespace

PrepMatrix PrepMatrix::from_raw(const Eigen::MatrixXd &p) {
    if (p.cols() != 3) {
        throw Error(ErrorCode::Shape, "preparation matrix must have three columns");
    }
    PrepMatrix out;
    for (Eigen::Index a = 0; a < p.rows(); ++a) {
        bool flag = false;
        out.rows.emplace_back(clip_to_ball(p.row(a).transpose(), flag));
        out.renormalized.push_back(flag);
    }
    return out;
}

PrepMatrix PrepMatrix::from_states(std::vector<StokesVector> states) {
    PrepMatrix out;
    out.renormalized.assign(states.size(), false);
    out.rows = std::move(states);
    return out;
}

Eigen::MatrixXd PrepMatrix::matrix() const {
    Eigen::MatrixXd p(static_cast<Eigen::Index>(rows.size()), 3);
    for (std::size_t a = 0; a < rows.size(); ++a) {
        p.row(static_cast<Eigen::Index>(a)) = rows[a].vec().transpose();
    }
    return p;
}

MeasMatrix MeasMatrix::from_raw(const Eigen::MatrixXd &w) {
    if (w.rows() != 3) {
        throw Error(ErrorCode::Shape, "measurement matrix must have three rows");
    }
    MeasMatrix out;
    for (Eigen::Index i = 0; i < w.cols(); ++i) {
        bool flag = false;
        out.cols.emplace_back(clip_to_ball(w.col(i), flag));
        out.renormalized.push_back(flag);
    }
    return out;
}

MeasMatrix MeasMatrix::from_observables(std::vector<ObservableVector> observables) {
    MeasMatrix out;
    out.renormalized.assign(observables.size(), false);
    out.cols = std::move(observables);
    return out;
}

Eigen::MatrixXd MeasMatrix::matrix() const {
    Eigen::MatrixXd w(3, static_cast<Eigen::Index>(cols.size()));
    for (std::size_t i = 0; i < cols.size(); ++i) {
        w.col(static_cast<Eigen::Index>(i)) = cols[i].vec();
    }
    return w;
}

PrepMatrix qst_invert(const Eigen::MatrixXd &s, const MeasMatrix &w) {
    if (w.size() != 3 || s.cols() != 3) {
        throw Error(ErrorCode::Shape, "state tomography inverts a 3x3 block: need 3 settings and 3 data columns");
    }
    const Eigen::Matrix3d w_inv = checked_inverse(w.matrix(), ErrorCode::SingularMeasurement, "measurement block W");
    return PrepMatrix::from_raw(s * w_inv);
}

MeasMatrix qdt_invert(const Eigen::MatrixXd &s, const PrepMatrix &p) {
    if (p.size() != 3 || s.rows() != 3) {
        throw Error(ErrorCode::Shape, "detector tomography inverts a 3x3 block: need 3 preparations and 3 data rows");
    }
    const Eigen::Matrix3d p_inv = checked_inverse(p.matrix(), ErrorCode::SingularPreparation, "preparation block P");
    return MeasMatrix::from_raw(p_inv * s);
}

RawLoopResult loop_bootstrap_raw(const ExpectationMatrix &s, const Eigen::Matrix3d &known_w) {
    if (s.shape() != ExpectationMatrix::Shape::Full6) {
        throw Error(ErrorCode::Shape, "loop bootstrap needs a 6x6 matrix; embed n+1 data first");
    }
    const Eigen::Matrix3d w1_inv = checked_inverse(known_w, ErrorCode::SingularLeg, "leg A (known settings 1-3)");
    const Eigen::Matrix3d p1 = s.corner_a() * w1_inv;
    const Eigen::Matrix3d p1_inv = checked_inverse(p1, ErrorCode::SingularLeg, "leg B (states 1-3)");
    const Eigen::Matrix3d w2 = p1_inv * s.corner_b();
    const Eigen::Matrix3d w2_inv = checked_inverse(w2, ErrorCode::SingularLeg, "leg D (settings 4-6)");
    const Eigen::Matrix3d p2 = s.corner_d() * w2_inv;

    RawLoopResult out;
    out.p.resize(6, 3);
    out.p << p1, p2;
    out.w.resize(3, 6);
    out.w << known_w, w2;
    out.consistency_residual = (s.corner_c() - p2 * known_w).cwiseAbs().maxCoeff();
    return out;
}

LoopResult loop_bootstrap(const ExpectationMatrix &s, const MeasMatrix &known) {
    if (known.size() != 3) {
        throw Error(ErrorCode::Shape, "loop bootstrap needs exactly three known settings");
    }
    const RawLoopResult raw = loop_bootstrap_raw(s, known.matrix());
    LoopResult out;
    out.states = PrepMatrix::from_raw(raw.p);
    out.observables = MeasMatrix::from_raw(raw.w.rightCols(3));
    out.observables.cols.insert(out.observables.cols.begin(), known.cols.begin(), known.cols.end());
    out.observables.renormalized.insert(out.observables.renormalized.begin(), known.renormalized.begin(),
                                        known.renormalized.end());
    out.consistency_residual = raw.consistency_residual;
    return out;
}

double ReconstructionScore::min_state_fidelity() const {
    return state_fidelities.empty() ? 1.0 : *std::min_element(state_fidelities.begin(), state_fidelities.end());
}

double ReconstructionScore::min_povm_fidelity() const {
    return povm_fidelities.empty() ? 1.0 : *std::min_element(povm_fidelities.begin(), povm_fidelities.end());
}

double ReconstructionScore::max_relative_error() const {
    return povm_relative_errors.empty()
               ? 0.0
               : *std::max_element(povm_relative_errors.begin(), povm_relative_errors.end());
}

ReconstructionScore score_reconstruction(const PrepMatrix &rec_states, std::span<const StokesVector> true_states,
                                         const MeasMatrix &rec_povms,
                                         std::span<const ObservableVector> true_povms) {
    if (rec_states.size() != true_states.size() || rec_povms.size() != true_povms.size()) {
        throw Error(ErrorCode::Shape, "reconstructed and theoretical lists differ in length");
    }
    ReconstructionScore score;
    for (std::size_t a = 0; a < true_states.size(); ++a) {
        score.state_fidelities.push_back(
            fidelity(density_from_stokes(rec_states.rows[a]), density_from_stokes(true_states[a])));
    }
    for (std::size_t i = 0; i < true_povms.size(); ++i) {
        const ComplexMatrix2 e_rec = povm_from_observable(rec_povms.cols[i]).e;
        const ComplexMatrix2 e_th = povm_from_observable(true_povms[i]).e;
        score.povm_fidelities.push_back(povm_element_fidelity(e_rec, e_th));
        score.povm_relative_errors.push_back(relative_error(e_rec, e_th));
    }
    score.state_renormalized = rec_states.renormalized;
    score.povm_renormalized = rec_povms.renormalized;
    return score;
}

}  // namespace loopspam
