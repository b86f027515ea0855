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

#include "loopspam/qubit.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace loopspam {

namespace {

std::string describe(const Vec3 &v) {
    std::ostringstream out;
    out.precision(17);
    out << "(" << v[0] << ", " << v[1] << ", " << v[2] << ")";
    return out.str();
}

}  // namespace

const std::array<ComplexMatrix2, 3> &pauli_matrices() {
    static const std::array<ComplexMatrix2, 3> sigma = [] {
        const Complex i{0.0, 1.0};
        std::array<ComplexMatrix2, 3> s;
        s[0] << 0.0, 1.0, 1.0, 0.0;
        s[1] << 0.0, -i, i, 0.0;
        s[2] << 1.0, 0.0, 0.0, -1.0;
        return s;
    }();
    return sigma;
}

ComplexMatrix2 identity2() {
    return ComplexMatrix2::Identity();
}

ComplexMatrix2 pauli_combination(const Vec3 &v) {
    const auto &sigma = pauli_matrices();
    return v[0] * sigma[0] + v[1] * sigma[1] + v[2] * sigma[2];
}

bool is_hermitian(const ComplexMatrix2 &m, double tol) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

std::array<double, 2> hermitian_eigenvalues(const ComplexMatrix2 &m) {
    const double a = m(0, 0).real();
    const double d = m(1, 1).real();
    const double half_gap = 0.5 * (a - d);
    const double r = std::sqrt(half_gap * half_gap + std::norm(m(0, 1)));
    const double mid = 0.5 * (a + d);
    return {mid - r, mid + r};
}

double frobenius_norm(const ComplexMatrix2 &m) {
    return std::sqrt((m.adjoint() * m).trace().real());
}

StokesVector::StokesVector(const Vec3 &s, double tol) : s_(s) {
    if (!s.allFinite() || s.norm() > 1.0 + tol) {
        throw Error(ErrorCode::NonPhysicalState, "Stokes vector " + describe(s) + " lies outside the Poincare ball");
    }
}

ObservableVector::ObservableVector(const Vec3 &w, double tol) : w_(w) {
    if (!w.allFinite() || w.norm() > 1.0 + tol) {
        throw Error(ErrorCode::NonPositivePovm, "observable vector " + describe(w) + " has norm > 1; POVM not positive");
    }
}

DensityMatrix DensityMatrix::from_matrix(const ComplexMatrix2 &m, const Tolerances &tol) {
    if (!m.allFinite() || !is_hermitian(m, tol.input)) {
        throw Error(ErrorCode::InvalidOperator, "density matrix is not Hermitian");
    }
    if (std::abs(m.trace() - Complex(1.0, 0.0)) > tol.input) {
        throw Error(ErrorCode::InvalidOperator, "density matrix trace differs from 1");
    }
    if (hermitian_eigenvalues(m)[0] < -tol.input) {
        throw Error(ErrorCode::InvalidOperator, "density matrix has a negative eigenvalue");
    }
    return DensityMatrix(m);
}

double DensityMatrix::purity() const {
    return (m_ * m_).trace().real();
}

GaugeTransform::GaugeTransform(const Mat3 &g) : g_(g) {
    const double det = g.determinant();
    if (!g.allFinite() || std::abs(det) <= 1e-12) {
        throw Error(ErrorCode::SingularGauge, "gauge transform is singular");
    }
    g_inv_ = g.inverse();
}

DensityMatrix density_from_stokes(const StokesVector &s) {
    return DensityMatrix::from_matrix(0.5 * (pauli_combination(s.vec()) + identity2()));
}

StokesVector stokes_from_density(const DensityMatrix &rho) {
    const auto &sigma = pauli_matrices();
    Vec3 s;
    for (int k = 0; k < 3; ++k) {
        s[k] = (rho.matrix() * sigma[k]).trace().real();
    }
    return StokesVector(s);
}

PovmPair povm_from_observable(const ObservableVector &w) {
    const ComplexMatrix2 sigma = pauli_combination(w.vec());
    return {0.5 * (sigma + identity2()), 0.5 * (-sigma + identity2())};
}

ObservableVector observable_from_povm(const PovmPair &pair, const Tolerances &tol) {
    if (!is_hermitian(pair.e, tol.input) || !is_hermitian(pair.not_e, tol.input)) {
        throw Error(ErrorCode::InvalidElement, "POVM elements must be Hermitian");
    }
    if ((pair.e + pair.not_e - identity2()).cwiseAbs().maxCoeff() > tol.input) {
        throw Error(ErrorCode::InvalidElement, "POVM elements do not sum to the identity");
    }
    if (std::abs(pair.e.trace().real() - 1.0) > tol.input) {
        throw Error(ErrorCode::UnsupportedPovm, "biased POVM (Tr E != 1) is not supported");
    }
    const ComplexMatrix2 sigma = pair.e - pair.not_e;
    const auto &basis = pauli_matrices();
    Vec3 w;
    for (int k = 0; k < 3; ++k) {
        w[k] = 0.5 * (sigma * basis[k]).trace().real();
    }
    return ObservableVector(w, tol.input);
}

double expectation(const StokesVector &s, const ObservableVector &w) {
    return s.vec().dot(w.vec());
}

double born_probability(const DensityMatrix &rho, const ComplexMatrix2 &element, const Tolerances &tol) {
    if (!element.allFinite() || !is_hermitian(element, tol.input)) {
        throw Error(ErrorCode::InvalidElement, "measurement element is not Hermitian");
    }
    const auto ev = hermitian_eigenvalues(element);
    if (ev[0] < -tol.input || ev[1] > 1.0 + tol.input) {
        throw Error(ErrorCode::InvalidElement, "measurement element has eigenvalues outside [0, 1]");
    }
    return (rho.matrix() * element).trace().real();
}

double fidelity(const DensityMatrix &a, const DensityMatrix &b) {
    const ComplexMatrix2 &ma = a.matrix();
    const ComplexMatrix2 &mb = b.matrix();
    const double overlap = (ma * mb).trace().real();
    const double det_a = std::max(0.0, ma.determinant().real());
    const double det_b = std::max(0.0, mb.determinant().real());
    return std::clamp(overlap + 2.0 * std::sqrt(det_a * det_b), 0.0, 1.0);
}

double fidelity(const ComplexMatrix2 &a, const ComplexMatrix2 &b, const Tolerances &tol) {
    return fidelity(DensityMatrix::from_matrix(a, tol), DensityMatrix::from_matrix(b, tol));
}

double povm_element_fidelity(const ComplexMatrix2 &rec, const ComplexMatrix2 &th, const Tolerances &tol) {
    const double tr_rec = rec.trace().real();
    const double tr_th = th.trace().real();
    if (tr_rec <= tol.exact || tr_th <= tol.exact) {
        throw Error(ErrorCode::InvalidOperator, "POVM element has non-positive trace");
    }
    return fidelity(ComplexMatrix2(rec / tr_rec), ComplexMatrix2(th / tr_th), tol);
}

double relative_error(const ComplexMatrix2 &rec, const ComplexMatrix2 &th) {
    const double denom = frobenius_norm(th);
    if (!(denom > 1e-12)) {
        throw Error(ErrorCode::DegenerateNorm, "relative error against an operator of zero norm");
    }
    return frobenius_norm(rec - th) / denom;
}

GaugedFactors apply_gauge(std::span<const Vec3> p_rows, std::span<const Vec3> w_cols, const GaugeTransform &g) {
    GaugedFactors out;
    out.rows.reserve(p_rows.size());
    out.cols.reserve(w_cols.size());
    // Row vector p G^-1 is the column vector G^-T p.
    const Mat3 g_inv_t = g.inverse().transpose();
    for (const auto &p : p_rows) {
        out.rows.push_back(g_inv_t * p);
    }
    for (const auto &w : w_cols) {
        out.cols.push_back(g.matrix() * w);
    }
    return out;
}

}  // namespace loopspam
