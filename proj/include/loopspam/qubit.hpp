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

#include <array>
#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "loopspam/error.hpp"

/**
 * Single-qubit algebra in the Pauli/Stokes parametrization.
 *
 * States are rho = (1/2)(s . sigma + 1) with |s| <= 1; two-outcome unbiased
 * measurements are {E, notE} with E = (1/2)(w . sigma + 1), |w| <= 1. The
 * expectation value of the observable E - notE on rho is s . w.
 *
 * Basis convention: |H> = (1, 0), |V> = (0, 1); sigma_3 |H> = +|H>.
 */

namespace loopspam {

using Complex = std::complex<double>;
using ComplexMatrix2 = Eigen::Matrix2cd;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

struct Tolerances {
    // Exact algebra checks (Hermiticity, trace, round trips).
    double exact = 1e-12;
    // Validation of caller-supplied vectors and operators.
    double input = 1e-9;
};

inline constexpr Tolerances kDefaultTolerances{};

/// sigma_1, sigma_2, sigma_3 in that order.
const std::array<ComplexMatrix2, 3> &pauli_matrices();

ComplexMatrix2 identity2();

/// Returns v_1 sigma_1 + v_2 sigma_2 + v_3 sigma_3.
ComplexMatrix2 pauli_combination(const Vec3 &v);

bool is_hermitian(const ComplexMatrix2 &m, double tol = kDefaultTolerances.exact);

/// Eigenvalues of a Hermitian 2x2 matrix, ascending.
std::array<double, 2> hermitian_eigenvalues(const ComplexMatrix2 &m);

double frobenius_norm(const ComplexMatrix2 &m);

/// Point of the Poincare ball. s_0 = 1 is implicit.
class StokesVector {
   public:
    StokesVector() = default;

    /// Throws NonPhysicalState when |s| > 1 + tol.
    explicit StokesVector(const Vec3 &s, double tol = kDefaultTolerances.input);
    StokesVector(double s1, double s2, double s3) : StokesVector(Vec3(s1, s2, s3)) {
    }

    const Vec3 &vec() const noexcept {
        return s_;
    }
    double operator[](int k) const {
        return s_[k];
    }
    double norm() const {
        return s_.norm();
    }
    bool is_pure(double tol = kDefaultTolerances.exact) const {
        return std::abs(s_.norm() - 1.0) <= tol;
    }

    bool operator==(const StokesVector &other) const {
        return s_ == other.s_;
    }

   private:
    Vec3 s_ = Vec3::Zero();
};

/// Column W^i of the measurement matrix; |w| <= 1 keeps the POVM positive.
class ObservableVector {
   public:
    ObservableVector() = default;

    /// Throws NonPositivePovm when |w| > 1 + tol.
    explicit ObservableVector(const Vec3 &w, double tol = kDefaultTolerances.input);
    ObservableVector(double w1, double w2, double w3) : ObservableVector(Vec3(w1, w2, w3)) {
    }

    const Vec3 &vec() const noexcept {
        return w_;
    }
    double operator[](int k) const {
        return w_[k];
    }
    double norm() const {
        return w_.norm();
    }

    bool operator==(const ObservableVector &other) const {
        return w_ == other.w_;
    }

   private:
    Vec3 w_ = Vec3::Zero();
};

/// Hermitian, unit-trace, positive semidefinite 2x2 operator.
class DensityMatrix {
   public:
    DensityMatrix() : m_(ComplexMatrix2::Identity() * 0.5) {
    }

    /// Validates the operator; throws InvalidOperator on failure.
    static DensityMatrix from_matrix(const ComplexMatrix2 &m, const Tolerances &tol = kDefaultTolerances);

    const ComplexMatrix2 &matrix() const noexcept {
        return m_;
    }
    double purity() const;

   private:
    explicit DensityMatrix(const ComplexMatrix2 &m) : m_(m) {
    }
    ComplexMatrix2 m_;
};

struct PovmPair {
    ComplexMatrix2 e;
    ComplexMatrix2 not_e;
};

/// Invertible real 3x3 matrix G acting as P -> P G^-1, W -> G W.
class GaugeTransform {
   public:
    /// Throws SingularGauge when |det g| <= 1e-12.
    explicit GaugeTransform(const Mat3 &g);

    const Mat3 &matrix() const noexcept {
        return g_;
    }
    const Mat3 &inverse() const noexcept {
        return g_inv_;
    }

   private:
    Mat3 g_;
    Mat3 g_inv_;
};

DensityMatrix density_from_stokes(const StokesVector &s);
StokesVector stokes_from_density(const DensityMatrix &rho);

PovmPair povm_from_observable(const ObservableVector &w);

/// Inverse of povm_from_observable. Requires E + notE = 1 and Tr E = 1
/// (unbiased); a biased pair raises UnsupportedPovm.
ObservableVector observable_from_povm(const PovmPair &pair, const Tolerances &tol = kDefaultTolerances);

/// S = s . w = Tr(rho Sigma).
double expectation(const StokesVector &s, const ObservableVector &w);

/// Born rule p = Tr(rho Pi). The element must be Hermitian with spectrum in
/// [0, 1] (InvalidElement otherwise).
double born_probability(const DensityMatrix &rho, const ComplexMatrix2 &element,
                        const Tolerances &tol = kDefaultTolerances);

/// Uhlmann fidelity (Tr sqrt(sqrt(a) b sqrt(a)))^2, evaluated with the qubit
/// closed form Tr(ab) + 2 sqrt(det a det b).
double fidelity(const DensityMatrix &a, const DensityMatrix &b);

/// Same, for raw operators. Both must be Hermitian, PSD and unit trace
/// (InvalidOperator otherwise).
double fidelity(const ComplexMatrix2 &a, const ComplexMatrix2 &b, const Tolerances &tol = kDefaultTolerances);

/// Fidelity between two POVM elements after dividing each by its trace.
double povm_element_fidelity(const ComplexMatrix2 &rec, const ComplexMatrix2 &th,
                             const Tolerances &tol = kDefaultTolerances);

/// ||rec - th||_F / ||th||_F. DegenerateNorm when ||th||_F <= 1e-12.
double relative_error(const ComplexMatrix2 &rec, const ComplexMatrix2 &th);

struct GaugedFactors {
    std::vector<Vec3> rows;
    std::vector<Vec3> cols;
};

/// Rows p -> p G^-1 (as row vectors), columns w -> G w. Outputs are raw
/// vectors; they may leave the unit ball.
GaugedFactors apply_gauge(std::span<const Vec3> p_rows, std::span<const Vec3> w_cols, const GaugeTransform &g);

}  // namespace loopspam
