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

// Independent reference computations used to cross-check the library. They
// deliberately take different routes (eigendecompositions, LU inverses,
// Jones vectors) from the production code.

#include <cmath>
#include <complex>
#include <random>

#include <Eigen/Dense>

namespace oracles {

using Matrix2c = Eigen::Matrix2cd;

inline Matrix2c pauli(int k) {
    const std::complex<double> i(0.0, 1.0);
    Matrix2c m;
    switch (k) {
        case 0:
            m << 0, 1, 1, 0;
            break;
        case 1:
            m << 0, -i, i, 0;
            break;
        default:
            m << 1, 0, 0, -1;
            break;
    }
    return m;
}

inline Matrix2c bloch_operator(const Eigen::Vector3d &v) {
    return 0.5 * (Matrix2c::Identity() + v[0] * pauli(0) + v[1] * pauli(1) + v[2] * pauli(2));
}

inline Matrix2c sqrt_psd(const Matrix2c &m) {
    Eigen::SelfAdjointEigenSolver<Matrix2c> es(m);
    Eigen::Vector2d ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * ev.cast<std::complex<double>>().asDiagonal() * es.eigenvectors().adjoint();
}

/// (Tr sqrt(sqrt(a) b sqrt(a)))^2 through eigendecompositions.
inline double fidelity_eig(const Matrix2c &a, const Matrix2c &b) {
    const Matrix2c ra = sqrt_psd(a);
    const Matrix2c inner = ra * b * ra;
    Eigen::SelfAdjointEigenSolver<Matrix2c> es(inner);
    const double t = std::sqrt(std::max(0.0, es.eigenvalues()[0])) + std::sqrt(std::max(0.0, es.eigenvalues()[1]));
    return t * t;
}

/// Stokes vector of a pure polarization Jones vector (a, b).
inline Eigen::Vector3d stokes_of_jones(const Eigen::Vector2cd &psi) {
    const std::complex<double> a = psi[0], b = psi[1];
    const double n = std::norm(a) + std::norm(b);
    return {2.0 * std::real(std::conj(a) * b) / n, 2.0 * std::imag(std::conj(a) * b) / n,
            (std::norm(a) - std::norm(b)) / n};
}

/// Real parts of Tr(m sigma_k) / 2.
inline Eigen::Vector3d pauli_coefficients(const Matrix2c &m) {
    return {0.5 * (m * pauli(0)).trace().real(), 0.5 * (m * pauli(1)).trace().real(),
            0.5 * (m * pauli(2)).trace().real()};
}

inline Eigen::Vector3d random_in_ball(std::mt19937_64 &rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (;;) {
        Eigen::Vector3d v(u(rng), u(rng), u(rng));
        if (v.squaredNorm() <= 1.0) {
            return v;
        }
    }
}

inline Eigen::Vector3d random_on_sphere(std::mt19937_64 &rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    Eigen::Vector3d v(n(rng), n(rng), n(rng));
    return v.normalized();
}

/// Delta(S) with LU inverses on the corners.
inline Eigen::Matrix3d partial_determinant_lu(const Eigen::MatrixXd &s) {
    const Eigen::Matrix3d a = s.block<3, 3>(0, 0), b = s.block<3, 3>(0, 3);
    const Eigen::Matrix3d c = s.block<3, 3>(3, 0), d = s.block<3, 3>(3, 3);
    return a.partialPivLu().solve(b * d.partialPivLu().solve(c));
}

}  // namespace oracles
