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

#include <string_view>

#include <Eigen/Dense>

#include "loopspam/error.hpp"

namespace loopspam {

/// How many preparations/settings an experiment uses for a qubit (n = 3).
enum class Scheme {
    TwoN,      // 2n = 6 preparations x 6 settings
    NPlusOne,  // n + 1 = 4 preparations x 4 settings, embedded into 6x6
};

std::string_view scheme_name(Scheme scheme);
/// Accepts "2n", "two_n", "n+1", "n_plus_1". Throws Configuration otherwise.
Scheme parse_scheme(std::string_view text);
int scheme_dimension(Scheme scheme);

/// Matrix S of expectation values S_a^i: rows are preparations a, columns are
/// detector settings i. Only the 6x6 (Full6) and 4x4 (Compact4) shapes exist.
class ExpectationMatrix {
   public:
    enum class Shape { Full6, Compact4 };

    static constexpr double kRangeEpsilon = 1e-9;

    /// Throws Shape for any size other than 6x6 or 4x4 and Range when an
    /// entry lies outside [-1 - eps, 1 + eps].
    explicit ExpectationMatrix(Eigen::MatrixXd values, double eps = kRangeEpsilon);

    const Eigen::MatrixXd &values() const noexcept {
        return values_;
    }
    Shape shape() const noexcept {
        return shape_;
    }
    int size() const noexcept {
        return static_cast<int>(values_.rows());
    }
    /// Zero-based access.
    double operator()(int row, int col) const {
        return values_(row, col);
    }

    // Corner blocks of a Full6 matrix: A (preps 1-3 x settings 1-3), B (preps
    // 1-3 x settings 4-6), C (preps 4-6 x settings 1-3), D (preps 4-6 x 4-6).
    Eigen::Matrix3d corner_a() const;
    Eigen::Matrix3d corner_b() const;
    Eigen::Matrix3d corner_c() const;
    Eigen::Matrix3d corner_d() const;

    bool operator==(const ExpectationMatrix &other) const {
        return shape_ == other.shape_ && values_ == other.values_;
    }

   private:
    Eigen::Matrix3d corner(int row, int col) const;

    Eigen::MatrixXd values_;
    Shape shape_;
};

}  // namespace loopspam
