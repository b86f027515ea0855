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

#include "loopspam/expectation_matrix.hpp"

#include <sstream>
#include <string>

namespace loopspam {

std::string_view scheme_name(Scheme scheme) {
    return scheme == Scheme::TwoN ? "2n" : "n_plus_1";
}

Scheme parse_scheme(std::string_view text) {
    if (text == "2n" || text == "two_n" || text == "TwoN") {
        return Scheme::TwoN;
    }
    if (text == "n+1" || text == "n_plus_1" || text == "NPlusOne") {
        return Scheme::NPlusOne;
    }
    throw Error(ErrorCode::Configuration, "unknown scheme '" + std::string(text) + "' (expected 2n or n_plus_1)");
}

int scheme_dimension(Scheme scheme) {
    return scheme == Scheme::TwoN ? 6 : 4;
}

ExpectationMatrix::ExpectationMatrix(Eigen::MatrixXd values, double eps) : values_(std::move(values)) {
    if (values_.rows() == 6 && values_.cols() == 6) {
        shape_ = Shape::Full6;
    } else if (values_.rows() == 4 && values_.cols() == 4) {
        shape_ = Shape::Compact4;
    } else {
        std::ostringstream msg;
        msg << "expectation matrix must be 6x6 or 4x4, got " << values_.rows() << "x" << values_.cols();
        throw Error(ErrorCode::Shape, msg.str());
    }
    for (Eigen::Index r = 0; r < values_.rows(); ++r) {
        for (Eigen::Index c = 0; c < values_.cols(); ++c) {
            const double v = values_(r, c);
            if (!(v >= -1.0 - eps && v <= 1.0 + eps)) {
                std::ostringstream msg;
                msg.precision(17);
                msg << "expectation value " << v << " at (" << r + 1 << ", " << c + 1 << ") is outside [-1, 1]";
                throw Error(ErrorCode::Range, msg.str());
            }
        }
    }
}

Eigen::Matrix3d ExpectationMatrix::corner(int row, int col) const {
    if (shape_ != Shape::Full6) {
        throw Error(ErrorCode::Shape, "corner blocks are only defined for 6x6 matrices");
    }
    return values_.block<3, 3>(row, col);
}

Eigen::Matrix3d ExpectationMatrix::corner_a() const {
    return corner(0, 0);
}
Eigen::Matrix3d ExpectationMatrix::corner_b() const {
    return corner(0, 3);
}
Eigen::Matrix3d ExpectationMatrix::corner_c() const {
    return corner(3, 0);
}
Eigen::Matrix3d ExpectationMatrix::corner_d() const {
    return corner(3, 3);
}

}  // namespace loopspam
