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

#include "loopspam/error.hpp"

namespace loopspam {

std::string_view error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::NonPhysicalState:
            return "non_physical_state";
        case ErrorCode::NonPositivePovm:
            return "non_positive_povm";
        case ErrorCode::UnsupportedPovm:
            return "unsupported_povm";
        case ErrorCode::InvalidElement:
            return "invalid_element";
        case ErrorCode::InvalidOperator:
            return "invalid_operator";
        case ErrorCode::DegenerateNorm:
            return "degenerate_norm";
        case ErrorCode::SingularGauge:
            return "singular_gauge";
        case ErrorCode::Bounds:
            return "bounds";
        case ErrorCode::Configuration:
            return "configuration";
        case ErrorCode::Shape:
            return "shape";
        case ErrorCode::SingularCorner:
            return "singular_corner";
        case ErrorCode::SingularMeasurement:
            return "singular_measurement";
        case ErrorCode::SingularPreparation:
            return "singular_preparation";
        case ErrorCode::SingularLeg:
            return "singular_leg";
        case ErrorCode::Parse:
            return "parse";
        case ErrorCode::Range:
            return "range";
        case ErrorCode::Io:
            return "io";
        case ErrorCode::MissingStats:
            return "missing_stats";
    }
    return "unknown";
}

}  // namespace loopspam
