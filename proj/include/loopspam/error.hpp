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

#include <stdexcept>
#include <string>
#include <string_view>

namespace loopspam {

enum class ErrorCode {
    NonPhysicalState,
    NonPositivePovm,
    UnsupportedPovm,
    InvalidElement,
    InvalidOperator,
    DegenerateNorm,
    SingularGauge,
    Bounds,
    Configuration,
    Shape,
    SingularCorner,
    SingularMeasurement,
    SingularPreparation,
    SingularLeg,
    Parse,
    Range,
    Io,
    MissingStats,
};

std::string_view error_code_name(ErrorCode code);

/// Every failure raised by the library carries a machine-readable code so the
/// CLI can serialize it into the run report.
class Error : public std::runtime_error {
   public:
    Error(ErrorCode code, const std::string &message)
        : std::runtime_error(message), code_(code) {
    }

    ErrorCode code() const noexcept {
        return code_;
    }

   private:
    ErrorCode code_;
};

}  // namespace loopspam
