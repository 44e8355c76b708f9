// Copyright 2026 The wseq Authors
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

#include "wseq/errors.h"

#include <utility>

namespace wseq {

std::string_view error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::DimMismatch:
            return "DimMismatch";
        case ErrorCode::NotHermitian:
            return "NotHermitian";
        case ErrorCode::NotUnitary:
            return "NonUnitary";
        case ErrorCode::NotNormalized:
            return "NotNormalized";
        case ErrorCode::NotProjector:
            return "NotProjector";
        case ErrorCode::DegeneratePostSelection:
            return "DegeneratePostSelection";
        case ErrorCode::RatioUndefined:
            return "RatioUndefined";
        case ErrorCode::NonCommuting:
            return "NonCommuting";
        case ErrorCode::BasisIncomplete:
            return "BasisIncomplete";
        case ErrorCode::GridTooCoarse:
            return "GridTooCoarse";
        case ErrorCode::GridResolutionError:
            return "GridResolutionError";
        case ErrorCode::UnsupportedCombination:
            return "UnsupportedCombination";
        case ErrorCode::AssumptionAViolated:
            return "AssumptionAViolated";
        case ErrorCode::NumericallySingular:
            return "NumericallySingular";
        case ErrorCode::NoSuccessfulRuns:
            return "NoSuccessfulRuns";
        case ErrorCode::EquivalenceViolation:
            return "EquivalenceViolation";
        case ErrorCode::BothZero:
            return "BothZero";
        case ErrorCode::InvalidArgument:
            return "InvalidArgument";
        case ErrorCode::BadComplexLiteral:
            return "BadComplexLiteral";
        case ErrorCode::DuplicateObserveAtBoundary:
            return "DuplicateObserveAtBoundary";
        case ErrorCode::UnknownDirective:
            return "UnknownDirective";
        case ErrorCode::UnknownReference:
            return "UnknownReference";
        case ErrorCode::SyntaxError:
            return "SyntaxError";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string &message)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {
}

ParseError::ParseError(ErrorCode code, size_t line, std::string token, const std::string &message)
    : Error(code, "line " + std::to_string(line) + ": " + message + " ('" + token + "')"),
      line_(line),
      token_(std::move(token)) {
}

}  // namespace wseq
