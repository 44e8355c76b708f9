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

#ifndef WSEQ_ERRORS_H
#define WSEQ_ERRORS_H

#include <stdexcept>
#include <string>
#include <string_view>

namespace wseq {

enum class ErrorCode {
    DimMismatch,
    NotHermitian,
    NotUnitary,
    NotNormalized,
    NotProjector,
    DegeneratePostSelection,
    RatioUndefined,
    NonCommuting,
    BasisIncomplete,
    GridTooCoarse,
    GridResolutionError,
    UnsupportedCombination,
    AssumptionAViolated,
    NumericallySingular,
    NoSuccessfulRuns,
    EquivalenceViolation,
    BothZero,
    InvalidArgument,
    // Parser diagnostics.
    BadComplexLiteral,
    DuplicateObserveAtBoundary,
    UnknownDirective,
    UnknownReference,
    SyntaxError,
};

std::string_view error_code_name(ErrorCode code);

/// Base exception for every library failure. Carries a machine-checkable code.
class Error : public std::runtime_error {
   public:
    Error(ErrorCode code, const std::string &message);
    ErrorCode code() const noexcept {
        return code_;
    }

   private:
    ErrorCode code_;
};

/// Parse failure with a 1-based line number and the offending token.
class ParseError : public Error {
   public:
    ParseError(ErrorCode code, size_t line, std::string token, const std::string &message);
    size_t line() const noexcept {
        return line_;
    }
    const std::string &token() const noexcept {
        return token_;
    }

   private:
    size_t line_;
    std::string token_;
};

}  // namespace wseq

#endif
