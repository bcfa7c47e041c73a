// Copyright 2026 The kdq Authors
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

namespace kdq {

enum class ErrorCode {
    NotHermitian,
    TraceNotOne,
    NotPSD,
    NotSquare,
    NonFinite,
    NotNormalized,
    NotOrthonormal,
    NotUnitary,
    ConvergenceFailure,
    DimensionMismatch,
    ChainTooShort,
    MarginalNotReal,
    ZeroOverlap,
    InsufficientMoments,
    NotMUB,
    DegenerateSpectrum,
    InvalidBlochParameters,
    ParameterOutOfRange,
    SchemaError,
};

constexpr std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::NotHermitian: return "NotHermitian";
        case ErrorCode::TraceNotOne: return "TraceNotOne";
        case ErrorCode::NotPSD: return "NotPSD";
        case ErrorCode::NotSquare: return "NotSquare";
        case ErrorCode::NonFinite: return "NonFinite";
        case ErrorCode::NotNormalized: return "NotNormalized";
        case ErrorCode::NotOrthonormal: return "NotOrthonormal";
        case ErrorCode::NotUnitary: return "NotUnitary";
        case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::ChainTooShort: return "ChainTooShort";
        case ErrorCode::MarginalNotReal: return "MarginalNotReal";
        case ErrorCode::ZeroOverlap: return "ZeroOverlap";
        case ErrorCode::InsufficientMoments: return "InsufficientMoments";
        case ErrorCode::NotMUB: return "NotMUB";
        case ErrorCode::DegenerateSpectrum: return "DegenerateSpectrum";
        case ErrorCode::InvalidBlochParameters: return "InvalidBlochParameters";
        case ErrorCode::ParameterOutOfRange: return "ParameterOutOfRange";
        case ErrorCode::SchemaError: return "SchemaError";
    }
    return "Unknown";
}

// Every failure raised by the library carries a code so callers (and the CLI)
// can branch without parsing messages.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace kdq
