// SPDX-License-Identifier: Apache-2.0
//
// srmcal: symmetric-reciprocal-match VNA calibration with match-model extraction
// Copyright (C) 2026 The srmcal authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef SRM_ERRORS_HPP
#define SRM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace srm
{

enum class ErrorKind
{
    InvalidArgument,
    SingularConversion,
    PoleAtInput,
    SingularMatrix,
    RankDeficient,
    TooFewStandards,
    DegenerateEigenvalues,
    RankCollapse,
    IncompleteSession,
    FrequencyMismatch,
    OutOfBounds,
    NoFreeParameters,
    ParseError,
    NonMonotonicFrequency,
    MissingRole,
    AxisMismatch,
    ModelSyntaxError,
    Io
};

// Maps onto the CLI exit codes: 1 validation, 2 numerical, 3 I/O.
enum class ErrorCategory
{
    Validation = 1,
    Numerical = 2,
    Io = 3
};

constexpr ErrorCategory category(ErrorKind kind) noexcept
{
    switch (kind)
    {
    case ErrorKind::SingularConversion:
    case ErrorKind::PoleAtInput:
    case ErrorKind::SingularMatrix:
    case ErrorKind::RankDeficient:
    case ErrorKind::DegenerateEigenvalues:
    case ErrorKind::RankCollapse:
        return ErrorCategory::Numerical;
    case ErrorKind::Io:
        return ErrorCategory::Io;
    default:
        return ErrorCategory::Validation;
    }
}

constexpr const char *to_string(ErrorKind kind) noexcept
{
    switch (kind)
    {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::SingularConversion: return "SingularConversion";
    case ErrorKind::PoleAtInput: return "PoleAtInput";
    case ErrorKind::SingularMatrix: return "SingularMatrix";
    case ErrorKind::RankDeficient: return "RankDeficient";
    case ErrorKind::TooFewStandards: return "TooFewStandards";
    case ErrorKind::DegenerateEigenvalues: return "DegenerateEigenvalues";
    case ErrorKind::RankCollapse: return "RankCollapse";
    case ErrorKind::IncompleteSession: return "IncompleteSession";
    case ErrorKind::FrequencyMismatch: return "FrequencyMismatch";
    case ErrorKind::OutOfBounds: return "OutOfBounds";
    case ErrorKind::NoFreeParameters: return "NoFreeParameters";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::NonMonotonicFrequency: return "NonMonotonicFrequency";
    case ErrorKind::MissingRole: return "MissingRole";
    case ErrorKind::AxisMismatch: return "AxisMismatch";
    case ErrorKind::ModelSyntaxError: return "ModelSyntaxError";
    case ErrorKind::Io: return "Io";
    }
    return "Unknown";
}

class Error : public std::runtime_error
{
public:
    Error(ErrorKind kind, const std::string &message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind)
    {
    }

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace srm

#endif
