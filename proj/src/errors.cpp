// Copyright 2026 The ghzcert Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ghzcert/errors.hpp"

namespace ghzcert {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::BadArity: return "BadArity";
    case ErrorKind::NonHermitian: return "NonHermitian";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::BadSelector: return "BadSelector";
    case ErrorKind::BadIndex: return "BadIndex";
    case ErrorKind::BadRange: return "BadRange";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::Unsupported: return "Unsupported";
    case ErrorKind::BadBlocks: return "BadBlocks";
    case ErrorKind::InfeasibleValue: return "InfeasibleValue";
    case ErrorKind::MaxIterations: return "MaxIterations";
    case ErrorKind::Infeasible: return "Infeasible";
    case ErrorKind::InsufficientData: return "InsufficientData";
    case ErrorKind::NoViolation: return "NoViolation";
    case ErrorKind::OutputTooShort: return "OutputTooShort";
    case ErrorKind::InvalidBehavior: return "InvalidBehavior";
  }
  return "Unknown";
}

}  // namespace ghzcert
