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

#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ghzcert {

/// 12 significant digits, '.' decimal point, independent of the locale.
std::string csv_number(double v);
/// Empty field for a missing value.
std::string csv_number(const std::optional<double>& v);

void write_csv(std::ostream& out, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

/// Parses what write_csv produced (no quoting); throws BadRange on ragged rows.
std::vector<std::vector<std::string>> read_csv(std::istream& in);

}  // namespace ghzcert
