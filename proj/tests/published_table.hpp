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

// Published GHZ-basis transformation table for the three-party expression.
// Rows follow the published order; each cell is a signed image label.

#include <array>
#include <string>

namespace ghzcert::testdata {

struct PublishedRow {
  const char* label;
  std::array<const char*, 8> cells;  // XXX XXZ XZX XZZ ZXI ZZI ZIX ZIZ
  int klass;
};

inline const std::array<PublishedRow, 8>& published_table() {
  static const std::array<PublishedRow, 8> rows{{
      {"000", {"+000", "-101", "-110", "+011", "+110", "+000", "+101", "+000"}, 1},
      {"100", {"-100", "+001", "+010", "-111", "+010", "+100", "+001", "+100"}, 2},
      {"001", {"+001", "+100", "-111", "-010", "+111", "+001", "+100", "-010"}, 2},
      {"101", {"-101", "-000", "+011", "+110", "+011", "+101", "+000", "+101"}, 1},
      {"010", {"+010", "+111", "+100", "-001", "+100", "-010", "+111", "+010"}, 2},
      {"110", {"-110", "+011", "-000", "-101", "+000", "-110", "+011", "+110"}, 1},
      {"011", {"+011", "+110", "+101", "+000", "+101", "-011", "+110", "-011"}, 1},
      {"111", {"-111", "-010", "-001", "-100", "+001", "-111", "+010", "-111"}, 2},
  }};
  return rows;
}

inline int label_of(const std::string& bits) {
  return (bits[0] - '0') * 4 + (bits[1] - '0') * 2 + (bits[2] - '0');
}

}  // namespace ghzcert::testdata
