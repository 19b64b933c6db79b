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

#include <gtest/gtest.h>

#include <sstream>

#include "ghzcert/csv.hpp"

namespace ghzcert {
namespace {

TEST(CsvNumber, Formatting) {
  EXPECT_EQ(csv_number(4.0), "4");
  EXPECT_EQ(csv_number(-0.0), "0");
  EXPECT_EQ(csv_number(0.131242202118123), "0.131242202118");
  EXPECT_EQ(csv_number(1e-20), "1e-20");
  EXPECT_EQ(csv_number(std::optional<double>{}), "");
}

TEST(Csv, RoundTrip) {
  std::ostringstream out;
  write_csv(out, {"a", "b"}, {{"1", ""}, {"x", "2.5"}});
  EXPECT_EQ(out.str(), "a,b\n1,\nx,2.5\n");
  std::istringstream in(out.str());
  const auto rows = read_csv(in);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[1], (std::vector<std::string>{"1", ""}));
  EXPECT_EQ(rows[2][1], "2.5");
}

}  // namespace
}  // namespace ghzcert
