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

#include <cstdint>

namespace ola {

/// Rows are cue languages, columns output languages:
///   | a b |
///   | c d |
struct ContingencyTable2x2 {
  std::uint64_t a = 0, b = 0, c = 0, d = 0;

  std::uint64_t total() const noexcept { return a + b + c + d; }
  bool degenerate() const noexcept;  ///< some row or column sums to zero

  friend bool operator==(const ContingencyTable2x2&, const ContingencyTable2x2&) = default;
};

struct ChiSquare {
  double statistic = 0.0;
  double p = 1.0;
};

/// Upper tail of the chi-square distribution with one degree of freedom.
double chi_square_sf_1dof(double x);

/// Pearson test of independence, no continuity correction. Throws
/// DegenerateTable when an expected count would be zero.
ChiSquare chi_square_2x2(const ContingencyTable2x2& table);

}  // namespace ola
