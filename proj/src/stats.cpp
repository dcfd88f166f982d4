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

#include "ola/stats.hpp"

#include <cmath>

#include "ola/errors.hpp"

namespace ola {

bool ContingencyTable2x2::degenerate() const noexcept {
  return a + b == 0 || c + d == 0 || a + c == 0 || b + d == 0;
}

double chi_square_sf_1dof(double x) {
  if (x <= 0.0) return 1.0;
  return std::erfc(std::sqrt(x / 2.0));
}

ChiSquare chi_square_2x2(const ContingencyTable2x2& t) {
  if (t.degenerate()) throw DegenerateTable("a row or column of the table is empty");
  const double a = double(t.a), b = double(t.b), c = double(t.c), d = double(t.d);
  const double n = a + b + c + d;
  const double diff = a * d - b * c;
  const double stat = n * diff * diff / ((a + b) * (c + d) * (a + c) * (b + d));
  return {stat, chi_square_sf_1dof(stat)};
}

}  // namespace ola
