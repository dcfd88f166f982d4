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

#include <cmath>

#include "doctest.h"
#include "ola/errors.hpp"
#include "ola/stats.hpp"

using namespace ola;

namespace {

// Pearson statistic straight from observed and expected counts.
double pearson(const ContingencyTable2x2& t) {
  const double obs[2][2] = {{double(t.a), double(t.b)}, {double(t.c), double(t.d)}};
  const double n = double(t.total());
  double x = 0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const double e = (obs[i][0] + obs[i][1]) * (obs[0][j] + obs[1][j]) / n;
      x += (obs[i][j] - e) * (obs[i][j] - e) / e;
    }
  return x;
}

}  // namespace

TEST_SUITE("stats") {
  TEST_CASE("survival function anchors") {
    CHECK(chi_square_sf_1dof(0.0) == doctest::Approx(1.0));
    const double p = chi_square_sf_1dof(3.841);
    CHECK(p >= 0.0499);
    CHECK(p <= 0.0501);
    CHECK(chi_square_sf_1dof(6.635) == doctest::Approx(0.01).epsilon(1e-3));
    CHECK(chi_square_sf_1dof(10.828) == doctest::Approx(0.001).epsilon(1e-3));
    CHECK(chi_square_sf_1dof(1e6) >= 0.0);
  }

  TEST_CASE("independent table") {
    const auto r = chi_square_2x2({50, 50, 50, 50});
    CHECK(r.statistic == doctest::Approx(0.0));
    CHECK(r.p == doctest::Approx(1.0));
  }

  TEST_CASE("perfectly dependent tables") {
    auto r = chi_square_2x2({50, 0, 0, 50});
    CHECK(r.statistic == doctest::Approx(100.0));
    CHECK(r.p < 0.001);
    r = chi_square_2x2({10, 0, 0, 10});
    CHECK(r.statistic == doctest::Approx(20.0));
    CHECK(r.p < 1e-4);
  }

  TEST_CASE("statistic matches the Pearson sum") {
    for (const ContingencyTable2x2 t : {ContingencyTable2x2{12, 5, 7, 30}, {3, 9, 14, 2}, {100, 80, 60, 90}}) {
      CHECK(chi_square_2x2(t).statistic == doctest::Approx(pearson(t)).epsilon(1e-12));
    }
  }

  TEST_CASE("degenerate tables") {
    CHECK(ContingencyTable2x2{0, 0, 5, 5}.degenerate());
    CHECK(ContingencyTable2x2{5, 0, 5, 0}.degenerate());
    CHECK_FALSE(ContingencyTable2x2{1, 0, 0, 1}.degenerate());
    CHECK_THROWS_AS(chi_square_2x2({0, 0, 5, 5}), DegenerateTable);
    CHECK_THROWS_AS(chi_square_2x2({0, 0, 0, 0}), DegenerateTable);
  }

  TEST_CASE("diagonal excess increases the statistic") {
    // Marginals stay at 50 per row and column.
    double prev = -1;
    for (std::uint64_t k = 25; k <= 50; ++k) {
      const double x = chi_square_2x2({k, 50 - k, 50 - k, k}).statistic;
      CHECK(x > prev);
      prev = x;
    }
  }

  TEST_CASE("swapping both labels leaves the statistic unchanged") {
    const ContingencyTable2x2 t{12, 5, 7, 30};
    CHECK(chi_square_2x2({t.d, t.c, t.b, t.a}).statistic == doctest::Approx(chi_square_2x2(t).statistic));
  }
}
