// Copyright 2026 The Authors.
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

#include <cmath>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/special_functions/beta.hpp>

#include "catch_amalgamated.hpp"
#include "lea/special_functions.hpp"

using Catch::Matchers::WithinAbs;

TEST_CASE("normal cdf and pdf against boost") {
  const boost::math::normal_distribution<double> n;
  for (double x = -8.0; x <= 8.0; x += 0.37) {
    CHECK_THAT(lea::normal_cdf(x), WithinAbs(boost::math::cdf(n, x), 1e-15));
    CHECK_THAT(lea::normal_pdf(x), WithinAbs(boost::math::pdf(n, x), 1e-15));
  }
}

TEST_CASE("integer incomplete beta matches hand-expanded polynomials") {
  for (double t = 0.0; t <= 1.0; t += 0.03125) {
    const double t3 = t * t * t, t4 = t3 * t, t5 = t4 * t, t6 = t5 * t;
    CHECK_THAT(*lea::incomplete_beta_polynomial(t, 3, 2), WithinAbs(4 * t3 - 3 * t4, 1e-12));
    CHECK_THAT(*lea::incomplete_beta_polynomial(t, 2, 2), WithinAbs(3 * t * t - 2 * t3, 1e-12));
    CHECK_THAT(*lea::incomplete_beta_polynomial(t, 3, 4),
               WithinAbs(20 * t3 - 45 * t4 + 36 * t5 - 10 * t6, 1e-12));
    CHECK_THAT(*lea::incomplete_beta_polynomial(t, 4, 3),
               WithinAbs(15 * t4 - 24 * t5 + 10 * t6, 1e-12));
  }
  CHECK_FALSE(lea::incomplete_beta_polynomial(0.3, 2.5, 2));
}

TEST_CASE("quadrature incomplete beta against boost") {
  for (double a : {0.5, 1.0, 2.0, 2.5, 3.0, 7.3}) {
    for (double b : {0.7, 1.0, 2.0, 4.0, 5.5}) {
      for (double x : {0.0, 0.01, 0.2, 0.5, 0.73, 0.99, 1.0}) {
        CHECK_THAT(lea::incomplete_beta_quadrature(x, a, b),
                   WithinAbs(boost::math::ibeta(a, b, x), 1e-10));
        CHECK_THAT(lea::incomplete_beta(x, a, b),
                   WithinAbs(boost::math::ibeta(a, b, x), 1e-10));
      }
    }
  }
  CHECK_THROWS(lea::incomplete_beta(1.5, 2, 2));
  CHECK_THROWS(lea::incomplete_beta(0.5, -1, 2));
}

TEST_CASE("adaptive quadrature on smooth integrands") {
  CHECK_THAT(lea::integrate([](double x) { return std::sin(x); }, 0.0, M_PI),
             WithinAbs(2.0, 1e-12));
  CHECK_THAT(lea::integrate([](double x) { return x * x; }, 1.0, 0.0),
             WithinAbs(-1.0 / 3.0, 1e-14));
}
