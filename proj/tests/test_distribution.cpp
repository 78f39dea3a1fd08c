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
#include <random>
#include <sstream>

#include <boost/math/distributions/beta.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "catch_amalgamated.hpp"
#include "lea/distribution.hpp"

using lea::DistributionSpec;
using lea::Index;
using Catch::Matchers::WithinAbs;

namespace {

double boost_first_moment(const DistributionSpec& spec, double lo, double hi) {
  auto f = [&](double t) { return t * spec.pdf(t); };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, lo, hi, 15, 1e-14);
}

}  // namespace

TEST_CASE("quantile thresholds") {
  CHECK(lea::quantile_threshold(DistributionSpec::uniform(), 0.5) == 0.5);
  const double b22 = lea::quantile_threshold(DistributionSpec::beta(2, 2), 0.5);
  CHECK_THAT(b22, WithinAbs(0.5, 1e-12));
  CHECK_THAT(2 * b22 * b22 * b22 - 3 * b22 * b22 + 0.5, WithinAbs(0.0, 1e-12));
  CHECK_THAT(lea::quantile_threshold(DistributionSpec::truncated_gaussian(0.7, 0.1), 0.25),
             WithinAbs(0.77, 0.005));

  for (const auto& spec : {DistributionSpec::beta(2, 4), DistributionSpec::beta(0.5, 3),
                           DistributionSpec::truncated_gaussian(0.3, 0.2)}) {
    for (double k : {0.1, 0.25, 0.5, 0.75, 0.9}) {
      const double t = lea::quantile_threshold(spec, k);
      CHECK(std::abs(spec.cdf(t) - (1.0 - k)) <= 1e-9);
    }
  }
  const lea::EmpiricalCdf cdf({0.1, 0.9, 0.5, 0.3});
  CHECK(lea::quantile_threshold(cdf, 2) == 0.5);
}

TEST_CASE("optimal value mass per family") {
  CHECK(lea::optimal_value_mass(DistributionSpec::uniform(), 0.5) == 0.375);
  const auto b22 = DistributionSpec::beta(2, 2);
  CHECK_THAT(lea::optimal_value_mass(b22, lea::quantile_threshold(b22, 0.5)),
             WithinAbs(0.34, 0.005));
  const auto g = DistributionSpec::truncated_gaussian(0.5, 0.15);
  CHECK_THAT(lea::optimal_value_mass(g, lea::quantile_threshold(g, 0.5)),
             WithinAbs(0.31, 0.005));

  for (const auto& spec : {DistributionSpec::beta(2, 2), DistributionSpec::beta(3, 3),
                           DistributionSpec::beta(2, 4), DistributionSpec::beta(2.5, 1.7),
                           DistributionSpec::truncated_gaussian(0.7, 0.1),
                           DistributionSpec::truncated_gaussian(1.3, 0.4)}) {
    for (double t : {0.0, 0.2, 0.5, 0.81}) {
      CHECK_THAT(lea::optimal_value_mass(spec, t),
                 WithinAbs(boost_first_moment(spec, t, 1.0), 1e-8));
    }
  }
}

TEST_CASE("beta cdf agrees with boost") {
  const boost::math::beta_distribution<double> d(3.0, 3.0);
  const auto spec = DistributionSpec::beta(3, 3);
  for (double t = 0.05; t < 1.0; t += 0.1) {
    CHECK_THAT(spec.cdf(t), WithinAbs(boost::math::cdf(d, t), 1e-12));
  }
}

TEST_CASE("density suprema") {
  CHECK(lea::density_sup(DistributionSpec::uniform()) == 1.0);
  CHECK_THAT(lea::density_sup(DistributionSpec::beta(2, 2)), WithinAbs(1.5, 1e-12));
  CHECK_THAT(lea::density_sup(DistributionSpec::truncated_gaussian(0.5, 0.15)),
             WithinAbs(2.66, 0.005));
  CHECK(std::isinf(lea::density_sup(DistributionSpec::beta(0.5, 2))));
  CHECK_THAT(lea::density_sup(DistributionSpec::beta(1, 3)), WithinAbs(3.0, 1e-12));
  // Mode outside [0,1]: the sup sits at the nearer endpoint.
  const auto g = DistributionSpec::truncated_gaussian(1.3, 0.4);
  CHECK_THAT(lea::density_sup(g), WithinAbs(g.pdf(1.0), 1e-15));
}

TEST_CASE("gamma values for the worked budgets") {
  // Oracle values computed independently with scipy.stats.
  struct Case {
    DistributionSpec spec;
    double k;
    double gamma;
  };
  const Case cases[] = {
      {DistributionSpec::beta(2, 2), 0.25, 0.12829},
      {DistributionSpec::beta(2, 2), 0.5, 0.16925},
      {DistributionSpec::beta(2, 2), 0.75, 0.19311},
      {DistributionSpec::beta(3, 3), 0.25, 0.11136},
      {DistributionSpec::beta(3, 3), 0.5, 0.14790},
      {DistributionSpec::beta(2, 4), 0.25, 0.09249},
      {DistributionSpec::beta(2, 4), 0.75, 0.13397},
      {DistributionSpec::truncated_gaussian(0.5, 0.15), 0.5, 0.12059},
      {DistributionSpec::truncated_gaussian(0.3, 0.2), 0.75, 0.13229},
      {DistributionSpec::truncated_gaussian(0.7, 0.1), 0.25, 0.08037},
      {DistributionSpec::uniform(), 1.0, 0.25},
  };
  for (const auto& c : cases) {
    CHECK_THAT(lea::gamma_for(c.spec, c.k), WithinAbs(c.gamma, 1e-5));
  }
}

TEST_CASE("gamma table csv layout") {
  std::ostringstream out;
  lea::write_gamma_table(out, lea::gamma_table(DistributionSpec::beta(2, 2), {0.5}));
  const auto text = out.str();
  CHECK(text.rfind("family,params,K_over_M,tau_K,V_opt,c,gamma\nbeta,alpha=2;beta=2,0.5,", 0) == 0);
}

TEST_CASE("family parsing") {
  CHECK(DistributionSpec::parse("uniform").family() == lea::Family::Uniform);
  CHECK(DistributionSpec::parse("beta:2,4").p2() == 4.0);
  CHECK(DistributionSpec::parse("gauss:0.5,0.15").family() == lea::Family::TruncatedGaussian);
  CHECK_THROWS_AS(DistributionSpec::parse("cauchy:1,2"), lea::IoError);
  CHECK_THROWS_AS(DistributionSpec::parse("beta:2"), lea::IoError);
  CHECK_THROWS_AS(DistributionSpec::parse("beta:-1,2"), lea::DomainError);
}

TEST_CASE("discrete regularity") {
  const Index M = 100;
  std::vector<double> grid;
  for (Index i = 0; i < M; ++i) grid.push_back(double(i) / double(M - 1));
  CHECK(lea::check_regularity(grid, 1.0 / double(M)).c_hat <= 2.0);

  const double eps = 0.02;
  std::vector<double> spikes;
  for (int i = 0; i < 50; ++i) spikes.push_back(0.5 - 2 * eps);
  for (int i = 0; i < 50; ++i) spikes.push_back(0.5 + 2 * eps);
  CHECK(lea::check_regularity(spikes, eps).c_hat >= 1.0 / (4 * eps) - 1e-12);

  const auto point = lea::check_regularity({0.5, 0.5, 0.5}, 0.1);
  CHECK_THAT(point.c_hat, WithinAbs(1.0 / 0.2, 1e-12));
  CHECK(point.worst_lo <= 0.5);
  CHECK(point.worst_hi >= 0.5);
  CHECK(point.is_regular_at(5.0));
  CHECK_FALSE(point.is_regular_at(4.0));

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<double> v(1 + rng() % 40);
    for (auto& x : v) x = unif(rng);
    CHECK(lea::check_regularity(v, 0.01 + 0.4 * unif(rng)).c_hat >= 1.0);
  }
}

TEST_CASE("analytic regularity uses the density sup") {
  const auto r = lea::check_regularity(DistributionSpec::beta(2, 2), 0.05);
  CHECK_THAT(r.c_hat, WithinAbs(1.5, 1e-12));
  CHECK_THAT(r.worst_lo, WithinAbs(0.45, 1e-12));
}

TEST_CASE("cdf bracket contains the truth under perturbation") {
  const Index M = 60;
  lea::Vector<double> grid = lea::Vector<double>::LinSpaced(M, 0.0, 1.0);
  const auto truth = lea::EmpiricalCdf::of(grid);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  const double rho = 0.03;
  for (int rep = 0; rep < 10000; ++rep) {
    lea::Vector<double> hat = grid;
    for (Index u = 0; u < M; ++u) hat(u) += rho * unif(rng);
    const lea::EstimateProfile<double> est(hat, rho, 0.05);
    const double t = 0.5 * (unif(rng) + 1.0);
    const auto [lo, hi] = lea::cdf_bracket(est, t);
    CHECK(lo <= hi);
    CHECK(lo <= truth.eval(t));
    CHECK(truth.eval(t) <= hi);
  }
  const lea::EstimateProfile<double> exact(grid, 1e-12, 0.05);
  const auto [lo, hi] = lea::cdf_bracket(exact, 0.5);
  CHECK(lo == hi);
}

TEST_CASE("near-threshold mass counts") {
  const Index M = 100;
  lea::Vector<double> grid = lea::Vector<double>::LinSpaced(M, 0.0, 1.0);
  const lea::EstimateProfile<double> est(grid, 0.05, 0.05);
  const double tau_hat_K = grid(M - 50);
  const Index n = lea::near_threshold_mass_bound(est, tau_hat_K);
  CHECK(std::abs(double(n) - 30.0) <= 1.0);

  lea::Vector<double> spikes(100);
  spikes.head(50).setConstant(0.46);
  spikes.tail(50).setConstant(0.54);
  // Spikes at 0.5 +- 2 eps with eps = 0.02 and rho = 2 eps.
  const lea::EstimateProfile<double> s(spikes, 0.04, 0.05);
  CHECK(lea::near_threshold_mass_bound(s, 0.54) == 100);
}
