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

#include <algorithm>
#include <cmath>
#include <random>

#include <boost/math/distributions/beta.hpp>

#include "catch_amalgamated.hpp"
#include "lea/allocator.hpp"

using lea::Index;
using lea::IndexList;
using lea::Vector;
using Profile = lea::TreatmentEffectProfile<double>;
using Estimates = lea::EstimateProfile<double>;
using Catch::Matchers::WithinAbs;

namespace {

// Calls f on every estimate vector with tau_hat(u) in {tau-rho, tau, tau+rho}.
template <typename F>
void for_each_pattern(const Vector<double>& tau, double rho, F&& f) {
  const Index M = tau.size();
  Index n = 1;
  for (Index i = 0; i < M; ++i) n *= 3;
  Vector<double> hat(M);
  for (Index code = 0; code < n; ++code) {
    Index c = code;
    for (Index u = 0; u < M; ++u) {
      hat(u) = tau(u) + rho * double(c % 3 - 1);
      c /= 3;
    }
    f(hat);
  }
}

Vector<double> random_profile(std::mt19937_64& rng, Index M) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Vector<double> t(M);
  for (Index u = 0; u < M; ++u) t(u) = unif(rng);
  return t;
}

}  // namespace

TEST_CASE("exact estimates reproduce the optimum") {
  std::mt19937_64 rng(1);
  for (int rep = 0; rep < 100; ++rep) {
    const Profile p(random_profile(rng, 15));
    const Estimates est(p.taus(), 1e-9, 0.05);
    const auto r = lea::lea_allocate(p, est, 6);
    CHECK(r.selected == lea::optimal_allocation(p, 6).selected);
    CHECK(r.ratio == 1.0);
  }
}

TEST_CASE("hand instance within rho") {
  const auto p = Profile::from({0.1, 0.5, 0.9});
  const Estimates est(Vector<double>{{0.15, 0.45, 0.85}}, 0.05, 0.05);
  const auto r = lea::lea_allocate(p, est, 1);
  CHECK(r.selected == IndexList{2});
  CHECK(r.ratio == 1.0);
  CHECK(r.tau_hat_K == 0.85);
}

TEST_CASE("selection guarantees over every extreme perturbation") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int rep = 0; rep < 40; ++rep) {
    const Index M = 2 + Index(rng() % 7);
    const Vector<double> tau = random_profile(rng, M);
    const Profile p(tau);
    const Index K = 1 + Index(rng() % std::uint64_t(M));
    const double rho = 0.02 + 0.15 * unif(rng);
    const double tau_K = p.kth_largest(K);
    const auto opt = lea::optimal_allocation(p, K);
    for_each_pattern(tau, rho, [&](const Vector<double>& hat) {
      const auto pick = lea::top_k(hat, K);
      CHECK(std::abs(pick.tau_hat_K - tau_K) <= rho + 1e-12);
      std::vector<bool> chosen(std::size_t(M), false);
      for (Index u : pick.selected) chosen[std::size_t(u)] = true;
      std::vector<bool> best(std::size_t(M), false);
      for (Index u : opt.selected) best[std::size_t(u)] = true;
      for (Index u = 0; u < M; ++u) {
        if (tau(u) > tau_K + 2 * rho + 1e-12) CHECK(chosen[std::size_t(u)]);
        if (tau(u) < tau_K - 2 * rho - 1e-12) CHECK_FALSE(chosen[std::size_t(u)]);
        if (chosen[std::size_t(u)] != best[std::size_t(u)]) {
          CHECK(std::abs(tau(u) - tau_K) <= 2 * rho + 1e-12);
        }
      }
    });
  }
}

TEST_CASE("accuracy bound is below every realized ratio") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int rep = 0; rep < 30; ++rep) {
    const Index M = 3 + Index(rng() % 6);
    const Vector<double> tau = random_profile(rng, M);
    const Profile p(tau);
    const Index K = 1 + Index(rng() % std::uint64_t(M));
    const double rho = 0.01 + 0.1 * unif(rng);
    const double bound = lea::accuracy_lower_bound(lea::threshold_neighborhood(p, K, rho));
    double worst = 1.0;
    for_each_pattern(tau, rho, [&](const Vector<double>& hat) {
      const Estimates est(hat, rho, 0.05);
      worst = std::min(worst, lea::lea_allocate(p, est, K).ratio);
    });
    CHECK(bound <= worst + 1e-12);
  }
  for (int rep = 0; rep < 200; ++rep) {
    const Index M = 40;
    const Vector<double> tau = random_profile(rng, M);
    const Profile p(tau);
    const double rho = 0.05 * unif(rng) + 0.005;
    const double bound = lea::accuracy_lower_bound(lea::threshold_neighborhood(p, 12, rho));
    Vector<double> hat = tau;
    for (Index u = 0; u < M; ++u) hat(u) += rho * (2 * unif(rng) - 1);
    CHECK(bound <= lea::lea_allocate(p, Estimates(hat, rho, 0.05), 12).ratio + 1e-12);
  }
}

TEST_CASE("accuracy bound special cases") {
  // K0 = 0 cannot happen (tau_K lies in D) so check the zero-denominator path directly.
  lea::ThresholdNeighborhood<double> n;
  n.M = 4;
  CHECK(lea::accuracy_lower_bound(n, 0.1, 0.0) == 1.0);

  // Large grid, median budget, rho = 0.05.  Continuum oracle: K0/M = 2 rho,
  // gamma_1 = (1 - 0.6^2)/2.
  const Index M = 20001;
  const Profile grid(Vector<double>::LinSpaced(M, 0.0, 1.0));
  const double bound = lea::accuracy_lower_bound(lea::threshold_neighborhood(grid, 10001, 0.05));
  CHECK_THAT(bound, WithinAbs(1.0 - 0.2 * 0.1 / (0.32 + 0.6 * 0.1), 1e-3));
  CHECK(bound >= 1.0 - 0.02 / 0.3);
}

TEST_CASE("general bound") {
  CHECK(lea::general_accuracy_bound(0.0, 0.3, 0.5, 0.2, 0.1) == 1.0);
  CHECK_THROWS_AS(lea::general_accuracy_bound(0.0, 0.0, 0.5, 0.2, 0.1), lea::DomainError);
  CHECK_THROWS_AS(lea::general_accuracy_bound(-0.1, 0.3, 0.5, 0.2, 0.1), lea::DomainError);

  // Uniform, theta_K = 2 rho: 1 - factor equals 8 rho^2 / (gamma_1 + tau_K 2 rho).
  const double gamma = 0.2, eps = 0.09, rho = gamma * std::sqrt(eps), tau_K = 0.5;
  const double g1 = (1.0 - (tau_K + 2 * rho) * (tau_K + 2 * rho)) / 2.0;
  CHECK_THAT(1.0 - lea::general_accuracy_bound(2 * rho, g1, tau_K, gamma, eps),
             WithinAbs(8 * rho * rho / (g1 + tau_K * 2 * rho), 1e-15));

  // Beta(2,2) at K/M = 0.5 with gamma = 0.17 and eps = 0.05, closed forms from Boost.
  const boost::math::beta_distribution<double> b22(2.0, 2.0), b32(3.0, 2.0);
  const double r = 0.17 * std::sqrt(0.05);
  const double theta = boost::math::cdf(b22, 0.5 + 2 * r) - boost::math::cdf(b22, 0.5);
  const double gamma_1 = 0.5 * boost::math::cdf(complement(b32, 0.5 + 2 * r));
  const auto both = lea::general_accuracy_bounds(theta, gamma_1, 0.5, 0.17, 0.05);
  CHECK(both.full >= 0.95);
  CHECK(both.conservative <= both.full);
  CHECK(both.binding == "conservative");
}

TEST_CASE("selection is scale free") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> unif(0.1, 10.0);
  for (int rep = 0; rep < 100; ++rep) {
    const Vector<double> hat = random_profile(rng, 25);
    const double s = unif(rng);
    CHECK(lea::top_k(hat, 9).selected == lea::top_k(Vector<double>(s * hat), 9).selected);
  }
}

TEST_CASE("fullcate baseline") {
  const Profile grid(Vector<double>::LinSpaced(20, 0.0, 1.0));
  const auto plan = lea::fullcate_plan_for(grid, 10, 0.1, 0.05);
  const double eps_prime = grid.kth_largest(10) * 0.1 / 2.0;
  CHECK(plan.per_unit == lea::ceil_count(std::log(40.0 / 0.05) / (2 * eps_prime * eps_prime)));

  int failures = 0;
  for (std::uint64_t t = 0; t < 200; ++t) {
    failures += lea::fullcate_allocate(grid, 10, 0.1, 0.05, {17, t}).ratio < 0.9;
  }
  CHECK(failures <= 10 + 5);

  const auto zero = Profile::from({0.0, 0.0, 0.3});
  CHECK_THROWS_WITH(lea::fullcate_allocate(zero, 3, 0.1, 0.05, {1, 0}),
                    Catch::Matchers::ContainsSubstring("threshold zero"));
}

TEST_CASE("run_lea is deterministic and meets the target on a grid") {
  const Profile grid(Vector<double>::LinSpaced(50, 0.0, 1.0));
  const lea::BudgetSpec spec{25, 0.05, 0.25};
  const auto a = lea::run_lea(grid, spec, 0.05, {20251017, 0});
  const auto b = lea::run_lea(grid, spec, 0.05, {20251017, 0});
  CHECK(a.result.selected == b.result.selected);
  CHECK(a.plan.rho_effective == Catch::Approx(0.25 * std::sqrt(0.05)));
  CHECK(a.result.ratio >= 0.95);
}
