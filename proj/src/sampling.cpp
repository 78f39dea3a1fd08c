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

#include "lea/sampling.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace lea {

namespace {

constexpr std::uint64_t kAllocationSlot = std::uint64_t{1} << 40;

void check_unit_interval(double x, const char* name) {
  if (!(x > 0.0 && x < 1.0)) throw DomainError(std::string(name) + " must lie in (0,1)");
}

std::int64_t bernoulli_successes(std::mt19937_64& engine, double p, std::int64_t n) {
  std::int64_t hits = 0;
  for (std::int64_t i = 0; i < n; ++i) hits += unit_uniform(engine) < p;
  return hits;
}

}  // namespace

std::string to_string(Regime regime) {
  switch (regime) {
    case Regime::FullCATE: return "FullCATE";
    case Regime::LEA: return "LEA";
    case Regime::Custom: return "Custom";
  }
  return "Custom";
}

std::string to_string(SamplingMode mode) {
  return mode == SamplingMode::EqualPerUnit ? "EqualPerUnit" : "UniformRandomUnit";
}

std::mt19937_64 make_engine(const RngSeed& seed, std::uint64_t slot) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed.seed),
                    static_cast<std::uint32_t>(seed.seed >> 32),
                    static_cast<std::uint32_t>(seed.stream),
                    static_cast<std::uint32_t>(seed.stream >> 32),
                    static_cast<std::uint32_t>(slot),
                    static_cast<std::uint32_t>(slot >> 32)};
  return std::mt19937_64(seq);
}

std::int64_t ceil_count(double x) {
  const double nearest = std::nearbyint(x);
  if (std::abs(x - nearest) <= 1e-9 * std::max(1.0, std::abs(x))) {
    return static_cast<std::int64_t>(nearest);
  }
  return static_cast<std::int64_t>(std::ceil(x));
}

std::int64_t hoeffding_per_unit(Index M, double rho, double delta) {
  if (M < 1) throw DomainError("M must be positive");
  if (!(rho > 0.0)) throw DomainError("rho must be positive");
  check_unit_interval(delta, "delta");
  return ceil_count(std::log(2.0 * double(M) / delta) / (2.0 * rho * rho));
}

double hoeffding_rho(Index M, std::int64_t n, double delta) {
  if (n <= 0) return std::numeric_limits<double>::infinity();
  return std::sqrt(std::log(2.0 * double(M) / delta) / (2.0 * double(n)));
}

SamplePlan fullcate_sample_size(Index M, double epsilon, double delta) {
  check_unit_interval(epsilon, "epsilon");
  check_unit_interval(delta, "delta");
  SamplePlan plan;
  plan.M = M;
  plan.per_unit = hoeffding_per_unit(M, epsilon, delta);
  plan.total = plan.per_unit * M;
  plan.regime = Regime::FullCATE;
  plan.rho_effective = epsilon;
  plan.delta = delta;
  return plan;
}

SamplePlan lea_sample_size(Index M, double epsilon, double delta, double gamma) {
  check_unit_interval(epsilon, "epsilon");
  check_unit_interval(delta, "delta");
  if (!(gamma > 0.0)) throw DomainError("gamma must be positive");
  SamplePlan plan;
  plan.M = M;
  plan.rho_effective = gamma * std::sqrt(epsilon);
  plan.per_unit = hoeffding_per_unit(M, plan.rho_effective, delta);
  plan.total = plan.per_unit * M;
  plan.regime = Regime::LEA;
  plan.delta = delta;
  return plan;
}

SamplePlan protocol_sample_size(Index M, double epsilon, double delta) {
  check_unit_interval(epsilon, "epsilon");
  check_unit_interval(delta, "delta");
  if (M < 1) throw DomainError("M must be positive");
  SamplePlan plan;
  plan.M = M;
  plan.per_unit = static_cast<std::int64_t>(
      std::floor(std::log(2.0 * double(M) / delta) / epsilon));
  plan.total = plan.per_unit * M;
  plan.regime = Regime::LEA;
  plan.rho_effective = hoeffding_rho(M, plan.per_unit, delta);
  plan.delta = delta;
  return plan;
}

SamplePlan custom_plan(Index M, std::int64_t total, double delta) {
  check_unit_interval(delta, "delta");
  if (M < 1) throw DomainError("M must be positive");
  if (total < 0) throw DomainError("negative sample total");
  SamplePlan plan;
  plan.M = M;
  plan.total = total;
  plan.per_unit = total / M;
  plan.regime = Regime::Custom;
  plan.rho_effective = hoeffding_rho(M, std::max<std::int64_t>(plan.per_unit, 1), delta);
  plan.delta = delta;
  return plan;
}

EstimateProfile<double> draw_estimates(const TreatmentEffectProfile<double>& profile,
                                       const SamplePlan& plan, const RngSeed& seed,
                                       SamplingMode mode) {
  const Index M = profile.size();
  std::vector<std::int64_t> draws(static_cast<std::size_t>(M), 0);
  if (mode == SamplingMode::EqualPerUnit) {
    std::fill(draws.begin(), draws.end(), plan.per_unit);
  } else {
    auto picker = make_engine(seed, kAllocationSlot);
    for (std::int64_t i = 0; i < plan.total; ++i) {
      const auto u = static_cast<std::size_t>(unit_uniform(picker) * double(M));
      ++draws[std::min(u, std::size_t(M - 1))];
    }
  }

  Vector<double> tau_hats(M);
  for (Index u = 0; u < M; ++u) {
    const std::int64_t n = draws[std::size_t(u)];
    if (n == 0) {
      tau_hats(u) = 0.0;
      continue;
    }
    auto engine = make_engine(seed, static_cast<std::uint64_t>(u));
    tau_hats(u) = double(bernoulli_successes(engine, profile(u), n)) / double(n);
  }
  const double rho = std::isfinite(plan.rho_effective) && plan.rho_effective > 0.0
                         ? plan.rho_effective
                         : 1.0;
  EstimateProfile<double> est(std::move(tau_hats), rho, plan.delta, plan.per_unit);
  est.set_draws(std::move(draws));
  return est;
}

}  // namespace lea
