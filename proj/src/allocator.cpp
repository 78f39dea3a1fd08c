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

#include "lea/allocator.hpp"

namespace lea {

SamplePlan fullcate_plan_for(const TreatmentEffectProfile<double>& profile, Index K,
                             double epsilon, double delta) {
  const double tau_K = profile.kth_largest(K);
  if (!(tau_K > 0.0)) throw DomainError("threshold zero: ε′ undefined");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw DomainError("epsilon must lie in (0,1)");
  return fullcate_sample_size(profile.size(), tau_K * epsilon / 2.0, delta);
}

AllocationResult<double> fullcate_allocate(const TreatmentEffectProfile<double>& profile,
                                           Index K, double epsilon, double delta,
                                           const RngSeed& seed) {
  const SamplePlan plan = fullcate_plan_for(profile, K, epsilon, delta);
  const auto estimates = draw_estimates(profile, plan, seed, SamplingMode::EqualPerUnit);
  return lea_allocate(profile, estimates, K);
}

LeaRun run_lea(const TreatmentEffectProfile<double>& profile, const BudgetSpec& budget,
               double delta, const RngSeed& seed) {
  budget.validate(profile.size());
  SamplePlan plan = lea_sample_size(profile.size(), budget.epsilon, delta, budget.gamma);
  auto estimates = draw_estimates(profile, plan, seed, SamplingMode::EqualPerUnit);
  auto result = lea_allocate(profile, estimates, budget.K);
  return {plan, std::move(estimates), std::move(result)};
}

}  // namespace lea
