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

#ifndef LEA_ALLOCATOR_HPP_
#define LEA_ALLOCATOR_HPP_

#include <cmath>
#include <string>

#include "lea/effects.hpp"
#include "lea/sampling.hpp"

namespace lea {

// What the estimate side alone knows about an allocation.
template <typename Scalar>
struct Selection {
  IndexList selected;
  Scalar tau_hat_K = Scalar(0);
};

// Top K units by estimate.
template <typename Derived>
Selection<typename Derived::Scalar> top_k(const Eigen::DenseBase<Derived>& tau_hats,
                                          Index K) {
  check_budget(K, tau_hats.size());
  const IndexList order = rank_descending(tau_hats);
  Selection<typename Derived::Scalar> out;
  out.selected.assign(order.begin(), order.begin() + K);
  out.tau_hat_K = tau_hats(order[std::size_t(K - 1)]);
  return out;
}

template <typename Scalar>
Selection<Scalar> lea_allocate(const EstimateProfile<Scalar>& estimates, Index K) {
  return top_k(estimates.tau_hats(), K);
}

// Simulator-side variant that also scores the choice against ground truth.
template <typename Scalar>
AllocationResult<Scalar> lea_allocate(const TreatmentEffectProfile<Scalar>& profile,
                                      const EstimateProfile<Scalar>& estimates, Index K) {
  if (estimates.size() != profile.size()) throw DomainError("estimate/profile size mismatch");
  auto pick = lea_allocate(estimates, K);
  return score_selection(profile, std::move(pick.selected), pick.tau_hat_K);
}

// 1 - 4 rho K0 / (gamma_1 M + (tau_K + 2 rho) K0), clamped to [0,1].
template <typename Scalar>
Scalar accuracy_lower_bound(const ThresholdNeighborhood<Scalar>& nbhd, Scalar rho,
                            Scalar tau_K) {
  const Scalar k0 = Scalar(nbhd.K0);
  const Scalar denom = nbhd.gamma_1 * Scalar(nbhd.M) + (tau_K + 2 * rho) * k0;
  if (denom == Scalar(0)) return Scalar(1);
  return std::clamp(Scalar(1) - 4 * rho * k0 / denom, Scalar(0), Scalar(1));
}

template <typename Scalar>
Scalar accuracy_lower_bound(const ThresholdNeighborhood<Scalar>& nbhd) {
  return accuracy_lower_bound(nbhd, nbhd.rho, nbhd.tau_K);
}

template <typename Scalar>
struct GeneralBound {
  Scalar conservative = Scalar(1);  // drops 2 rho theta_K from the denominator
  Scalar full = Scalar(1);
  // The conservative form is never larger; it binds unless theta_K = 0.
  std::string binding;
};

template <typename Scalar>
Scalar general_accuracy_bound(Scalar theta_K, Scalar gamma_1, Scalar tau_K, Scalar gamma,
                              Scalar epsilon) {
  if (theta_K < 0 || gamma_1 < 0 || tau_K < 0 || gamma < 0 || epsilon < 0) {
    throw DomainError("general bound inputs must be nonnegative");
  }
  const Scalar denom = gamma_1 + tau_K * theta_K;
  if (denom == Scalar(0)) throw DomainError("general bound has zero denominator");
  using std::sqrt;
  return Scalar(1) - 4 * gamma * theta_K * sqrt(epsilon) / denom;
}

template <typename Scalar>
GeneralBound<Scalar> general_accuracy_bounds(Scalar theta_K, Scalar gamma_1, Scalar tau_K,
                                             Scalar gamma, Scalar epsilon) {
  GeneralBound<Scalar> out;
  out.conservative = general_accuracy_bound(theta_K, gamma_1, tau_K, gamma, epsilon);
  using std::sqrt;
  const Scalar rho = gamma * sqrt(epsilon);
  out.full = Scalar(1) - 4 * rho * theta_K / (gamma_1 + (tau_K + 2 * rho) * theta_K);
  out.binding = out.conservative < out.full ? "conservative" : "equal";
  return out;
}

// Baseline that estimates every unit to accuracy tau_K * epsilon / 2.  The
// threshold comes from ground truth; this only exists inside the simulator.
AllocationResult<double> fullcate_allocate(const TreatmentEffectProfile<double>& profile,
                                           Index K, double epsilon, double delta,
                                           const RngSeed& seed);
SamplePlan fullcate_plan_for(const TreatmentEffectProfile<double>& profile, Index K,
                             double epsilon, double delta);

struct LeaRun {
  SamplePlan plan;
  EstimateProfile<double> estimates;
  AllocationResult<double> result;
};

// Sample at rho = gamma sqrt(epsilon), then pick the top K.
LeaRun run_lea(const TreatmentEffectProfile<double>& profile, const BudgetSpec& budget,
               double delta, const RngSeed& seed);

}  // namespace lea

#endif  // LEA_ALLOCATOR_HPP_
