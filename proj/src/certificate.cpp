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

#include "lea/certificate.hpp"

#include <algorithm>

namespace lea {

double exact_condition_loss(const DistributionSpec& spec, double K_over_M, double rho) {
  if (!(rho > 0.0)) throw DomainError("rho must be positive");
  const double tau_K = quantile_threshold(spec, K_over_M);
  const double v_opt = optimal_value_mass(spec, tau_K);
  if (v_opt <= 0.0) return 0.0;
  const double top = std::min(tau_K + 2.0 * rho, 1.0);
  const double theta = spec.cdf(top) - spec.cdf(tau_K);
  const double v_D = spec.first_moment(tau_K, top);
  // Pack the same mass as low as possible, starting at tau_K - 2 rho.
  const double floor = std::max(tau_K - 2.0 * rho, 0.0);
  const double ceiling = spec.quantile(std::min(1.0, spec.cdf(floor) + theta));
  const double v_worst = spec.first_moment(floor, ceiling);
  return (v_D - v_worst) / v_opt;
}

bool exact_condition(const DistributionSpec& spec, double K_over_M, double rho,
                     double epsilon) {
  return exact_condition_loss(spec, K_over_M, rho) <= epsilon;
}

}  // namespace lea
