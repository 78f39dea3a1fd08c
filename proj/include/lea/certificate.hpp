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

#ifndef LEA_CERTIFICATE_HPP_
#define LEA_CERTIFICATE_HPP_

#include <algorithm>
#include <limits>
#include <string>
#include <vector>

#include "lea/allocator.hpp"
#include "lea/distribution.hpp"
#include "lea/effects.hpp"

namespace lea {

// Loss of the alpha_K worst case, (V_{U*}(D) - V^0) / V*.
template <typename Scalar>
Scalar exact_condition_loss(const TreatmentEffectProfile<Scalar>& profile, Index K,
                            Scalar rho) {
  const auto n = threshold_neighborhood(profile, K, rho);
  if (n.v_opt <= Scalar(0)) return Scalar(0);
  return (n.v_opt_D - n.v_near_worst) / n.v_opt;
}

// V_{U*}(D) - V^0 <= epsilon V*, with V^0 the near-threshold units packed
// into [tau_K - 2 rho, tau_K - alpha_K].
template <typename Scalar>
bool exact_condition(const TreatmentEffectProfile<Scalar>& profile, Index K, Scalar rho,
                     Scalar epsilon) {
  const auto n = threshold_neighborhood(profile, K, rho);
  return n.v_opt_D - n.v_near_worst <= epsilon * n.v_opt;
}

// Continuous version on an effect distribution, budget given as K/M.
double exact_condition_loss(const DistributionSpec& spec, double K_over_M, double rho);
bool exact_condition(const DistributionSpec& spec, double K_over_M, double rho,
                     double epsilon);

// Smallest total effect LEA can end up with when every estimate is within rho
// of the truth (ties resolved against the allocator).  The lowest selected
// unit sits at some w; everything above w + 2 rho is forced in and the
// remaining slots take the cheapest units at or above w.
template <typename Scalar>
Scalar worst_case_value(const TreatmentEffectProfile<Scalar>& profile, Index K, Scalar rho) {
  check_budget(K, profile.size());
  const std::vector<Scalar> w = sorted_ascending(profile.taus());
  const Index M = Index(w.size());
  std::vector<Scalar> prefix(w.size() + 1, Scalar(0));
  for (std::size_t i = 0; i < w.size(); ++i) prefix[i + 1] = prefix[i] + w[i];

  Scalar best = std::numeric_limits<Scalar>::infinity();
  for (Index i = 0; i < M; ++i) {
    const auto above = std::upper_bound(w.begin(), w.end(), w[std::size_t(i)] + 2 * rho);
    const Index forced = Index(w.end() - above);
    const Index rest = K - forced;
    if (rest < 1 || (M - forced) - i < rest) continue;
    const Scalar value = (prefix[std::size_t(M)] - prefix[std::size_t(M - forced)]) +
                         (prefix[std::size_t(i + rest)] - prefix[std::size_t(i)]);
    best = std::min(best, value);
  }
  return best;
}

template <typename Scalar>
Scalar worst_case_ratio(const TreatmentEffectProfile<Scalar>& profile, Index K, Scalar rho) {
  const Scalar opt = optimal_value(profile, K);
  if (opt <= Scalar(0)) return Scalar(1);
  return worst_case_value(profile, K, rho) / opt;
}

template <typename Scalar>
struct CertificateReport {
  Index M = 0;
  Index K = 0;
  Scalar rho = Scalar(0);
  Scalar epsilon = Scalar(0);
  Scalar tau_hat_K = Scalar(0);
  Index K0_lower = 0;
  Scalar v_opt_lower = Scalar(0);
  Scalar v_D_upper = Scalar(0);
  Scalar v_ltk0_lower = Scalar(0);
  Scalar gap_upper = std::numeric_limits<Scalar>::infinity();
  bool certified = false;
  std::string reason;
};

// Estimate-only bound on the suboptimality of the top-K-by-estimate choice.
template <typename Scalar>
CertificateReport<Scalar> certify_from_estimates(const EstimateProfile<Scalar>& estimates,
                                                 Index K, Scalar epsilon) {
  check_budget(K, estimates.size());
  if (!(epsilon > Scalar(0) && epsilon < Scalar(1))) {
    throw DomainError("epsilon must lie in (0,1)");
  }
  const auto& hat = estimates.tau_hats();
  const Scalar rho = estimates.rho();
  const auto clamp01 = [](Scalar x) { return std::clamp(x, Scalar(0), Scalar(1)); };

  CertificateReport<Scalar> r;
  r.M = estimates.size();
  r.K = K;
  r.rho = rho;
  r.epsilon = epsilon;
  r.tau_hat_K = top_k(hat, K).tau_hat_K;
  const Scalar t = r.tau_hat_K;

  Index strictly_above = 0;
  std::vector<Scalar> support;  // estimates at or above t - 3 rho
  for (Index u = 0; u < r.M; ++u) {
    const Scalar x = hat(u);
    if (x >= t + 2 * rho) r.v_opt_lower += clamp01(x - rho);
    if (x >= t - 2 * rho && x <= t + 4 * rho) r.v_D_upper += clamp01(x + rho);
    if (x > t) ++strictly_above;
    if (x >= t - 3 * rho) support.push_back(x);
  }

  // Every unit above tau_K + 2 rho has an estimate above tau_hat_K, so this
  // never exceeds the true K0.
  r.K0_lower = std::max<Index>(0, K - strictly_above);
  std::sort(support.begin(), support.end());
  if (Index(support.size()) < r.K0_lower) {
    r.reason = "insufficient near-threshold support";
    return r;
  }
  for (Index i = 0; i < r.K0_lower; ++i) {
    r.v_ltk0_lower += clamp01(std::max(support[std::size_t(i)] - rho, t - 3 * rho));
  }

  if (r.v_opt_lower <= Scalar(0)) {
    r.reason = "vacuous lower bound";
    return r;
  }
  r.gap_upper = std::max(Scalar(0), r.v_D_upper - r.v_ltk0_lower) / r.v_opt_lower;
  r.certified = r.gap_upper <= epsilon;
  r.reason = r.certified ? "certified" : "gap exceeds epsilon";
  return r;
}

}  // namespace lea

#endif  // LEA_CERTIFICATE_HPP_
