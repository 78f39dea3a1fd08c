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

#ifndef LEA_FLEX_BUDGET_HPP_
#define LEA_FLEX_BUDGET_HPP_

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "lea/certificate.hpp"
#include "lea/effects.hpp"

namespace lea {

struct FlexBudgetResult {
  Index original_K = 0;
  std::optional<Index> nearest_Kprime;
  std::optional<Index> nearest_underspend_Kprime;
  std::optional<Index> overspend_S;
  // ((4 rho - eps (tau_K + 2 rho)) K0 - eps V(A1)) / (tau_K - 2 rho); absent
  // when tau_K <= 2 rho.
  std::optional<double> overspend_closed_form;
  std::optional<double> kappa_needed;

  std::optional<Index> slide_distance() const {
    if (!nearest_Kprime) return std::nullopt;
    return *nearest_Kprime > original_K ? *nearest_Kprime - original_K
                                        : original_K - *nearest_Kprime;
  }
  std::optional<Index> underspend_distance() const {
    if (!nearest_underspend_Kprime) return std::nullopt;
    return original_K - *nearest_underspend_Kprime;
  }
};

// Prefix sums of true effects in estimate order and in true order, so the
// LEA value and the optimum for every budget are O(1) lookups.
template <typename Scalar>
class PrefixTable {
 public:
  PrefixTable(const TreatmentEffectProfile<Scalar>& profile,
              const EstimateProfile<Scalar>& estimates) {
    if (profile.size() != estimates.size()) {
      throw DomainError("estimate/profile size mismatch");
    }
    const Index M = profile.size();
    const IndexList by_hat = rank_descending(estimates.tau_hats());
    lea_.assign(std::size_t(M + 1), Scalar(0));
    opt_.assign(std::size_t(M + 1), Scalar(0));
    for (Index i = 0; i < M; ++i) {
      lea_[std::size_t(i + 1)] = lea_[std::size_t(i)] + profile(by_hat[std::size_t(i)]);
      opt_[std::size_t(i + 1)] =
          opt_[std::size_t(i)] + profile(profile.ranking()[std::size_t(i)]);
    }
  }

  Index size() const { return Index(lea_.size()) - 1; }
  Scalar lea_value(Index K) const { return lea_[std::size_t(K)]; }
  Scalar optimal_value(Index K) const { return opt_[std::size_t(K)]; }
  bool works(Index K, Scalar epsilon) const {
    return lea_value(K) >= (Scalar(1) - epsilon) * optimal_value(K);
  }

 private:
  std::vector<Scalar> lea_;
  std::vector<Scalar> opt_;
};

// Closest budget whose own LEA allocation is (1-eps)-optimal for itself.
// Searches K, K-1, K+1, K-2, ... inside [lo, hi] (default [1, M]); the
// underspend search only goes down.
template <typename Scalar>
FlexBudgetResult slide_budget(const PrefixTable<Scalar>& table, Index K, Scalar epsilon,
                              bool underspend_only = false, Index lo = 1, Index hi = -1) {
  const Index M = table.size();
  check_budget(K, M);
  if (hi < 0) hi = M;
  lo = std::max<Index>(lo, 1);
  hi = std::min(hi, M);
  FlexBudgetResult out;
  out.original_K = K;
  for (Index k = K; k >= lo; --k) {
    if (k <= hi && table.works(k, epsilon)) {
      out.nearest_underspend_Kprime = k;
      break;
    }
  }
  if (underspend_only) {
    out.nearest_Kprime = out.nearest_underspend_Kprime;
    return out;
  }
  for (Index d = 0; K - d >= lo || K + d <= hi; ++d) {
    const Index down = K - d;
    const Index up = K + d;
    if (down >= lo && down <= hi && table.works(down, epsilon)) {
      out.nearest_Kprime = down;
      break;
    }
    if (d > 0 && up <= hi && up >= lo && table.works(up, epsilon)) {
      out.nearest_Kprime = up;
      break;
    }
  }
  return out;
}

template <typename Scalar>
FlexBudgetResult slide_budget(const TreatmentEffectProfile<Scalar>& profile,
                              const EstimateProfile<Scalar>& estimates, Index K,
                              Scalar epsilon, bool underspend_only = false, Index lo = 1,
                              Index hi = -1) {
  return slide_budget(PrefixTable<Scalar>(profile, estimates), K, epsilon, underspend_only,
                      lo, hi);
}

template <typename Scalar>
std::optional<double> overspend_closed_form(const TreatmentEffectProfile<Scalar>& profile,
                                            Index K, Scalar rho, Scalar epsilon) {
  const auto n = threshold_neighborhood(profile, K, rho);
  const double denom = double(n.tau_K - 2 * rho);
  if (!(denom > 0.0)) return std::nullopt;
  return ((4.0 * double(rho) - double(epsilon) * double(n.tau_K + 2 * rho)) * double(n.K0) -
          double(epsilon) * double(n.v_A1)) /
         denom;
}

// Extra units, taken in estimate order after the top K, until the value
// reaches (1-eps) times the optimum for the ORIGINAL budget K.
template <typename Scalar>
FlexBudgetResult overspend_units(const PrefixTable<Scalar>& table, Index K, Scalar epsilon,
                                 Index S_max) {
  const Index M = table.size();
  check_budget(K, M);
  if (S_max < 0 || S_max > M - K) throw DomainError("S_max must lie in [0, M-K]");
  FlexBudgetResult out;
  out.original_K = K;
  const Scalar target = (Scalar(1) - epsilon) * table.optimal_value(K);
  for (Index s = 0; s <= S_max; ++s) {
    if (table.lea_value(K + s) >= target) {
      out.overspend_S = s;
      break;
    }
  }
  return out;
}

template <typename Scalar>
FlexBudgetResult overspend_units(const TreatmentEffectProfile<Scalar>& profile,
                                 const EstimateProfile<Scalar>& estimates, Index K,
                                 Scalar epsilon, Index S_max) {
  auto out = overspend_units(PrefixTable<Scalar>(profile, estimates), K, epsilon, S_max);
  out.overspend_closed_form = overspend_closed_form(profile, K, estimates.rho(), epsilon);
  return out;
}

// Expected value of a uniformly random K-subset: K times the mean effect.
template <typename Scalar>
Scalar random_allocation_value(const TreatmentEffectProfile<Scalar>& profile, Index K) {
  check_budget(K, profile.size());
  return Scalar(K) * profile.taus().mean();
}

// Extra units a random allocation needs, in expectation, to reach (1-eps)
// times the optimum for the original budget.
template <typename Scalar>
std::optional<Index> random_overspend(const TreatmentEffectProfile<Scalar>& profile,
                                      Index K, Scalar epsilon) {
  const Scalar target = (Scalar(1) - epsilon) * optimal_value(profile, K);
  for (Index k = K; k <= profile.size(); ++k) {
    if (random_allocation_value(profile, k) >= target) return k - K;
  }
  return std::nullopt;
}

enum class KappaCase { Expected, WorstCase };

namespace detail {

template <typename Scalar>
Scalar kappa_from(Scalar loss, Scalar scale, Scalar epsilon) {
  if (epsilon == Scalar(0)) {
    return loss <= Scalar(0) ? Scalar(0) : std::numeric_limits<Scalar>::infinity();
  }
  if (scale <= Scalar(0)) return Scalar(0);
  return std::max(Scalar(0), loss / (epsilon * scale));
}

template <typename Scalar>
Scalar allocation_loss(const TreatmentEffectProfile<Scalar>& profile, Index K,
                       KappaCase which, Scalar rho) {
  const Scalar opt = optimal_value(profile, K);
  const Scalar got = which == KappaCase::Expected ? random_allocation_value(profile, K)
                                                  : worst_case_value(profile, K, rho);
  return opt - got;
}

}  // namespace detail

// Smallest kappa with V_alloc >= (1 - kappa eps) V* on this instance.  The
// expected case scores a uniformly random K-subset; the worst case scores the
// adversarial within-rho LEA output.
template <typename Scalar>
Scalar kappa_relaxation(const TreatmentEffectProfile<Scalar>& profile, Index K,
                        Scalar epsilon, KappaCase which = KappaCase::Expected,
                        Scalar rho = Scalar(0)) {
  if (which == KappaCase::WorstCase && !(rho > Scalar(0))) {
    throw DomainError("worst-case kappa needs rho > 0");
  }
  const Scalar loss = detail::allocation_loss(profile, K, which, rho);
  return detail::kappa_from(loss, optimal_value(profile, K), epsilon);
}

struct TwoSpikes {
  Index M = 2;
  double epsilon = 0.05;
};

// M/2 units at 1/2 - 2 eps followed by M/2 units at 1/2 + 2 eps.
inline TreatmentEffectProfile<double> two_spikes_instance(Index M, double epsilon) {
  if (M < 2 || M % 2 != 0) throw DomainError("two-spikes needs an even M >= 2");
  if (!(epsilon >= 0.0 && epsilon < 0.25)) throw DomainError("two-spikes needs eps in [0, 1/4)");
  Vector<double> taus(M);
  taus.head(M / 2).setConstant(0.5 - 2.0 * epsilon);
  taus.tail(M / 2).setConstant(0.5 + 2.0 * epsilon);
  return TreatmentEffectProfile<double>(std::move(taus));
}

// Kappa for the two-spikes family, to first order in eps: the loss at eps
// divided by eps times the optimum of the collapsed (eps = 0) instance.  The
// loss is linear in eps, so this is the coefficient the relaxation needs as
// eps -> 0.  The worst case lets the adversary shift by rho = 2 eps, enough to
// swap the spikes.
inline double kappa_relaxation(const TwoSpikes& family, Index K, KappaCase which) {
  const auto instance = two_spikes_instance(family.M, family.epsilon);
  const auto collapsed = two_spikes_instance(family.M, 0.0);
  const double loss =
      detail::allocation_loss(instance, K, which, std::max(2.0 * family.epsilon, 1e-300));
  return detail::kappa_from(loss, optimal_value(collapsed, K), family.epsilon);
}

}  // namespace lea

#endif  // LEA_FLEX_BUDGET_HPP_
