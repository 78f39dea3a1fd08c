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

#ifndef LEA_EFFECTS_HPP_
#define LEA_EFFECTS_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "lea/errors.hpp"

namespace lea {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
using Index = Eigen::Index;
using IndexList = std::vector<Index>;

template <typename Scalar>
struct Interval {
  Scalar lo = Scalar(0);
  Scalar hi = Scalar(1);
  bool lo_open = false;
  bool hi_open = false;

  static Interval closed(Scalar a, Scalar b) { return {a, b, false, false}; }
  static Interval open_closed(Scalar a, Scalar b) { return {a, b, true, false}; }
  static Interval closed_open(Scalar a, Scalar b) { return {a, b, false, true}; }

  bool contains(Scalar x) const {
    const bool above = lo_open ? x > lo : x >= lo;
    const bool below = hi_open ? x < hi : x <= hi;
    return above && below;
  }
};

// Unit indices ordered by value descending, index ascending on ties.
template <typename Derived>
IndexList rank_descending(const Eigen::DenseBase<Derived>& values) {
  IndexList order(static_cast<std::size_t>(values.size()));
  std::iota(order.begin(), order.end(), Index{0});
  std::sort(order.begin(), order.end(), [&](Index a, Index b) {
    if (values(a) != values(b)) return values(a) > values(b);
    return a < b;
  });
  return order;
}

// Ascending copy of the entries.
template <typename Derived>
std::vector<typename Derived::Scalar> sorted_ascending(
    const Eigen::DenseBase<Derived>& values) {
  std::vector<typename Derived::Scalar> out(values.derived().data(),
                                            values.derived().data() +
                                                values.size());
  std::sort(out.begin(), out.end());
  return out;
}

inline void check_budget(Index K, Index M) {
  if (K < 1 || K > M) {
    throw DomainError("budget K=" + std::to_string(K) + " outside [1, " +
                      std::to_string(M) + "]");
  }
}

// Ground-truth effects, one per unit, each in [0,1].
template <typename Scalar>
class TreatmentEffectProfile {
 public:
  explicit TreatmentEffectProfile(Vector<Scalar> taus) : taus_(std::move(taus)) {
    if (taus_.size() < 1) throw DomainError("profile needs at least one unit");
    for (Index u = 0; u < taus_.size(); ++u) {
      const Scalar t = taus_(u);
      if (!(t >= Scalar(0) && t <= Scalar(1))) {
        throw DomainError("tau(" + std::to_string(u) + ") outside [0,1]");
      }
    }
    ranking_ = rank_descending(taus_);
  }

  static TreatmentEffectProfile from(const std::vector<Scalar>& taus) {
    return TreatmentEffectProfile(
        Eigen::Map<const Vector<Scalar>>(taus.data(), Index(taus.size())));
  }

  Index size() const { return taus_.size(); }
  const Vector<Scalar>& taus() const { return taus_; }
  Scalar operator()(Index u) const { return taus_(u); }
  const IndexList& ranking() const { return ranking_; }
  Scalar kth_largest(Index K) const {
    check_budget(K, size());
    return taus_(ranking_[static_cast<std::size_t>(K - 1)]);
  }

 private:
  Vector<Scalar> taus_;
  IndexList ranking_;
};

// Coarse estimates together with the accuracy/confidence they were drawn at.
template <typename Scalar>
class EstimateProfile {
 public:
  EstimateProfile(Vector<Scalar> tau_hats, Scalar rho, Scalar delta,
                  std::int64_t samples_per_unit = 0)
      : tau_hats_(std::move(tau_hats)),
        rho_(rho),
        delta_(delta),
        samples_per_unit_(samples_per_unit) {
    if (tau_hats_.size() < 1) throw DomainError("estimates need at least one unit");
    if (!(rho_ > Scalar(0)) || !std::isfinite(static_cast<double>(rho_))) {
      throw DomainError("rho must be positive");
    }
    if (!(delta_ > Scalar(0) && delta_ < Scalar(1))) {
      throw DomainError("delta must lie in (0,1)");
    }
    if (samples_per_unit_ < 0) throw DomainError("negative sample count");
    for (Index u = 0; u < tau_hats_.size(); ++u) {
      if (!std::isfinite(static_cast<double>(tau_hats_(u)))) {
        throw DomainError("non-finite estimate for unit " + std::to_string(u));
      }
    }
    draws_.assign(static_cast<std::size_t>(tau_hats_.size()), samples_per_unit_);
  }

  Index size() const { return tau_hats_.size(); }
  const Vector<Scalar>& tau_hats() const { return tau_hats_; }
  Scalar operator()(Index u) const { return tau_hats_(u); }
  Scalar rho() const { return rho_; }
  Scalar delta() const { return delta_; }
  std::int64_t samples_per_unit() const { return samples_per_unit_; }

  // Realized draw count per unit; equals samples_per_unit unless the
  // estimates came from random-unit sampling.
  const std::vector<std::int64_t>& draws() const { return draws_; }
  void set_draws(std::vector<std::int64_t> draws) {
    if (Index(draws.size()) != size()) throw DomainError("draw count length mismatch");
    draws_ = std::move(draws);
  }
  bool zero_draw(Index u) const { return draws_[static_cast<std::size_t>(u)] == 0; }
  Index zero_draw_count() const {
    return Index(std::count(draws_.begin(), draws_.end(), std::int64_t{0}));
  }

  // Same estimates reinterpreted at another accuracy level.
  EstimateProfile with_rho(Scalar rho) const {
    EstimateProfile copy(tau_hats_, rho, delta_, samples_per_unit_);
    copy.draws_ = draws_;
    return copy;
  }

 private:
  Vector<Scalar> tau_hats_;
  Scalar rho_;
  Scalar delta_;
  std::int64_t samples_per_unit_;
  std::vector<std::int64_t> draws_;
};

struct BudgetSpec {
  Index K = 1;
  double epsilon = 0.1;
  double gamma = 0.5;

  void validate(Index M) const {
    check_budget(K, M);
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw DomainError("epsilon must lie in (0,1)");
    if (!(gamma > 0.0)) throw DomainError("gamma must be positive");
  }
};

template <typename Scalar>
struct AllocationResult {
  IndexList selected;  // in selection order
  Scalar value = Scalar(0);
  Scalar optimal_value = Scalar(0);
  Scalar tau_K = Scalar(0);
  Scalar tau_hat_K = Scalar(0);
  Scalar ratio = Scalar(1);
};

// Sum of true effects over the selected units whose effect lies in `range`.
template <typename Scalar>
Scalar allocation_value(const TreatmentEffectProfile<Scalar>& profile,
                        const IndexList& selected,
                        const Interval<Scalar>& range = Interval<Scalar>()) {
  Scalar total(0);
  for (Index u : selected) {
    if (u < 0 || u >= profile.size()) throw DomainError("unit id out of range");
    if (range.contains(profile(u))) total += profile(u);
  }
  return total;
}

template <typename Scalar>
Scalar optimal_value(const TreatmentEffectProfile<Scalar>& profile, Index K) {
  check_budget(K, profile.size());
  Scalar total(0);
  for (Index i = 0; i < K; ++i) total += profile(profile.ranking()[std::size_t(i)]);
  return total;
}

// Scores an arbitrary selection against the optimum for the same budget.
template <typename Scalar>
AllocationResult<Scalar> score_selection(const TreatmentEffectProfile<Scalar>& profile,
                                         IndexList selected, Scalar tau_hat_K) {
  const Index K = Index(selected.size());
  AllocationResult<Scalar> out;
  out.value = allocation_value(profile, selected);
  out.optimal_value = optimal_value(profile, K);
  out.tau_K = profile.kth_largest(K);
  out.tau_hat_K = tau_hat_K;
  out.ratio = out.optimal_value > Scalar(0) ? out.value / out.optimal_value : Scalar(1);
  out.ratio = std::clamp(out.ratio, Scalar(0), Scalar(1));
  out.selected = std::move(selected);
  return out;
}

template <typename Scalar>
AllocationResult<Scalar> optimal_allocation(const TreatmentEffectProfile<Scalar>& profile,
                                            Index K) {
  check_budget(K, profile.size());
  IndexList top(profile.ranking().begin(), profile.ranking().begin() + K);
  return score_selection(profile, std::move(top), profile.kth_largest(K));
}

// Decomposition of the units around the optimal threshold tau_K.
template <typename Scalar>
struct ThresholdNeighborhood {
  Index M = 0;
  Index K = 0;
  Scalar rho = Scalar(0);
  Scalar tau_K = Scalar(0);
  Interval<Scalar> A1;  // (tau_K + 2 rho, 1]
  Interval<Scalar> D;   // [tau_K, tau_K + 2 rho]
  Index K1 = 0;
  Index K0 = 0;
  Index count_in_D = 0;
  Scalar theta_K = Scalar(0);
  Scalar v_A1 = Scalar(0);
  Scalar gamma_1 = Scalar(0);
  Scalar v_opt = Scalar(0);
  Scalar v_opt_D = Scalar(0);  // value of the optimal set inside D
  // Sum of the K0 lowest effects among units with tau >= tau_K - 2 rho: what
  // the near-threshold part of a worst-case selection is worth.
  Scalar v_near_worst = Scalar(0);
  std::optional<Scalar> alpha_K;
};

template <typename Scalar>
ThresholdNeighborhood<Scalar> threshold_neighborhood(
    const TreatmentEffectProfile<Scalar>& profile, Index K, Scalar rho) {
  check_budget(K, profile.size());
  if (!(rho > Scalar(0))) throw DomainError("rho must be positive");
  ThresholdNeighborhood<Scalar> n;
  n.M = profile.size();
  n.K = K;
  n.rho = rho;
  n.tau_K = profile.kth_largest(K);
  n.A1 = Interval<Scalar>::open_closed(n.tau_K + 2 * rho, Scalar(1));
  n.D = Interval<Scalar>::closed(n.tau_K, n.tau_K + 2 * rho);

  const auto& taus = profile.taus();
  for (Index u = 0; u < n.M; ++u) {
    const Scalar t = taus(u);
    if (t > n.tau_K + 2 * rho) {
      ++n.K1;
      n.v_A1 += t;
    }
    if (n.D.contains(t)) ++n.count_in_D;
  }
  n.K0 = K - n.K1;
  n.theta_K = Scalar(n.count_in_D) / Scalar(n.M);
  n.gamma_1 = n.v_A1 / Scalar(n.M);
  n.v_opt = optimal_value(profile, K);
  n.v_opt_D = n.v_opt - n.v_A1;

  // Everything with tau >= tau_K - 2 rho, ascending.
  const Scalar floor = n.tau_K - 2 * rho;
  std::vector<Scalar> eligible;
  for (Index u = 0; u < n.M; ++u) {
    if (taus(u) >= floor) eligible.push_back(taus(u));
  }
  std::sort(eligible.begin(), eligible.end());
  for (Index i = 0; i < n.K0; ++i) n.v_near_worst += eligible[std::size_t(i)];

  // alpha_K: the window [tau_K - 2 rho, tau_K - alpha] must hold K0 units.
  // The window top is placed on the K0-th lowest breakpoint.
  if (n.K0 == 0) {
    n.alpha_K = Scalar(0);
  } else {
    Index in_window = 0;
    for (Scalar v : eligible) {
      if (v <= n.tau_K) ++in_window;
    }
    if (in_window >= n.K0) n.alpha_K = n.tau_K - eligible[std::size_t(n.K0 - 1)];
  }
  return n;
}

}  // namespace lea

#endif  // LEA_EFFECTS_HPP_
