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

#include "lea/serialize.hpp"

#include <cmath>

namespace lea {

namespace {

template <typename T>
Json optional_value(const std::optional<T>& v) {
  if (!v) return nullptr;
  if constexpr (std::is_floating_point_v<T>) {
    return number(*v);
  } else {
    return *v;
  }
}

}  // namespace

Json number(double value) {
  if (!std::isfinite(value)) return nullptr;
  return value;
}

Json to_json(const SamplePlan& plan) {
  return Json{{"M", plan.M},
              {"per_unit", plan.per_unit},
              {"total", plan.total},
              {"regime", to_string(plan.regime)},
              {"rho_effective", number(plan.rho_effective)},
              {"delta", plan.delta}};
}

Json to_json(const AllocationResult<double>& result) {
  Json selected = Json::array();
  for (Index u : result.selected) selected.push_back(u);
  return Json{{"K", result.selected.size()},
              {"selected", selected},
              {"value", number(result.value)},
              {"optimal_value", number(result.optimal_value)},
              {"tau_K", number(result.tau_K)},
              {"tau_hat_K", number(result.tau_hat_K)},
              {"ratio", number(result.ratio)}};
}

Json to_json(const CertificateReport<double>& report) {
  return Json{{"v_opt_lower", number(report.v_opt_lower)},
              {"v_D_upper", number(report.v_D_upper)},
              {"v_ltk0_lower", number(report.v_ltk0_lower)},
              {"gap_upper", number(report.gap_upper)},
              {"certified", report.certified},
              {"epsilon", report.epsilon},
              {"reason", report.reason},
              {"M", report.M},
              {"K", report.K},
              {"rho", number(report.rho)},
              {"tau_hat_K", number(report.tau_hat_K)},
              {"K0_lower", report.K0_lower}};
}

Json to_json(const RegularityReport& report) {
  return Json{{"rho", report.rho},
              {"c_hat", number(report.c_hat)},
              {"worst_interval", Json::array({report.worst_lo, report.worst_hi})},
              {"units", report.units}};
}

Json to_json(const FlexBudgetResult& result) {
  return Json{{"original_K", result.original_K},
              {"nearest_Kprime", optional_value(result.nearest_Kprime)},
              {"nearest_underspend_Kprime", optional_value(result.nearest_underspend_Kprime)},
              {"slide_distance", optional_value(result.slide_distance())},
              {"underspend_distance", optional_value(result.underspend_distance())},
              {"overspend_S", optional_value(result.overspend_S)},
              {"overspend_closed_form", optional_value(result.overspend_closed_form)},
              {"kappa_needed", optional_value(result.kappa_needed)}};
}

Json to_json(const ThresholdNeighborhood<double>& n) {
  return Json{{"M", n.M},
              {"K", n.K},
              {"rho", n.rho},
              {"tau_K", n.tau_K},
              {"A1_lo", n.A1.lo},
              {"D", Json::array({n.D.lo, n.D.hi})},
              {"K1", n.K1},
              {"K0", n.K0},
              {"theta_K", n.theta_K},
              {"gamma_1", n.gamma_1},
              {"alpha_K", optional_value(n.alpha_K)}};
}

Json to_json(const SweepConfig& c) {
  Json j{{"sample_sizes", c.sample_sizes},
         {"epsilons", c.epsilons},
         {"budgets", c.budgets},
         {"trials", c.trials},
         {"delta", c.delta},
         {"gamma", c.gamma},
         {"seed", c.seed},
         {"sampling_mode", c.sampling_mode == SamplingMode::EqualPerUnit
                               ? "equal_per_unit"
                               : "uniform_random_unit"}};
  if (!c.input.empty()) {
    j["input"] = c.input;
    j["input_format"] = c.input_format == InputFormat::UnitTauCsv ? "unit_tau" : "raw_rct";
  }
  if (!c.synthetic.empty()) {
    j["synthetic"] = c.synthetic;
    j["synthetic_M"] = c.synthetic_M;
  }
  if (c.grouping) {
    const auto& g = *c.grouping;
    if (g.method == GroupingSpec::Method::QuantileOnCovariate) {
      j["grouping"] = "quantile";
      j["grouping_covariate"] = g.covariate;
      j["grouping_groups"] = g.n_groups;
    } else {
      j["grouping"] = "external";
      j["assignment"] = g.assignment_path;
    }
    j["flip_sign"] = g.flip_sign;
  }
  return j;
}

Json to_json(const SweepRow& r) {
  return Json{{"axis", r.axis},
              {"budget_K", r.budget_K},
              {"mean_ratio", number(r.mean_ratio)},
              {"ci_lo", number(r.ci_lo)},
              {"ci_hi", number(r.ci_hi)},
              {"failure_rate", number(r.failure_rate)},
              {"slide_dist", number(r.slide_dist)},
              {"underspend_dist", number(r.underspend_dist)},
              {"overspend_S", number(r.overspend_S)},
              {"ref_worst", number(r.ref_worst)},
              {"ref_theory", number(r.ref_theory)},
              {"total_samples", r.total_samples},
              {"v_opt", number(r.v_opt)},
              {"trials", r.trials},
              {"failures", r.failures},
              {"no_slide", r.no_slide},
              {"no_underspend", r.no_underspend},
              {"no_overspend", r.no_overspend},
              {"overspend_one", r.overspend_one},
              {"certified", r.certified},
              {"certified_failures", r.certified_failures}};
}

Json to_json(const SweepResult& result) {
  Json rows = Json::array();
  for (const auto& r : result.rows) rows.push_back(to_json(r));
  return Json{{"kind", result.kind},
              {"M", result.M},
              {"seed", result.config.seed},
              {"config", to_json(result.config)},
              {"rows", rows}};
}

}  // namespace lea
