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

#ifndef LEA_HARNESS_HPP_
#define LEA_HARNESS_HPP_

#include <cstdint>
#include <ostream>
#include <optional>
#include <string>
#include <vector>

#include "lea/distribution.hpp"
#include "lea/effects.hpp"
#include "lea/sampling.hpp"

namespace lea {

enum class InputFormat { UnitTauCsv, RawRctCsv };

struct GroupingSpec {
  enum class Method { QuantileOnCovariate, ExternalAssignment };
  Method method = Method::QuantileOnCovariate;
  std::string covariate;        // QuantileOnCovariate
  int n_groups = 4;             // QuantileOnCovariate
  std::string assignment_path;  // ExternalAssignment: individual_id,unit_id
  int min_treated = 3;
  int min_control = 3;
  double band_lo = 0.15;
  double band_hi = 0.85;
  bool flip_sign = false;  // for outcomes where lower is better
};

struct IngestedUnits {
  TreatmentEffectProfile<double> profile;
  std::vector<std::string> unit_ids;
  std::vector<double> raw_effects;  // before normalization (RawRctCsv only)
  std::vector<std::string> dropped_units;
};

IngestedUnits ingest_units_detailed(const std::string& path, InputFormat format,
                                    const std::optional<GroupingSpec>& grouping = {});
TreatmentEffectProfile<double> ingest_units(const std::string& path, InputFormat format,
                                            const std::optional<GroupingSpec>& grouping = {});

// Writes `unit_id,tau` rows.
void write_unit_tau_csv(std::ostream& out, const TreatmentEffectProfile<double>& profile);

struct SweepConfig {
  std::vector<std::int64_t> sample_sizes;
  std::vector<double> epsilons;
  std::vector<double> budgets;  // fractions of M; empty means every K
  int trials = 50;
  double delta = 0.05;
  double gamma = 0.5;
  std::uint64_t seed = 20251017;
  SamplingMode sampling_mode = SamplingMode::UniformRandomUnit;

  // Profile source: a file, or M draws from a distribution.
  std::string input;
  InputFormat input_format = InputFormat::UnitTauCsv;
  std::optional<GroupingSpec> grouping;
  std::string synthetic;  // "uniform", "beta:a,b", "gauss:mu,sigma", "grid"
  Index synthetic_M = 50;

  void validate() const;
};

// Flat JSON object; relative paths resolve against the config's directory.
SweepConfig load_sweep_config(const std::string& path);
SweepConfig parse_sweep_config(const std::string& json_text, const std::string& base_dir = "");

// The profile a config describes.  Synthetic profiles draw their values from
// a dedicated RNG stream of the config seed.
TreatmentEffectProfile<double> profile_for(const SweepConfig& config);
TreatmentEffectProfile<double> sample_profile(const DistributionSpec& spec, Index M,
                                              std::uint64_t seed);
TreatmentEffectProfile<double> uniform_grid(Index M);

struct SweepRow {
  double axis = 0.0;  // N for value sweeps, epsilon for failure sweeps
  Index budget_K = 0;
  double mean_ratio = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  double failure_rate = 0.0;
  double slide_dist = 0.0;
  double underspend_dist = 0.0;
  double overspend_S = 0.0;
  double ref_worst = 0.0;
  double ref_theory = 0.0;
  // Extra bookkeeping, exported to JSON only.
  std::int64_t total_samples = 0;
  double v_opt = 0.0;
  int trials = 0;
  int failures = 0;
  int no_slide = 0;       // failures with no working K' at all
  int no_underspend = 0;  // failures with no working K' <= K
  int no_overspend = 0;   // failures no overspend could repair
  int overspend_one = 0;  // failures repaired by exactly one extra unit
  int certified = 0;
  int certified_failures = 0;
};

struct SweepResult {
  std::string kind;  // "value" or "failure"
  SweepConfig config;
  Index M = 0;
  std::vector<SweepRow> rows;
};

SweepResult run_value_vs_samples(const TreatmentEffectProfile<double>& profile,
                                 const SweepConfig& config);
SweepResult run_failure_sweep(const TreatmentEffectProfile<double>& profile,
                              const SweepConfig& config);

struct FailureSummary {
  double mean_failure_rate = 0.0;      // over every (epsilon, K, trial)
  double max_point_failure_rate = 0.0;  // worst epsilon, averaged over K
  double mean_slide_dist = 0.0;         // over failures with a working K'
  double mean_underspend_dist = 0.0;
  double overspend_one_share = 1.0;  // failures fixed by S = 1
  int failures = 0;
  int certified_failures = 0;
};

FailureSummary summarize_failures(const SweepResult& result);

// Nominal value envelopes at N total samples.
double reference_worst(double v_opt, Index M, double delta, double N);
double reference_theory(double v_opt, Index M, double delta, double N);

enum class ExportFormat { Csv, Json };
void export_results(const SweepResult& result, const std::string& path, ExportFormat format);
void write_results_csv(std::ostream& out, const SweepResult& result);
std::vector<SweepRow> read_results_csv(const std::string& path);

inline constexpr const char* kSweepCsvHeader =
    "axis,budget_K,mean_ratio,ci_lo,ci_hi,failure_rate,slide_dist,underspend_dist,"
    "overspend_S,ref_worst,ref_theory";

}  // namespace lea

#endif  // LEA_HARNESS_HPP_
