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

#ifndef LEA_SAMPLING_HPP_
#define LEA_SAMPLING_HPP_

#include <cstdint>
#include <random>
#include <string>

#include "lea/effects.hpp"

namespace lea {

enum class Regime { FullCATE, LEA, Custom };
enum class SamplingMode { EqualPerUnit, UniformRandomUnit };

std::string to_string(Regime regime);
std::string to_string(SamplingMode mode);

struct SamplePlan {
  Index M = 0;
  std::int64_t per_unit = 0;
  std::int64_t total = 0;
  Regime regime = Regime::Custom;
  double rho_effective = 0.0;
  double delta = 0.05;
};

struct RngSeed {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
};

// Engine for one (seed, stream, slot) triple.  Slots below 2^32 are units;
// the harness uses higher slots for its own bookkeeping.
std::mt19937_64 make_engine(const RngSeed& seed, std::uint64_t slot);

// Uniform double in [0,1) built from the top 53 bits, identical on every
// platform (std::uniform_real_distribution is not).
inline double unit_uniform(std::mt19937_64& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

// ceil(x), except that x within 1e-9 relative of an integer rounds to it.
std::int64_t ceil_count(double x);

// Per-unit Hoeffding count for accuracy rho at per-unit confidence delta/M.
std::int64_t hoeffding_per_unit(Index M, double rho, double delta);

SamplePlan fullcate_sample_size(Index M, double epsilon, double delta);
SamplePlan lea_sample_size(Index M, double epsilon, double delta, double gamma);

// Total budget M ln(2M/delta)/epsilon spread evenly over the units; the
// accuracy it buys is reported as rho_effective.
SamplePlan protocol_sample_size(Index M, double epsilon, double delta);

// Plan for a given total, as used by the sample-size sweeps.
SamplePlan custom_plan(Index M, std::int64_t total, double delta);

// Accuracy that n draws guarantee at per-unit confidence delta/M.
double hoeffding_rho(Index M, std::int64_t n, double delta);

EstimateProfile<double> draw_estimates(const TreatmentEffectProfile<double>& profile,
                                       const SamplePlan& plan, const RngSeed& seed,
                                       SamplingMode mode = SamplingMode::EqualPerUnit);

}  // namespace lea

#endif  // LEA_SAMPLING_HPP_
