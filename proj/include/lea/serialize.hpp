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

#ifndef LEA_SERIALIZE_HPP_
#define LEA_SERIALIZE_HPP_

#include "json.hpp"
#include "lea/allocator.hpp"
#include "lea/certificate.hpp"
#include "lea/distribution.hpp"
#include "lea/flex_budget.hpp"
#include "lea/harness.hpp"
#include "lea/sampling.hpp"

namespace lea {

using Json = nlohmann::ordered_json;

// Non-finite values become null.
Json number(double value);

Json to_json(const SamplePlan& plan);
Json to_json(const AllocationResult<double>& result);
Json to_json(const CertificateReport<double>& report);
Json to_json(const RegularityReport& report);
Json to_json(const FlexBudgetResult& result);
Json to_json(const ThresholdNeighborhood<double>& nbhd);
Json to_json(const SweepConfig& config);
Json to_json(const SweepRow& row);
Json to_json(const SweepResult& result);

}  // namespace lea

#endif  // LEA_SERIALIZE_HPP_
