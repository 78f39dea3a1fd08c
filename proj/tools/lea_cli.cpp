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

// Command-line front end: `lea <subcommand> ...`.  Data goes to stdout,
// diagnostics to stderr.  Exit status 0 on success, 1 on a domain error,
// 2 on I/O, parse or usage errors.

#include <cmath>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "lea/allocator.hpp"
#include "lea/certificate.hpp"
#include "lea/csv.hpp"
#include "lea/distribution.hpp"
#include "lea/flex_budget.hpp"
#include "lea/harness.hpp"
#include "lea/serialize.hpp"

namespace {

constexpr std::uint64_t kDefaultSeed = 20251017;

// Integer K, or a fraction of M rounded to the nearest K >= 1.
lea::Index resolve_budget(const std::string& text, lea::Index M) {
  if (text.find_first_of(".eE") == std::string::npos) {
    const auto K = lea::parse_int(text);
    lea::check_budget(K, M);
    return K;
  }
  const double f = lea::parse_double(text);
  if (!(f > 0.0 && f <= 1.0)) throw lea::DomainError("budget fraction must lie in (0,1]");
  return std::max<lea::Index>(1, lea::Index(std::llround(f * double(M))));
}

std::uint64_t seed_or_default(const std::optional<std::uint64_t>& seed) {
  if (seed) return *seed;
  std::cerr << "seed: " << kDefaultSeed << " (default)\n";
  return kDefaultSeed;
}

// Estimates file: unit_id plus tau_hat (or tau).
lea::Vector<double> read_estimates(const std::string& path) {
  const auto table = lea::read_csv(path);
  int col = table.column("tau_hat");
  if (col < 0) col = table.column("tau");
  if (col < 0) throw lea::IoError(path + ": header needs a tau_hat or tau column");
  lea::Vector<double> out(lea::Index(table.rows.size()));
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    try {
      out(lea::Index(r)) = lea::parse_double(table.rows[r][std::size_t(col)]);
    } catch (const lea::IoError& e) {
      throw lea::IoError(path + ": row " + std::to_string(table.line_numbers[r]) + ": " +
                         e.what());
    }
  }
  if (out.size() == 0) throw lea::IoError(path + ": no units");
  return out;
}

void print(const lea::Json& j) { std::cout << j.dump(2) << '\n'; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coarse-estimate treatment allocation"};
  app.require_subcommand(1);

  std::string input, budget, family, budgets, config, mode, out, format;
  double epsilon = 0.1, gamma = 0.5, delta = 0.05, rho = 0.05, threshold = 4.0;
  std::optional<std::uint64_t> seed;
  lea::Index M = 0;

  auto* allocate = app.add_subcommand("allocate", "sample, run LEA, print the allocation");
  allocate->add_option("--input", input, "unit_id,tau CSV")->required();
  allocate->add_option("--budget", budget, "K or a fraction of M")->required();
  allocate->add_option("--epsilon", epsilon)->required();
  allocate->add_option("--gamma", gamma);
  allocate->add_option("--delta", delta);
  allocate->add_option("--seed", seed);

  auto* certify = app.add_subcommand("certify", "estimate-only optimality certificate");
  certify->add_option("--input", input, "unit_id,tau_hat CSV")->required();
  certify->add_option("--budget", budget)->required();
  certify->add_option("--epsilon", epsilon)->required();
  certify->add_option("--rho", rho)->required();
  certify->add_option("--delta", delta);

  auto* table = app.add_subcommand("gamma-table", "gamma, c and V* per budget fraction");
  table->add_option("--family", family, "uniform | beta:a,b | gauss:mu,sigma")->required();
  table->add_option("--budgets", budgets, "comma-separated K/M values")->required();

  auto* regularity = app.add_subcommand("regularity", "rho-regularity constant of a profile");
  regularity->add_option("--input", input)->required();
  regularity->add_option("--rho", rho)->required();
  regularity->add_option("--threshold", threshold, "pass/fail constant (default 4)");

  auto* sweep = app.add_subcommand("sweep", "replicated sampling sweeps");
  sweep->add_option("--config", config, "JSON sweep config")->required();
  sweep->add_option("--mode", mode)->required()->check(CLI::IsMember({"value", "failure"}));
  sweep->add_option("--out", out)->required();
  sweep->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));

  auto* flex = app.add_subcommand("flex", "budget sliding and overspending");
  flex->add_option("--input", input)->required();
  flex->add_option("--budget", budget)->required();
  flex->add_option("--epsilon", epsilon)->required();
  flex->add_option("--mode", mode)
      ->required()
      ->check(CLI::IsMember({"slide", "underspend", "overspend"}));
  flex->add_option("--gamma", gamma);
  flex->add_option("--delta", delta);
  flex->add_option("--seed", seed);

  auto* spikes = app.add_subcommand("two-spikes", "emit the two-spikes instance");
  spikes->add_option("--M", M)->required();
  spikes->add_option("--epsilon", epsilon)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return 2;
  }

  try {
    if (allocate->parsed()) {
      const auto profile = lea::ingest_units(input, lea::InputFormat::UnitTauCsv);
      const lea::BudgetSpec spec{resolve_budget(budget, profile.size()), epsilon, gamma};
      const auto run = lea::run_lea(profile, spec, delta, {seed_or_default(seed), 0});
      lea::Json j = lea::to_json(run.result);
      j["plan"] = lea::to_json(run.plan);
      j["epsilon"] = epsilon;
      j["gamma"] = gamma;
      print(j);
    } else if (certify->parsed()) {
      const lea::EstimateProfile<double> est(read_estimates(input), rho, delta);
      print(lea::to_json(lea::certify_from_estimates(est, resolve_budget(budget, est.size()),
                                                     epsilon)));
    } else if (table->parsed()) {
      std::vector<double> fractions;
      for (const auto& piece : lea::split_list(budgets, ',')) {
        fractions.push_back(lea::parse_double(piece));
      }
      const auto spec = lea::DistributionSpec::parse(family);
      lea::write_gamma_table(std::cout, lea::gamma_table(spec, fractions));
    } else if (regularity->parsed()) {
      const auto profile = lea::ingest_units(input, lea::InputFormat::UnitTauCsv);
      const auto& t = profile.taus();
      const auto report = lea::check_regularity(std::vector<double>(t.data(), t.data() + t.size()), rho);
      lea::Json j = lea::to_json(report);
      j["threshold"] = threshold;
      j["is_regular"] = report.is_regular_at(threshold);
      print(j);
    } else if (sweep->parsed()) {
      const auto cfg = lea::load_sweep_config(config);
      const auto profile = lea::profile_for(cfg);
      const auto result = mode == "value" ? lea::run_value_vs_samples(profile, cfg)
                                          : lea::run_failure_sweep(profile, cfg);
      const bool json = format.empty() ? out.size() >= 5 && out.substr(out.size() - 5) == ".json"
                                       : format == "json";
      lea::export_results(result, out, json ? lea::ExportFormat::Json : lea::ExportFormat::Csv);
      std::cerr << "wrote " << result.rows.size() << " rows to " << out << "\n";
    } else if (flex->parsed()) {
      const auto profile = lea::ingest_units(input, lea::InputFormat::UnitTauCsv);
      const lea::BudgetSpec spec{resolve_budget(budget, profile.size()), epsilon, gamma};
      const auto run = lea::run_lea(profile, spec, delta, {seed_or_default(seed), 0});
      lea::FlexBudgetResult result;
      if (mode == "overspend") {
        result = lea::overspend_units(profile, run.estimates, spec.K, epsilon,
                                      profile.size() - spec.K);
      } else {
        result = lea::slide_budget(profile, run.estimates, spec.K, epsilon, mode == "underspend");
      }
      result.kappa_needed = lea::kappa_relaxation(profile, spec.K, epsilon);
      lea::Json j = lea::to_json(result);
      j["mode"] = mode;
      j["ratio_at_K"] = lea::number(run.result.ratio);
      j["plan"] = lea::to_json(run.plan);
      print(j);
    } else if (spikes->parsed()) {
      lea::write_unit_tau_csv(std::cout, lea::two_spikes_instance(M, epsilon));
    }
  } catch (const lea::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
