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

#include "lea/harness.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include "lea/certificate.hpp"
#include "lea/csv.hpp"
#include "lea/flex_budget.hpp"
#include "lea/serialize.hpp"

namespace lea {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// High bits of the RNG stream keep the sweeps and profile draws apart.
constexpr std::uint64_t kValueStreams = std::uint64_t{1} << 56;
constexpr std::uint64_t kFailureStreams = std::uint64_t{2} << 56;
constexpr std::uint64_t kProfileStream = std::uint64_t{3} << 56;

std::string row_tag(const std::string& path, std::size_t line) {
  return path + ": row " + std::to_string(line);
}

struct Group {
  int treated = 0;
  int control = 0;
  double treated_sum = 0.0;
  double control_sum = 0.0;
};

IngestedUnits read_unit_tau(const std::string& path) {
  const CsvTable table = read_csv(path);
  const int id_col = table.column("unit_id");
  const int tau_col = table.column("tau");
  if (id_col < 0 || tau_col < 0) throw IoError(path + ": header must contain unit_id,tau");
  std::vector<std::string> ids;
  std::vector<double> taus;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    try {
      taus.push_back(parse_double(table.rows[r][std::size_t(tau_col)]));
    } catch (const IoError& e) {
      throw IoError(row_tag(path, table.line_numbers[r]) + ": " + e.what());
    }
    ids.push_back(table.rows[r][std::size_t(id_col)]);
  }
  if (taus.empty()) throw IoError(path + ": no units");
  for (std::size_t i = 0; i < taus.size(); ++i) {
    if (!(taus[i] >= 0.0 && taus[i] <= 1.0)) {
      throw DomainError(row_tag(path, table.line_numbers[i]) + ": tau outside [0,1]");
    }
  }
  return {TreatmentEffectProfile<double>::from(taus), std::move(ids), {}, {}};
}

std::map<std::string, std::string> read_assignment(const std::string& path) {
  const CsvTable table = read_csv(path);
  const int ind = table.column("individual_id");
  const int unit = table.column("unit_id");
  if (ind < 0 || unit < 0) throw IoError(path + ": header must contain individual_id,unit_id");
  std::map<std::string, std::string> out;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& key = table.rows[r][std::size_t(ind)];
    if (!out.emplace(key, table.rows[r][std::size_t(unit)]).second) {
      throw IoError(row_tag(path, table.line_numbers[r]) + ": duplicate individual '" + key +
                    "'");
    }
  }
  return out;
}

IngestedUnits read_raw_rct(const std::string& path, const GroupingSpec& g) {
  const CsvTable table = read_csv(path);
  const int id_col = table.column("individual_id");
  const int tr_col = table.column("treated");
  const int y_col = table.column("outcome");
  if (id_col < 0 || tr_col < 0 || y_col < 0) {
    throw IoError(path + ": header must start with individual_id,treated,outcome");
  }
  const std::size_t n = table.rows.size();
  std::vector<bool> treated(n);
  std::vector<double> outcome(n);
  for (std::size_t r = 0; r < n; ++r) {
    const auto& row = table.rows[r];
    try {
      const auto t = parse_int(row[std::size_t(tr_col)]);
      if (t != 0 && t != 1) throw IoError("treated must be 0 or 1");
      treated[r] = t == 1;
      outcome[r] = parse_double(row[std::size_t(y_col)]);
      if (!std::isfinite(outcome[r])) throw IoError("outcome must be finite");
    } catch (const IoError& e) {
      throw IoError(row_tag(path, table.line_numbers[r]) + ": " + e.what());
    }
    if (g.flip_sign) outcome[r] = -outcome[r];
  }

  // Unit label of every individual.
  std::vector<std::string> label(n);
  if (g.method == GroupingSpec::Method::QuantileOnCovariate) {
    if (g.n_groups < 2) throw DomainError("quantile grouping needs at least 2 groups");
    const int cov = table.column(g.covariate);
    if (cov < 0) throw IoError(path + ": no covariate column '" + g.covariate + "'");
    std::vector<double> x(n);
    for (std::size_t r = 0; r < n; ++r) {
      try {
        x[r] = parse_double(table.rows[r][std::size_t(cov)]);
      } catch (const IoError& e) {
        throw IoError(row_tag(path, table.line_numbers[r]) + ": " + e.what());
      }
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    const int width = int(std::to_string(g.n_groups - 1).size());
    for (std::size_t rank = 0; rank < n; ++rank) {
      const auto q = rank * std::size_t(g.n_groups) / n;
      std::string s = std::to_string(q);
      label[order[rank]] = "q" + std::string(std::size_t(width) - s.size(), '0') + s;
    }
  } else {
    const auto assignment = read_assignment(g.assignment_path);
    for (std::size_t r = 0; r < n; ++r) {
      const auto& id = table.rows[r][std::size_t(id_col)];
      const auto it = assignment.find(id);
      if (it == assignment.end()) {
        throw IoError(row_tag(path, table.line_numbers[r]) + ": individual '" + id +
                      "' has no unit assignment");
      }
      label[r] = it->second;
    }
  }

  std::map<std::string, Group> groups;
  for (std::size_t r = 0; r < n; ++r) {
    Group& grp = groups[label[r]];
    if (treated[r]) {
      ++grp.treated;
      grp.treated_sum += outcome[r];
    } else {
      ++grp.control;
      grp.control_sum += outcome[r];
    }
  }

  IngestedUnits out{TreatmentEffectProfile<double>(Vector<double>::Zero(1)), {}, {}, {}};
  for (const auto& [name, grp] : groups) {
    const double rate = double(grp.treated) / double(grp.treated + grp.control);
    if (grp.treated < g.min_treated || grp.control < g.min_control || rate < g.band_lo ||
        rate > g.band_hi) {
      out.dropped_units.push_back(name);
      continue;
    }
    out.unit_ids.push_back(name);
    out.raw_effects.push_back(grp.treated_sum / grp.treated - grp.control_sum / grp.control);
  }
  if (out.raw_effects.empty()) throw DomainError(path + ": no group survives the filters");
  const auto [lo, hi] = std::minmax_element(out.raw_effects.begin(), out.raw_effects.end());
  if (!(*hi > *lo)) throw DomainError("degenerate normalization");
  std::vector<double> taus;
  for (double d : out.raw_effects) taus.push_back((d - *lo) / (*hi - *lo));
  out.profile = TreatmentEffectProfile<double>::from(taus);
  return out;
}

double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / double(v.size());
}

void fill_ci(SweepRow& row, const std::vector<double>& ratios) {
  row.mean_ratio = mean_of(ratios);
  double ss = 0.0;
  for (double r : ratios) ss += (r - row.mean_ratio) * (r - row.mean_ratio);
  const double sd = ratios.size() > 1 ? std::sqrt(ss / double(ratios.size() - 1)) : 0.0;
  const double half = 1.96 * sd / std::sqrt(double(ratios.size()));
  row.ci_lo = row.mean_ratio - half;
  row.ci_hi = row.mean_ratio + half;
}

std::vector<Index> budgets_for(const SweepConfig& config, Index M) {
  std::vector<Index> out;
  if (config.budgets.empty()) {
    for (Index k = 1; k <= M; ++k) out.push_back(k);
    return out;
  }
  for (double f : config.budgets) {
    const Index k = std::clamp<Index>(Index(std::llround(f * double(M))), 1, M);
    if (std::find(out.begin(), out.end(), k) == out.end()) out.push_back(k);
  }
  return out;
}

std::string resolve(const std::string& base, const std::string& p) {
  if (p.empty() || base.empty() || std::filesystem::path(p).is_absolute()) return p;
  return (std::filesystem::path(base) / p).string();
}

}  // namespace

IngestedUnits ingest_units_detailed(const std::string& path, InputFormat format,
                                    const std::optional<GroupingSpec>& grouping) {
  if (format == InputFormat::UnitTauCsv) return read_unit_tau(path);
  if (!grouping) throw DomainError("raw RCT input needs a grouping spec");
  return read_raw_rct(path, *grouping);
}

TreatmentEffectProfile<double> ingest_units(const std::string& path, InputFormat format,
                                            const std::optional<GroupingSpec>& grouping) {
  return ingest_units_detailed(path, format, grouping).profile;
}

void write_unit_tau_csv(std::ostream& out, const TreatmentEffectProfile<double>& profile) {
  out << "unit_id,tau\n";
  for (Index u = 0; u < profile.size(); ++u) out << u << ',' << format_number(profile(u)) << '\n';
}

void SweepConfig::validate() const {
  if (trials < 1) throw DomainError("trials must be at least 1");
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("delta must lie in (0,1)");
  if (!(gamma > 0.0)) throw DomainError("gamma must be positive");
  for (double f : budgets) {
    if (!(f > 0.0 && f <= 1.0)) throw DomainError("budget fractions must lie in (0,1]");
  }
  for (double e : epsilons) {
    if (!(e > 0.0 && e < 1.0)) throw DomainError("epsilons must lie in (0,1)");
  }
  for (auto n : sample_sizes) {
    if (n < 1) throw DomainError("sample sizes must be positive");
  }
  if (input.empty() == synthetic.empty()) {
    throw DomainError("config needs exactly one of 'input' or 'synthetic'");
  }
  if (!synthetic.empty() && synthetic_M < 1) throw DomainError("synthetic_M must be positive");
}

SweepConfig parse_sweep_config(const std::string& json_text, const std::string& base_dir) {
  Json j;
  try {
    j = Json::parse(json_text);
  } catch (const std::exception& e) {
    throw IoError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw IoError("config must be a JSON object");
  SweepConfig c;
  std::optional<GroupingSpec> grouping;
  auto group = [&]() -> GroupingSpec& {
    if (!grouping) grouping = GroupingSpec{};
    return *grouping;
  };
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "sample_sizes") {
        c.sample_sizes = v.get<std::vector<std::int64_t>>();
      } else if (key == "epsilons") {
        c.epsilons = v.get<std::vector<double>>();
      } else if (key == "budgets") {
        c.budgets = v.get<std::vector<double>>();
      } else if (key == "trials") {
        c.trials = v.get<int>();
      } else if (key == "delta") {
        c.delta = v.get<double>();
      } else if (key == "gamma") {
        c.gamma = v.get<double>();
      } else if (key == "seed") {
        c.seed = v.get<std::uint64_t>();
      } else if (key == "sampling_mode") {
        const auto s = v.get<std::string>();
        if (s == "uniform_random_unit") {
          c.sampling_mode = SamplingMode::UniformRandomUnit;
        } else if (s == "equal_per_unit") {
          c.sampling_mode = SamplingMode::EqualPerUnit;
        } else {
          throw IoError("unknown sampling_mode '" + s + "'");
        }
      } else if (key == "input") {
        c.input = resolve(base_dir, v.get<std::string>());
      } else if (key == "input_format") {
        const auto s = v.get<std::string>();
        if (s == "unit_tau") {
          c.input_format = InputFormat::UnitTauCsv;
        } else if (s == "raw_rct") {
          c.input_format = InputFormat::RawRctCsv;
        } else {
          throw IoError("unknown input_format '" + s + "'");
        }
      } else if (key == "grouping") {
        const auto s = v.get<std::string>();
        if (s == "quantile") {
          group().method = GroupingSpec::Method::QuantileOnCovariate;
        } else if (s == "external") {
          group().method = GroupingSpec::Method::ExternalAssignment;
        } else {
          throw IoError("unknown grouping '" + s + "'");
        }
      } else if (key == "grouping_covariate") {
        group().covariate = v.get<std::string>();
      } else if (key == "grouping_groups") {
        group().n_groups = v.get<int>();
      } else if (key == "assignment") {
        group().assignment_path = resolve(base_dir, v.get<std::string>());
      } else if (key == "flip_sign") {
        group().flip_sign = v.get<bool>();
      } else if (key == "synthetic") {
        c.synthetic = v.get<std::string>();
      } else if (key == "synthetic_M") {
        c.synthetic_M = v.get<Index>();
      } else {
        throw IoError("unknown config key '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("bad config value: ") + e.what());
  }
  c.grouping = grouping;
  c.validate();
  return c;
}

SweepConfig load_sweep_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_sweep_config(buf.str(), std::filesystem::path(path).parent_path().string());
}

TreatmentEffectProfile<double> uniform_grid(Index M) {
  if (M < 1) throw DomainError("grid needs at least one unit");
  if (M == 1) return TreatmentEffectProfile<double>(Vector<double>::Constant(1, 0.5));
  return TreatmentEffectProfile<double>(Vector<double>::LinSpaced(M, 0.0, 1.0));
}

TreatmentEffectProfile<double> sample_profile(const DistributionSpec& spec, Index M,
                                              std::uint64_t seed) {
  auto engine = make_engine(RngSeed{seed, kProfileStream}, 0);
  Vector<double> taus(M);
  for (Index u = 0; u < M; ++u) taus(u) = spec.quantile(unit_uniform(engine));
  return TreatmentEffectProfile<double>(std::move(taus));
}

TreatmentEffectProfile<double> profile_for(const SweepConfig& config) {
  if (!config.input.empty()) {
    return ingest_units(config.input, config.input_format, config.grouping);
  }
  if (config.synthetic == "grid") return uniform_grid(config.synthetic_M);
  return sample_profile(DistributionSpec::parse(config.synthetic), config.synthetic_M,
                        config.seed);
}

double reference_worst(double v_opt, Index M, double delta, double N) {
  return (1.0 - std::sqrt(double(M) * std::log(2.0 * double(M) / delta) / N)) * v_opt;
}

double reference_theory(double v_opt, Index M, double delta, double N) {
  return (1.0 - double(M) * std::log(2.0 * double(M) / delta) / N) * v_opt;
}

SweepResult run_value_vs_samples(const TreatmentEffectProfile<double>& profile,
                                 const SweepConfig& config) {
  config.validate();
  const Index M = profile.size();
  const auto budgets = budgets_for(config, M);
  SweepResult result{"value", config, M, {}};

  for (std::size_t a = 0; a < config.sample_sizes.size(); ++a) {
    const std::int64_t N = config.sample_sizes[a];
    const SamplePlan plan = config.sampling_mode == SamplingMode::EqualPerUnit
                                ? custom_plan(M, (N / M) * M, config.delta)
                                : custom_plan(M, N, config.delta);
    std::vector<std::vector<double>> ratios(budgets.size());
    for (int t = 0; t < config.trials; ++t) {
      const RngSeed seed{config.seed, kValueStreams | (std::uint64_t(a) << 32) | std::uint64_t(t)};
      const auto est = draw_estimates(profile, plan, seed, config.sampling_mode);
      const PrefixTable<double> table(profile, est);
      for (std::size_t b = 0; b < budgets.size(); ++b) {
        const Index K = budgets[b];
        const double opt = table.optimal_value(K);
        ratios[b].push_back(opt > 0.0 ? table.lea_value(K) / opt : 1.0);
      }
    }
    for (std::size_t b = 0; b < budgets.size(); ++b) {
      SweepRow row;
      row.axis = double(N);
      row.budget_K = budgets[b];
      fill_ci(row, ratios[b]);
      row.failure_rate = row.slide_dist = row.underspend_dist = row.overspend_S = kNaN;
      row.v_opt = optimal_value(profile, budgets[b]);
      row.ref_worst = reference_worst(row.v_opt, M, config.delta, double(N));
      row.ref_theory = reference_theory(row.v_opt, M, config.delta, double(N));
      row.total_samples = plan.total;
      row.trials = config.trials;
      result.rows.push_back(row);
    }
  }
  return result;
}

SweepResult run_failure_sweep(const TreatmentEffectProfile<double>& profile,
                              const SweepConfig& config) {
  config.validate();
  const Index M = profile.size();
  const auto budgets = budgets_for(config, M);
  SweepResult result{"failure", config, M, {}};
  const double log_term = std::log(2.0 * double(M) / config.delta);

  for (std::size_t e = 0; e < config.epsilons.size(); ++e) {
    const double eps = config.epsilons[e];
    const std::int64_t N = ceil_count(double(M) * log_term / eps);
    const SamplePlan plan = config.sampling_mode == SamplingMode::EqualPerUnit
                                ? custom_plan(M, (N / M) * M, config.delta)
                                : custom_plan(M, N, config.delta);

    struct Acc {
      std::vector<double> ratios;
      int failures = 0, no_slide = 0, no_under = 0, no_over = 0, over_one = 0;
      int certified = 0, certified_failures = 0;
      double slide = 0.0, under = 0.0, over = 0.0;
    };
    std::vector<Acc> acc(budgets.size());

    for (int t = 0; t < config.trials; ++t) {
      const RngSeed seed{config.seed,
                         kFailureStreams | (std::uint64_t(e) << 32) | std::uint64_t(t)};
      const auto est = draw_estimates(profile, plan, seed, config.sampling_mode);
      const PrefixTable<double> table(profile, est);
      const auto min_draws = *std::min_element(est.draws().begin(), est.draws().end());
      const double cert_rho = hoeffding_rho(M, min_draws, config.delta);

      for (std::size_t b = 0; b < budgets.size(); ++b) {
        const Index K = budgets[b];
        Acc& a = acc[b];
        const double opt = table.optimal_value(K);
        a.ratios.push_back(opt > 0.0 ? table.lea_value(K) / opt : 1.0);
        const bool failed = !table.works(K, eps);

        bool certified = false;
        if (std::isfinite(cert_rho)) {
          certified = certify_from_estimates(est.with_rho(cert_rho), K, eps).certified;
        }
        a.certified += certified;
        if (!failed) continue;
        ++a.failures;
        a.certified_failures += certified;

        const auto slid = slide_budget(table, K, eps);
        if (auto d = slid.slide_distance()) {
          a.slide += double(*d);
        } else {
          ++a.no_slide;
        }
        if (auto d = slid.underspend_distance()) {
          a.under += double(*d);
        } else {
          ++a.no_under;
        }
        const auto over = overspend_units(table, K, eps, M - K);
        if (over.overspend_S) {
          a.over += double(*over.overspend_S);
          a.over_one += *over.overspend_S == 1;
        } else {
          ++a.no_over;
        }
      }
    }

    for (std::size_t b = 0; b < budgets.size(); ++b) {
      const Acc& a = acc[b];
      SweepRow row;
      row.axis = eps;
      row.budget_K = budgets[b];
      fill_ci(row, a.ratios);
      row.trials = config.trials;
      row.failures = a.failures;
      row.failure_rate = double(a.failures) / double(config.trials);
      const auto avg = [](double sum, int n) { return n > 0 ? sum / n : kNaN; };
      row.slide_dist = avg(a.slide, a.failures - a.no_slide);
      row.underspend_dist = avg(a.under, a.failures - a.no_under);
      row.overspend_S = avg(a.over, a.failures - a.no_over);
      row.no_slide = a.no_slide;
      row.no_underspend = a.no_under;
      row.no_overspend = a.no_over;
      row.overspend_one = a.over_one;
      row.certified = a.certified;
      row.certified_failures = a.certified_failures;
      row.v_opt = optimal_value(profile, budgets[b]);
      row.ref_worst = reference_worst(row.v_opt, M, config.delta, double(N));
      row.ref_theory = reference_theory(row.v_opt, M, config.delta, double(N));
      row.total_samples = plan.total;
      result.rows.push_back(row);
    }
  }
  return result;
}

FailureSummary summarize_failures(const SweepResult& result) {
  FailureSummary s;
  std::map<double, std::pair<long, long>> per_eps;  // failures, trials
  long trials = 0;
  long slid = 0, under = 0, fixed = 0;
  double slide_sum = 0.0, under_sum = 0.0;
  int over_one = 0;
  for (const auto& r : result.rows) {
    trials += r.trials;
    s.failures += r.failures;
    s.certified_failures += r.certified_failures;
    per_eps[r.axis].first += r.failures;
    per_eps[r.axis].second += r.trials;
    const int n_slide = r.failures - r.no_slide;
    const int n_under = r.failures - r.no_underspend;
    if (n_slide > 0) slide_sum += r.slide_dist * n_slide;
    if (n_under > 0) under_sum += r.underspend_dist * n_under;
    slid += n_slide;
    under += n_under;
    fixed += r.failures;
    over_one += r.overspend_one;
  }
  s.mean_failure_rate = trials > 0 ? double(s.failures) / double(trials) : 0.0;
  for (const auto& [eps, ft] : per_eps) {
    s.max_point_failure_rate =
        std::max(s.max_point_failure_rate, double(ft.first) / double(ft.second));
  }
  s.mean_slide_dist = slid > 0 ? slide_sum / double(slid) : 0.0;
  s.mean_underspend_dist = under > 0 ? under_sum / double(under) : 0.0;
  s.overspend_one_share = fixed > 0 ? double(over_one) / double(fixed) : 1.0;
  return s;
}

void write_results_csv(std::ostream& out, const SweepResult& result) {
  out << kSweepCsvHeader << '\n';
  for (const auto& r : result.rows) {
    out << format_number(r.axis) << ',' << r.budget_K << ',' << format_number(r.mean_ratio)
        << ',' << format_number(r.ci_lo) << ',' << format_number(r.ci_hi) << ','
        << format_number(r.failure_rate) << ',' << format_number(r.slide_dist) << ','
        << format_number(r.underspend_dist) << ',' << format_number(r.overspend_S) << ','
        << format_number(r.ref_worst) << ',' << format_number(r.ref_theory) << '\n';
  }
}

void export_results(const SweepResult& result, const std::string& path, ExportFormat format) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path + "'");
  if (format == ExportFormat::Csv) {
    write_results_csv(out, result);
  } else {
    out << to_json(result).dump(2) << '\n';
  }
  if (!out) throw IoError("write failed for '" + path + "'");
}

std::vector<SweepRow> read_results_csv(const std::string& path) {
  const CsvTable table = read_csv(path);
  std::ostringstream header;
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    header << (i ? "," : "") << table.header[i];
  }
  if (header.str() != kSweepCsvHeader) throw IoError(path + ": unexpected header");
  std::vector<SweepRow> rows;
  const auto num = [](const std::string& s) { return s == "nan" ? kNaN : parse_double(s); };
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& f = table.rows[r];
    try {
      SweepRow row;
      row.axis = num(f[0]);
      row.budget_K = Index(parse_int(f[1]));
      row.mean_ratio = num(f[2]);
      row.ci_lo = num(f[3]);
      row.ci_hi = num(f[4]);
      row.failure_rate = num(f[5]);
      row.slide_dist = num(f[6]);
      row.underspend_dist = num(f[7]);
      row.overspend_S = num(f[8]);
      row.ref_worst = num(f[9]);
      row.ref_theory = num(f[10]);
      rows.push_back(row);
    } catch (const IoError& e) {
      throw IoError(row_tag(path, table.line_numbers[r]) + ": " + e.what());
    }
  }
  return rows;
}

}  // namespace lea
