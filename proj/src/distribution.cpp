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

#include "lea/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lea/csv.hpp"
#include "lea/special_functions.hpp"

namespace lea {

EmpiricalCdf::EmpiricalCdf(std::vector<double> values) : sorted_(std::move(values)) {
  if (sorted_.empty()) throw DomainError("empirical CDF needs at least one value");
  std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalCdf::eval(double t) const {
  const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), t);
  return double(it - sorted_.begin()) / double(sorted_.size());
}

Index EmpiricalCdf::count_in(double a, double b) const {
  if (b < a) return 0;
  const auto lo = std::lower_bound(sorted_.begin(), sorted_.end(), a);
  const auto hi = std::upper_bound(sorted_.begin(), sorted_.end(), b);
  return Index(hi - lo);
}

double EmpiricalCdf::kth_largest(Index K) const {
  check_budget(K, size());
  return sorted_[sorted_.size() - std::size_t(K)];
}

DistributionSpec::DistributionSpec(Family family, double p1, double p2)
    : family_(family), p1_(p1), p2_(p2) {
  switch (family_) {
    case Family::Uniform:
      break;
    case Family::Beta:
      if (!(p1 > 0.0 && p2 > 0.0)) throw DomainError("beta parameters must be positive");
      log_norm_ = log_beta(p1, p2);
      break;
    case Family::TruncatedGaussian:
      if (!(p2 > 0.0) || !std::isfinite(p1)) {
        throw DomainError("gaussian needs finite mu and positive sigma");
      }
      a_ = (0.0 - p1) / p2;
      b_ = (1.0 - p1) / p2;
      z_ = normal_cdf(b_) - normal_cdf(a_);
      if (!(z_ > 0.0)) throw DomainError("gaussian has no mass on [0,1]");
      break;
  }
}

DistributionSpec DistributionSpec::uniform() { return {Family::Uniform, 0.0, 0.0}; }

DistributionSpec DistributionSpec::beta(double alpha, double beta) {
  return {Family::Beta, alpha, beta};
}

DistributionSpec DistributionSpec::truncated_gaussian(double mu, double sigma) {
  return {Family::TruncatedGaussian, mu, sigma};
}

DistributionSpec DistributionSpec::parse(const std::string& text) {
  if (text == "uniform") return uniform();
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw IoError("unknown family '" + text + "'");
  const std::string head = text.substr(0, colon);
  const auto args = split_list(text.substr(colon + 1), ',');
  if (args.size() != 2) throw IoError("family '" + head + "' takes two parameters");
  const double x = parse_double(args[0]);
  const double y = parse_double(args[1]);
  if (head == "beta") return beta(x, y);
  if (head == "gauss" || head == "gaussian") return truncated_gaussian(x, y);
  throw IoError("unknown family '" + head + "'");
}

double DistributionSpec::pdf(double t) const {
  if (t < 0.0 || t > 1.0) return 0.0;
  switch (family_) {
    case Family::Uniform:
      return 1.0;
    case Family::Beta:
      return std::pow(t, p1_ - 1.0) * std::pow(1.0 - t, p2_ - 1.0) / std::exp(log_norm_);
    case Family::TruncatedGaussian:
      return normal_pdf((t - p1_) / p2_) / (p2_ * z_);
  }
  return 0.0;
}

double DistributionSpec::cdf(double t) const {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  switch (family_) {
    case Family::Uniform:
      return t;
    case Family::Beta:
      return incomplete_beta(t, p1_, p2_);
    case Family::TruncatedGaussian:
      return (normal_cdf((t - p1_) / p2_) - normal_cdf(a_)) / z_;
  }
  return 0.0;
}

double DistributionSpec::first_moment(double lo, double hi) const {
  lo = std::clamp(lo, 0.0, 1.0);
  hi = std::clamp(hi, 0.0, 1.0);
  if (hi <= lo) return 0.0;
  switch (family_) {
    case Family::Uniform:
      return 0.5 * (hi * hi - lo * lo);
    case Family::Beta: {
      const double mean = p1_ / (p1_ + p2_);
      return mean * (incomplete_beta(hi, p1_ + 1.0, p2_) -
                     incomplete_beta(lo, p1_ + 1.0, p2_));
    }
    case Family::TruncatedGaussian: {
      const double yl = (lo - p1_) / p2_;
      const double yh = (hi - p1_) / p2_;
      return (p1_ * (normal_cdf(yh) - normal_cdf(yl)) +
              p2_ * (normal_pdf(yl) - normal_pdf(yh))) /
             z_;
    }
  }
  return 0.0;
}

double DistributionSpec::quantile(double p) const {
  if (p <= 0.0) return 0.0;
  if (p >= 1.0) return 1.0;
  if (family_ == Family::Uniform) return p;
  double lo = 0.0;
  double hi = 1.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (cdf(mid) < p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::string DistributionSpec::name() const {
  switch (family_) {
    case Family::Uniform: return "uniform";
    case Family::Beta: return "beta";
    case Family::TruncatedGaussian: return "gauss";
  }
  return "uniform";
}

std::string DistributionSpec::params() const {
  switch (family_) {
    case Family::Uniform: return "";
    case Family::Beta: return "alpha=" + format_number(p1_) + ";beta=" + format_number(p2_);
    case Family::TruncatedGaussian:
      return "mu=" + format_number(p1_) + ";sigma=" + format_number(p2_);
  }
  return "";
}

double quantile_threshold(const DistributionSpec& spec, double K_over_M) {
  if (!(K_over_M > 0.0 && K_over_M <= 1.0)) throw DomainError("K/M must lie in (0,1]");
  return spec.quantile(1.0 - K_over_M);
}

double quantile_threshold(const DistributionSpec& spec, Index K, Index M) {
  check_budget(K, M);
  return quantile_threshold(spec, double(K) / double(M));
}

double quantile_threshold(const EmpiricalCdf& cdf, Index K) { return cdf.kth_largest(K); }

double optimal_value_mass(const DistributionSpec& spec, double tau_K) {
  if (!(tau_K >= 0.0 && tau_K <= 1.0)) throw DomainError("tau_K outside [0,1]");
  return spec.first_moment(tau_K, 1.0);
}

namespace {

double density_argmax(const DistributionSpec& spec) {
  switch (spec.family()) {
    case Family::Uniform:
      return 0.5;
    case Family::Beta: {
      const double a = spec.p1();
      const double b = spec.p2();
      if (a > 1.0 && b > 1.0) return (a - 1.0) / (a + b - 2.0);
      if (a < 1.0 && b >= 1.0) return 0.0;
      if (b < 1.0 && a >= 1.0) return 1.0;
      if (a < 1.0 && b < 1.0) return a <= b ? 0.0 : 1.0;
      return spec.pdf(0.0) >= spec.pdf(1.0) ? 0.0 : 1.0;
    }
    case Family::TruncatedGaussian:
      return std::clamp(spec.p1(), 0.0, 1.0);
  }
  return 0.5;
}

}  // namespace

double density_sup(const DistributionSpec& spec) {
  if (spec.family() == Family::Beta && (spec.p1() < 1.0 || spec.p2() < 1.0)) {
    return std::numeric_limits<double>::infinity();
  }
  return spec.pdf(density_argmax(spec));
}

double gamma_for(const DistributionSpec& spec, double K_over_M) {
  const double tau_K = quantile_threshold(spec, K_over_M);
  return std::sqrt(optimal_value_mass(spec, tau_K) / (8.0 * density_sup(spec)));
}

std::vector<GammaRow> gamma_table(const DistributionSpec& spec,
                                  const std::vector<double>& budgets) {
  std::vector<GammaRow> rows;
  const double c = density_sup(spec);
  for (double k : budgets) {
    GammaRow row;
    row.family = spec.name();
    row.params = spec.params();
    row.K_over_M = k;
    row.tau_K = quantile_threshold(spec, k);
    row.V_opt = optimal_value_mass(spec, row.tau_K);
    row.c = c;
    row.gamma = std::sqrt(row.V_opt / (8.0 * c));
    rows.push_back(row);
  }
  return rows;
}

void write_gamma_table(std::ostream& out, const std::vector<GammaRow>& rows) {
  out << "family,params,K_over_M,tau_K,V_opt,c,gamma\n";
  for (const auto& r : rows) {
    out << r.family << ',' << r.params << ',' << format_number(r.K_over_M) << ','
        << format_number(r.tau_K) << ',' << format_number(r.V_opt) << ','
        << format_number(r.c) << ',' << format_number(r.gamma) << '\n';
  }
}

RegularityReport check_regularity(const std::vector<double>& values, double rho) {
  if (!(rho > 0.0)) throw DomainError("rho must be positive");
  if (values.empty()) throw DomainError("regularity needs at least one value");
  std::vector<double> v = values;
  std::sort(v.begin(), v.end());
  const double n = double(v.size());
  const double min_len = 2.0 * rho;

  RegularityReport report;
  report.rho = rho;
  report.units = Index(v.size());
  double best_lo = v.front();
  double best_len = min_len;
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (std::size_t j = i; j < v.size(); ++j) {
      const double len = std::max(v[j] - v[i], min_len);
      const double c = (double(j - i + 1) / n) / len;
      if (c > report.c_hat) {
        report.c_hat = c;
        best_lo = v[i];
        best_len = len;
      }
    }
  }
  report.worst_lo = std::max(0.0, std::min(best_lo, 1.0 - best_len));
  report.worst_hi = report.worst_lo + best_len;
  return report;
}

RegularityReport check_regularity(const DistributionSpec& spec, double rho) {
  if (!(rho > 0.0)) throw DomainError("rho must be positive");
  RegularityReport report;
  report.rho = rho;
  report.c_hat = density_sup(spec);
  const double peak = density_argmax(spec);
  report.worst_lo = std::clamp(peak - rho, 0.0, std::max(0.0, 1.0 - 2.0 * rho));
  report.worst_hi = report.worst_lo + 2.0 * rho;
  return report;
}

std::pair<double, double> cdf_bracket(const EstimateProfile<double>& estimates, double t) {
  const auto cdf = EmpiricalCdf::of(estimates.tau_hats());
  return {cdf.eval(t - estimates.rho()), cdf.eval(t + estimates.rho())};
}

Index near_threshold_mass_bound(const EstimateProfile<double>& estimates,
                                double tau_hat_K) {
  const double rho = estimates.rho();
  const auto cdf = EmpiricalCdf::of(estimates.tau_hats());
  return cdf.count_in(tau_hat_K - 2.0 * rho, tau_hat_K + 4.0 * rho);
}

}  // namespace lea
