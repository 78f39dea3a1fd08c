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

#ifndef LEA_DISTRIBUTION_HPP_
#define LEA_DISTRIBUTION_HPP_

#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "lea/effects.hpp"

namespace lea {

class EmpiricalCdf {
 public:
  explicit EmpiricalCdf(std::vector<double> values);
  template <typename Derived>
  static EmpiricalCdf of(const Eigen::DenseBase<Derived>& values) {
    return EmpiricalCdf(sorted_ascending(values));
  }

  // Fraction of values <= t.
  double eval(double t) const;
  // Number of values in the closed interval [a, b].
  Index count_in(double a, double b) const;
  // K-th largest value.
  double kth_largest(Index K) const;
  const std::vector<double>& sorted_values() const { return sorted_; }
  Index size() const { return Index(sorted_.size()); }

 private:
  std::vector<double> sorted_;
};

enum class Family { Uniform, Beta, TruncatedGaussian };

// Effect distribution on [0,1].
class DistributionSpec {
 public:
  static DistributionSpec uniform();
  static DistributionSpec beta(double alpha, double beta);
  static DistributionSpec truncated_gaussian(double mu, double sigma);
  // "uniform", "beta:a,b" or "gauss:mu,sigma".
  static DistributionSpec parse(const std::string& text);

  Family family() const { return family_; }
  double p1() const { return p1_; }
  double p2() const { return p2_; }
  // Gaussian standardization: a = -mu/sigma, b = (1-mu)/sigma, Z = Phi(b)-Phi(a).
  double gauss_a() const { return a_; }
  double gauss_b() const { return b_; }
  double gauss_Z() const { return z_; }

  double pdf(double t) const;
  double cdf(double t) const;
  // Integral of t f(t) over [lo, hi] (clipped to [0,1]).
  double first_moment(double lo, double hi) const;
  // Smallest t with cdf(t) >= p, by bisection.
  double quantile(double p) const;

  std::string name() const;
  std::string params() const;

 private:
  DistributionSpec(Family family, double p1, double p2);
  Family family_;
  double p1_ = 0.0;
  double p2_ = 0.0;
  double a_ = 0.0;
  double b_ = 0.0;
  double z_ = 1.0;
  double log_norm_ = 0.0;
};

double quantile_threshold(const DistributionSpec& spec, double K_over_M);
double quantile_threshold(const DistributionSpec& spec, Index K, Index M);
double quantile_threshold(const EmpiricalCdf& cdf, Index K);

double optimal_value_mass(const DistributionSpec& spec, double tau_K);
double density_sup(const DistributionSpec& spec);
double gamma_for(const DistributionSpec& spec, double K_over_M);

struct GammaRow {
  std::string family;
  std::string params;
  double K_over_M = 0.0;
  double tau_K = 0.0;
  double V_opt = 0.0;
  double c = 0.0;
  double gamma = 0.0;
};

std::vector<GammaRow> gamma_table(const DistributionSpec& spec,
                                  const std::vector<double>& budgets);
void write_gamma_table(std::ostream& out, const std::vector<GammaRow>& rows);

struct RegularityReport {
  double rho = 0.0;
  double c_hat = 0.0;
  double worst_lo = 0.0;
  double worst_hi = 0.0;
  Index units = 0;  // 0 for analytic specs
  bool is_regular_at(double c) const { return c_hat <= c; }
};

// Exhaustive over intervals whose endpoints are data values; intervals
// shorter than 2 rho are charged the minimum admissible length 2 rho.
RegularityReport check_regularity(const std::vector<double>& values, double rho);
// Sup-density shortcut; the reported interval is centred on the argmax.
RegularityReport check_regularity(const DistributionSpec& spec, double rho);

// (F_hat(t - rho), F_hat(t + rho)).
std::pair<double, double> cdf_bracket(const EstimateProfile<double>& estimates, double t);

// Number of estimates in [tau_hat_K - 2 rho, tau_hat_K + 4 rho].
Index near_threshold_mass_bound(const EstimateProfile<double>& estimates,
                                double tau_hat_K);

}  // namespace lea

#endif  // LEA_DISTRIBUTION_HPP_
