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

#include "lea/special_functions.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "lea/errors.hpp"

namespace lea {

namespace {

// Kronrod 15-point nodes/weights and the embedded Gauss 7-point weights.
constexpr std::array<double, 8> kXk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

void gk15(const std::function<double(double)>& f, double a, double b, double* kronrod,
          double* error) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double k = fc * kWk[7];
  double g = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXk[j];
    const double sum = f(center - dx) + f(center + dx);
    k += kWk[j] * sum;
    if (j % 2 == 1) g += kWg[j / 2] * sum;
  }
  *kronrod = k * half;
  *error = std::abs((k - g) * half);
}

double adapt(const std::function<double(double)>& f, double a, double b, double tol,
             int depth) {
  double value = 0.0;
  double error = 0.0;
  gk15(f, a, b, &value, &error);
  if (error <= tol || depth >= 60 || b - a < 1e-15) return value;
  const double mid = 0.5 * (a + b);
  return adapt(f, a, mid, 0.5 * tol, depth + 1) + adapt(f, mid, b, 0.5 * tol, depth + 1);
}

bool is_small_integer(double v) {
  return v >= 1.0 && v <= 200.0 && v == std::floor(v);
}

void check_beta_args(double x, double a, double b) {
  if (!(a > 0.0 && b > 0.0)) throw DomainError("beta parameters must be positive");
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("incomplete beta argument outside [0,1]");
}

// (1/a) * integral_0^{x^a} (1 - s^{1/a})^{b-1} ds, the substitution s = t^a
// removing the t^{a-1} endpoint singularity.
double lower_tail_integral(double x, double a, double b) {
  const double upper = std::pow(x, a);
  auto integrand = [a, b](double s) {
    return std::pow(1.0 - std::pow(s, 1.0 / a), b - 1.0);
  };
  return integrate(integrand, 0.0, upper, 1e-14) / a;
}

}  // namespace

double normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double log_beta(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol) {
  if (a == b) return 0.0;
  if (a > b) return -integrate(f, b, a, abs_tol);
  return adapt(f, a, b, abs_tol, 0);
}

double incomplete_beta_quadrature(double x, double a, double b) {
  check_beta_args(x, a, b);
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  if (x > 0.5) return 1.0 - incomplete_beta_quadrature(1.0 - x, b, a);
  return lower_tail_integral(x, a, b) / std::exp(log_beta(a, b));
}

std::optional<double> incomplete_beta_polynomial(double x, double a, double b) {
  check_beta_args(x, a, b);
  if (!is_small_integer(a) || !is_small_integer(b)) return std::nullopt;
  const int ia = static_cast<int>(a);
  const int n = ia + static_cast<int>(b) - 1;
  // P[Binomial(n, x) >= a], accumulated with log-space binomial coefficients.
  double sum = 0.0;
  for (int j = ia; j <= n; ++j) {
    const double log_choose =
        std::lgamma(n + 1.0) - std::lgamma(j + 1.0) - std::lgamma(n - j + 1.0);
    const double term = std::exp(log_choose) * std::pow(x, j) * std::pow(1.0 - x, n - j);
    sum += term;
  }
  return std::min(1.0, sum);
}

double incomplete_beta(double x, double a, double b) {
  if (auto poly = incomplete_beta_polynomial(x, a, b)) return *poly;
  return incomplete_beta_quadrature(x, a, b);
}

}  // namespace lea
