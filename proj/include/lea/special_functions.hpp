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

#ifndef LEA_SPECIAL_FUNCTIONS_HPP_
#define LEA_SPECIAL_FUNCTIONS_HPP_

#include <functional>
#include <optional>

namespace lea {

double normal_pdf(double x);
double normal_cdf(double x);

double log_beta(double a, double b);

// Adaptive Gauss-Kronrod (7/15) quadrature on [a, b].
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = 1e-12);

// Regularized incomplete beta I_x(a, b).  Integer parameters take the
// binomial-sum path; everything else goes through quadrature.
double incomplete_beta(double x, double a, double b);

// Quadrature-only evaluation, kept separate so the fast path can be checked
// against it.
double incomplete_beta_quadrature(double x, double a, double b);

// Binomial-sum form for positive integer a, b; empty otherwise.
std::optional<double> incomplete_beta_polynomial(double x, double a, double b);

}  // namespace lea

#endif  // LEA_SPECIAL_FUNCTIONS_HPP_
