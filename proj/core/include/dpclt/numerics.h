//
// Copyright 2026 The dpclt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

// Scalar numerics shared by every module: the standard normal law, Gamma
// ratios in log space, bracketing root finders and adaptive quadrature.

#ifndef DPCLT_NUMERICS_H_
#define DPCLT_NUMERICS_H_

#include <functional>

#include "absl/status/statusor.h"

namespace dpclt {

// Phi(x). Accurate in both tails.
double NormalCdf(double x);

// Phi^{-1}(u) for u in [0, 1]; returns -inf/+inf at the endpoints.
double NormalQuantile(double u);

double NormalPdf(double x);

// log(Gamma(a) / Gamma(b)) for a, b > 0.
double LogGammaRatio(double a, double b);

// Gamma(a) / Gamma(b); falls back to a log-Gamma difference on overflow.
double GammaRatio(double a, double b);

// Finds x in [lo, hi] with f(x) = 0 by bisection. f(lo) and f(hi) must have
// opposite signs (zero counts as either). Stops when the bracket is narrower
// than `tolerance`.
absl::StatusOr<double> BisectRoot(const std::function<double(double)>& f,
                                  double lo, double hi,
                                  double tolerance = 1e-12,
                                  int max_iterations = 400);

// Smallest t in [lo, hi] for which `predicate` holds, assuming the predicate
// is monotone (false ... false true ... true) and holds at `hi`.
absl::StatusOr<double> BisectThreshold(const std::function<bool(double)>& predicate,
                                       double lo, double hi,
                                       double tolerance = 1e-12,
                                       int max_iterations = 400);

// Adaptive Gauss-Kronrod integral of f over [a, b]. Either bound may be
// infinite.
absl::StatusOr<double> Integrate(const std::function<double(double)>& f,
                                 double a, double b,
                                 double relative_tolerance = 1e-12);

}  // namespace dpclt

#endif  // DPCLT_NUMERICS_H_
