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

#include "dpclt/numerics.h"

#include <cmath>
#include <exception>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace dpclt {

double NormalCdf(double x) {
  if (std::isnan(x)) return x;
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double NormalQuantile(double u) {
  if (u <= 0.0) return -std::numeric_limits<double>::infinity();
  if (u >= 1.0) return std::numeric_limits<double>::infinity();
  // erfc_inv keeps full relative precision in the lower tail; reflect for
  // the upper half.
  if (u < 0.5) {
    return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * u);
  }
  return std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * (1.0 - u));
}

double NormalPdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

double LogGammaRatio(double a, double b) {
  const double ratio = GammaRatio(a, b);
  if (ratio > 0.0 && std::isfinite(ratio)) return std::log(ratio);
  return std::lgamma(a) - std::lgamma(b);
}

double GammaRatio(double a, double b) {
  try {
    return boost::math::tgamma_ratio(a, b);
  } catch (const std::exception&) {
    return std::exp(std::lgamma(a) - std::lgamma(b));
  }
}

absl::StatusOr<double> BisectRoot(const std::function<double(double)>& f,
                                  double lo, double hi, double tolerance,
                                  int max_iterations) {
  double f_lo = f(lo);
  double f_hi = f(hi);
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  if (std::isnan(f_lo) || std::isnan(f_hi) || (f_lo > 0) == (f_hi > 0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("BisectRoot: no sign change on [", lo, ", ", hi, "]"));
  }
  for (int i = 0; i < max_iterations && hi - lo > tolerance; ++i) {
    const double mid = lo + 0.5 * (hi - lo);
    const double f_mid = f(mid);
    if (f_mid == 0.0) return mid;
    if ((f_mid > 0) == (f_lo > 0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return lo + 0.5 * (hi - lo);
}

absl::StatusOr<double> BisectThreshold(
    const std::function<bool(double)>& predicate, double lo, double hi,
    double tolerance, int max_iterations) {
  if (!predicate(hi)) {
    return absl::InvalidArgumentError(
        absl::StrCat("BisectThreshold: predicate fails at upper bound ", hi));
  }
  if (predicate(lo)) return lo;
  for (int i = 0; i < max_iterations && hi - lo > tolerance; ++i) {
    const double mid = lo + 0.5 * (hi - lo);
    if (predicate(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

absl::StatusOr<double> Integrate(const std::function<double(double)>& f,
                                 double a, double b,
                                 double relative_tolerance) {
  if (a == b) return 0.0;
  double error = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      f, a, b, /*max_depth=*/20, relative_tolerance, &error);
  if (!std::isfinite(value)) {
    return absl::InternalError("Integrate: non-finite integral");
  }
  return value;
}

}  // namespace dpclt
