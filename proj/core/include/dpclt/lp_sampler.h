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

#ifndef DPCLT_LP_SAMPLER_H_
#define DPCLT_LP_SAMPLER_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace dpclt {

// Density on R^n proportional to exp(-c * ||x||_p^alpha).
struct NormPowerDensity {
  int n = 1;
  double p = 2.0;
  double alpha = 2.0;
  double c = 1.0;

  absl::Status Validate() const;

  // phi(x) = c * ||x||_p^alpha.
  double Phi(std::span<const double> x) const;
  // Gradient of phi; the sign vector convention is used at p = 1.
  void Gradient(std::span<const double> x, std::span<double> out) const;
  // ||grad phi(x)||_2^2.
  double GradientNormSquared(std::span<const double> x) const;

  nlohmann::json ToJson() const;
  static absl::StatusOr<NormPowerDensity> FromJson(const nlohmann::json& j);
};

// ||x||_p for p >= 1; p = infinity is accepted.
double LpNorm(std::span<const double> x, double p);

// Dense row-major matrix of samples.
struct SampleMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  std::span<const double> Row(std::size_t i) const {
    return {data.data() + i * cols, cols};
  }
  std::span<double> Row(std::size_t i) { return {data.data() + i * cols, cols}; }
  std::vector<double> Column(std::size_t j) const;
};

// Radial-uniform sampler: T^{1/alpha} * V with T ~ Gamma(n/alpha + 1) and V
// uniform on the unit l_p ball, rescaled by c^{-1/alpha}.
absl::StatusOr<SampleMatrix> SampleNormPower(const NormPowerDensity& d,
                                             std::size_t count,
                                             std::uint64_t seed,
                                             unsigned threads = 1);

// Independent coordinates with density proportional to exp(-|x|^p).
absl::StatusOr<SampleMatrix> SampleIndependent(double p, int n,
                                               std::size_t count,
                                               std::uint64_t seed,
                                               unsigned threads = 1);

// Cone-measure points on the unit l_p sphere.
absl::StatusOr<SampleMatrix> SampleLpSphere(double p, int n, std::size_t count,
                                            std::uint64_t seed,
                                            unsigned threads = 1);

struct NormConcentration {
  double median = 0.0;
  double iqr = 0.0;
};

// Median and interquartile range of ||X||_p / (n / (c alpha))^{1/alpha}.
absl::StatusOr<NormConcentration> NormConcentrationCheck(
    const NormPowerDensity& d, std::size_t count, std::uint64_t seed,
    unsigned threads = 1);

}  // namespace dpclt

#endif  // DPCLT_LP_SAMPLER_H_
