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

#ifndef DPCLT_MECHANISMS_H_
#define DPCLT_MECHANISMS_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "absl/status/statusor.h"
#include "dpclt/lp_sampler.h"
#include "dpclt/noise1d.h"

namespace dpclt {

// M(D) = f(D) + t X.
struct MechanismSpec {
  // One-dimensional noise at unit scale (applied coordinate-wise), or an
  // n-dimensional norm-power density.
  std::variant<NoiseModel, NormPowerDensity> noise;
  double t = 0.0;
  double sensitivity = 1.0;
  PrivacyBudget budget;
  // t^2 E||X||_2^2 per release (per coordinate for one-dimensional noise).
  double expected_err_l2 = 0.0;

  bool is_norm_power() const {
    return std::holds_alternative<NormPowerDensity>(noise);
  }

  nlohmann::json ToJson() const;
  static absl::StatusOr<MechanismSpec> FromJson(const nlohmann::json& j);
};

// Builds a spec from its parts and fills in expected_err_l2. t = 0 is allowed.
absl::StatusOr<MechanismSpec> MakeMechanism(
    std::variant<NoiseModel, NormPowerDensity> noise, double t,
    double sensitivity, PrivacyBudget budget);

// One-dimensional noise calibrated by noise1d's rules.
absl::StatusOr<MechanismSpec> CalibrateMechanism(const PrivacyBudget& budget,
                                                 double sensitivity,
                                                 NoiseFamily family);

// Norm-power noise with t = sensitivity * mu^{-1} sqrt(||I||_2).
absl::StatusOr<MechanismSpec> CalibrateNormPower(const NormPowerDensity& d,
                                                 double sensitivity, double mu);

// Per-coordinate sensitivity 1 / records gives l2 sensitivity sqrt(n) / records.
double OneWayMarginalSensitivity(int n, std::size_t records);

absl::StatusOr<std::vector<double>> AnswerQuery(std::span<const double> answer,
                                                const MechanismSpec& spec,
                                                std::uint64_t seed);

struct ComparisonRow {
  std::string mechanism;
  // E xi^2 / (sensitivity^2 / eps^2).
  double normalized_variance = 0.0;
  // Same quantity by numeric quadrature of the noise density.
  double quadrature = 0.0;
};

// Rows Lap, G2006, TLap, G2019 at sensitivity 1.
absl::StatusOr<std::vector<ComparisonRow>> CompareMechanisms(double epsilon,
                                                             double delta);

struct LinfReport {
  double p = 0.0;
  double t = 0.0;
  double noise_linf = 0.0;
  // noise_linf / (sensitivity sqrt(log log n)).
  double ratio = 0.0;
};

struct LinfAnswer {
  std::vector<double> values;
  LinfReport report;
};

// Independent-coordinate noise with p = 2 log log n (natural logs), n >= 16.
absl::StatusOr<LinfAnswer> LinfMechanism(std::span<const double> answer,
                                         double sensitivity, double mu,
                                         std::uint64_t seed);

struct ErrReport {
  double err_l2 = 0.0;
  // Monte Carlo E||t X||_inf^2 and its standard error.
  double err_linf_mc = 0.0;
  double err_linf_std_error = 0.0;
};

absl::StatusOr<ErrReport> ComputeErrReport(const MechanismSpec& spec,
                                           std::size_t count, std::uint64_t seed);

struct BudgetCheckResult {
  bool dominates = false;
  double sup_gap = 0.0;
  // max(template - curve, 0) over the grid.
  double worst_violation = 0.0;
};

// One-dimensional noise is checked with its exact curve at shift
// `sensitivity`; norm-power noise with an empirical curve along a random unit
// direction scaled to the sensitivity.
absl::StatusOr<BudgetCheckResult> BudgetCheck(const MechanismSpec& spec,
                                              std::size_t grid_size,
                                              std::size_t count = 10000,
                                              std::uint64_t seed = 1);

}  // namespace dpclt

#endif  // DPCLT_MECHANISMS_H_
