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

#ifndef DPCLT_EMPIRICAL_ROC_H_
#define DPCLT_EMPIRICAL_ROC_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "absl/status/statusor.h"
#include "dpclt/lp_sampler.h"
#include "dpclt/tradeoff_curve.h"

namespace dpclt {

// How the empirical threshold tests break ties and pick thresholds.
enum class TieVariant {
  // h_j is the j-th largest H0 log-likelihood ratio, beta counts b < h.
  kAppendix,
  // h_j = a_(N-j) with a_(0) = -inf, alpha counts a > h, beta counts b <= h.
  kMainText,
};

std::string_view TieVariantName(TieVariant variant);
absl::StatusOr<TieVariant> ParseTieVariant(std::string_view name);

struct EmpiricalCurve {
  // beta_j at alpha = j / N, j = 0..N.
  std::vector<double> betas;
  std::size_t sample_size = 0;
  std::uint64_t seed = 0;
  // Describes the pair of distributions that were tested.
  nlohmann::json tag;

  absl::StatusOr<TradeoffCurve> Curve() const;
};

// Empirical trade-off from log-likelihood ratios log(q/p): `h0_llr` evaluated
// at samples of p and `h1_llr` at samples of q. Ties are randomized so that
// the type I error at grid point j is exactly j / N.
std::vector<double> BetasFromLlr(std::vector<double> h0_llr,
                                 std::vector<double> h1_llr,
                                 TieVariant variant);

// phi(x + v) - phi(x) - v^T I v / 2 with I the exact Fisher matrix of d.
absl::StatusOr<double> LikelihoodProjection(const NormPowerDensity& d,
                                            std::span<const double> v,
                                            std::span<const double> x);

// Curve of X versus X + v with X ~ d, using the rows of `samples`.
absl::StatusOr<EmpiricalCurve> EmpiricalTradeoffFromSamples(
    const NormPowerDensity& d, std::span<const double> v,
    const SampleMatrix& samples, TieVariant variant = TieVariant::kAppendix);

absl::StatusOr<EmpiricalCurve> EmpiricalTradeoff(
    const NormPowerDensity& d, std::span<const double> v, std::size_t count,
    std::uint64_t seed, TieVariant variant = TieVariant::kAppendix,
    unsigned threads = 1);

using LogDensity = std::function<double(std::span<const double>)>;
using PointSampler =
    std::function<absl::StatusOr<SampleMatrix>(std::size_t, std::uint64_t)>;

// Curve of P versus Q from unnormalized log densities and samplers. The two
// samplers receive seeds derived from `seed`.
absl::StatusOr<EmpiricalCurve> EmpiricalTradeoffGeneral(
    const LogDensity& log_p, const LogDensity& log_q, const PointSampler& sample_p,
    const PointSampler& sample_q, std::size_t count, std::uint64_t seed,
    TieVariant variant = TieVariant::kMainText);

struct ProjectionTradeoff {
  double beta = 0.0;
  // The raw value left [0, 1] and was clamped.
  bool clamped = false;
};

// F_v(-F_{-v}^{-1}(alpha) - vIv).
absl::StatusOr<ProjectionTradeoff> TradeoffFromProjectionCdfs(
    const UnivariateLaw& f_v, const UnivariateLaw& f_neg_v, double vIv,
    double alpha);

// The projection route: the randomized Neyman-Pearson curve built from the
// empirical laws of P_v(X) and P_{-v}(X), evaluated on a uniform grid of
// `grid_size` points.
absl::StatusOr<TradeoffCurve> ProjectionTradeoffCurve(
    const NormPowerDensity& d, std::span<const double> v,
    const SampleMatrix& samples, std::size_t grid_size);

enum class DirectionMode { kRandomUnit, kAxis };

std::string_view DirectionModeName(DirectionMode mode);
absl::StatusOr<DirectionMode> ParseDirectionMode(std::string_view name);

// Unit shift direction: e_1, or a normalized Gaussian drawn from `seed`.
std::vector<double> ShiftDirection(int n, DirectionMode mode, std::uint64_t seed);

struct ExperimentConfig {
  int n = 30;
  double p = 2.0;
  double alpha = 2.0;
  double c = 0.5;
  double mu = 1.0;
  std::size_t sample_size = 10000;
  std::uint64_t seed = 1;
  DirectionMode direction_mode = DirectionMode::kRandomUnit;
  TieVariant variant = TieVariant::kAppendix;
  std::size_t grid_size = 1001;

  absl::Status Validate() const;
  nlohmann::json ToJson() const;
  // Unknown keys are rejected; missing keys keep their defaults.
  static absl::StatusOr<ExperimentConfig> FromJson(const nlohmann::json& j);
};

struct CltDeviationResult {
  // Noise scale t = mu^{-1} sqrt(||I||_2).
  double scale = 0.0;
  double sup_to_gmu = 0.0;
  double ks_projection = 0.0;
  double levy_projection = 0.0;
  // Sup distance of the exact curve to G_mu when the tested direction
  // factorizes (p == alpha with an axis shift); empty otherwise.
  std::optional<double> exact_sup_to_gmu;
  EmpiricalCurve curve;
};

absl::StatusOr<CltDeviationResult> CltDeviation(const ExperimentConfig& config,
                                                unsigned threads = 1);

}  // namespace dpclt

#endif  // DPCLT_EMPIRICAL_ROC_H_
