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

// One-dimensional noise families used by scalar noise-addition mechanisms,
// together with the privacy budgets they are calibrated against.

#ifndef DPCLT_NOISE1D_H_
#define DPCLT_NOISE1D_H_

#include <cstdint>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "absl/status/statusor.h"
#include "dpclt/tradeoff_curve.h"

namespace dpclt {

enum class NoiseFamily {
  kLaplace,
  kTruncatedLaplace,
  kGaussian,
  kDoubleGeometric,
  // Two-sided geometric plus an independent Uniform[-1/2, 1/2].
  kTgu,
};

std::string_view NoiseFamilyName(NoiseFamily family);
absl::StatusOr<NoiseFamily> ParseNoiseFamily(std::string_view name);

class PrivacyBudget {
 public:
  enum class Kind { kPureDp, kApproxDp, kGdp };

  static absl::StatusOr<PrivacyBudget> PureDp(double epsilon);
  static absl::StatusOr<PrivacyBudget> ApproxDp(double epsilon, double delta);
  static absl::StatusOr<PrivacyBudget> Gdp(double mu);

  Kind kind() const { return kind_; }
  double epsilon() const { return epsilon_; }
  double delta() const { return delta_; }
  double mu() const { return mu_; }

  // The curve a mechanism must dominate: f_{eps,0}, f_{eps,delta} or G_mu.
  TradeoffCurve TemplateCurve() const;

  nlohmann::json ToJson() const;
  static absl::StatusOr<PrivacyBudget> FromJson(const nlohmann::json& j);

 private:
  PrivacyBudget(Kind kind, double epsilon, double delta, double mu)
      : kind_(kind), epsilon_(epsilon), delta_(delta), mu_(mu) {}

  Kind kind_;
  double epsilon_;
  double delta_;
  double mu_;
};

// A symmetric noise law: `scale` times the standard member of its family.
// Standard members: Laplace(0, 1); Laplace(0, 1) truncated to [-h, h];
// N(0, 1); P(xi = k) = (1 - p)/(1 + p) * p^|k| on the integers; and that
// plus Uniform[-1/2, 1/2].
class NoiseModel {
 public:
  static absl::StatusOr<NoiseModel> Laplace(double scale);
  static absl::StatusOr<NoiseModel> TruncatedLaplace(double scale, double h);
  static absl::StatusOr<NoiseModel> Gaussian(double scale);
  static absl::StatusOr<NoiseModel> DoubleGeometric(double scale, double p_geom);
  static absl::StatusOr<NoiseModel> Tgu(double scale, double p_geom);

  NoiseFamily family() const { return family_; }
  double scale() const { return scale_; }
  // Truncation point of the standard member (TruncatedLaplace only).
  double h() const { return h_; }
  // Geometric ratio p (DoubleGeometric and TGU only).
  double p_geom() const { return p_geom_; }
  bool is_discrete() const { return family_ == NoiseFamily::kDoubleGeometric; }

  // Same family and shape parameters with a different scale multiplier.
  absl::StatusOr<NoiseModel> WithScale(double scale) const;

  // Density; for DoubleGeometric the probability mass at lattice points.
  double Pdf(double x) const;
  double Cdf(double x) const;
  // Left-continuous inverse of Cdf; +-infinity (or the support end) at 0, 1.
  double Quantile(double u) const;
  UnivariateLaw Law() const;

  nlohmann::json ToJson() const;
  static absl::StatusOr<NoiseModel> FromJson(const nlohmann::json& j);

 private:
  NoiseModel(NoiseFamily family, double scale, double h, double p_geom)
      : family_(family), scale_(scale), h_(h), p_geom_(p_geom) {}

  double StandardCdf(double z) const;
  double StandardQuantile(double u) const;

  NoiseFamily family_;
  double scale_;
  double h_;
  double p_geom_;
};

// h = log(1 + (e^eps - 1) / (2 delta)): the truncation that makes the
// truncated Laplace curve start at 1 - delta.
absl::StatusOr<double> TlapH(double epsilon, double delta);

// Noise for a query of the given sensitivity under `budget`:
//   Laplace          <- PureDp:   scale = sens / eps
//   DoubleGeometric,
//   TGU              <- PureDp:   scale = sens, p = e^-eps
//   TruncatedLaplace <- ApproxDp: scale = sens / eps, h = TlapH(eps, delta)
//   Gaussian         <- ApproxDp: scale = sens sqrt(2 log(1.25 / delta)) / eps
//                                 (classical calibration, eps <= 1)
//   Gaussian         <- Gdp:      scale = sens / mu
absl::StatusOr<NoiseModel> Calibrate(const PrivacyBudget& budget,
                                     double sensitivity, NoiseFamily family);

// Exact E X^2.
double SecondMoment(const NoiseModel& model);

// E X^2 by adaptive quadrature of x^2 times the density (or the exact
// lattice sum for discrete mass). Independent of SecondMoment.
absl::StatusOr<double> SecondMomentByQuadrature(const NoiseModel& model);

// The two closed forms for E X^2 of X = Lap^h(0, 1) / eps found in the
// literature. `integral_form` is (2 - e^-h (h^2 + 2h + 2)) / (1 - e^-h) / eps^2;
// `epsilon_form` is (2 / eps^2) (1 - eps^2 h (h + 2) / (e^h - 1)).
struct TruncatedLaplaceMomentCandidates {
  double integral_form = 0.0;
  double epsilon_form = 0.0;
};
TruncatedLaplaceMomentCandidates TruncatedLaplaceSecondMomentCandidates(
    double epsilon, double h);

// count i.i.d. draws; a pure function of (model, count, seed).
std::vector<double> Sample(const NoiseModel& model, std::size_t count,
                           std::uint64_t seed, unsigned threads = 1);

// T[X, X + shift]. Continuous families go through the quantile composition;
// TGU requires shift / scale to be an integer. DoubleGeometric is not
// supported (its optimal tests randomize on atoms; use TGU).
absl::StatusOr<TradeoffCurve> ExactTradeoff(const NoiseModel& model, double shift);

// Law resolver for CurveFromJson on noise_induced descriptors.
absl::StatusOr<UnivariateLaw> ResolveNoiseLaw(const nlohmann::json& noise);

// CurveFromJson with noise models resolved.
absl::StatusOr<TradeoffCurve> ParseCurve(const nlohmann::json& descriptor);

}  // namespace dpclt

#endif  // DPCLT_NOISE1D_H_
