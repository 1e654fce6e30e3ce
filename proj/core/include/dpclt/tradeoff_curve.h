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

// Trade-off (ROC) functions.
//
// A trade-off function maps a type I error level alpha in [0, 1] to the
// smallest type II error beta achievable by any test between two
// distributions. Larger curves mean more privacy. This header provides the
// closed-form templates f_{eps,delta} and G_mu, curves induced by shifting a
// one-dimensional log-concave noise, piecewise-linear empirical curves,
// affine conjugation under truncation, and distances between curves.

#ifndef DPCLT_TRADEOFF_CURVE_H_
#define DPCLT_TRADEOFF_CURVE_H_

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "absl/status/statusor.h"

namespace dpclt {

// CDF and quantile of a one-dimensional law. cdf must accept +-infinity and
// quantile must accept 0 and 1 (returning the support endpoints).
struct UnivariateLaw {
  std::function<double(double)> cdf;
  std::function<double(double)> quantile;
};

enum class CurveKind {
  kFEpsDelta,
  kGdp,
  kNoiseInduced,
  kEmpirical,
  kAffineConjugate,
};

std::string_view CurveKindName(CurveKind kind);

// Closed interval of alpha values.
struct AlphaInterval {
  double lo = 0.0;
  double hi = 0.0;
};

// An immutable trade-off function. Copies share the underlying evaluator.
class TradeoffCurve {
 public:
  static absl::StatusOr<TradeoffCurve> FEpsDelta(double epsilon, double delta);
  static absl::StatusOr<TradeoffCurve> Gdp(double mu);
  // The identity trade-off 1 - alpha (perfect privacy).
  static TradeoffCurve Identity();
  // T[X, X + shift] for X with the given law. `law_descriptor` is recorded
  // in the curve's JSON descriptor so the curve can be rebuilt later.
  static absl::StatusOr<TradeoffCurve> FromLaw(UnivariateLaw law, double shift,
                                               nlohmann::json law_descriptor);
  // Linear interpolation of betas[j] at alpha = j / (betas.size() - 1).
  static absl::StatusOr<TradeoffCurve> PiecewiseLinear(std::vector<double> betas);

  // Evaluates the curve; alpha is clamped into [0, 1].
  double operator()(double alpha) const;
  // Evaluates the curve, rejecting alpha outside [0, 1].
  absl::StatusOr<double> At(double alpha) const;

  CurveKind kind() const { return rep_->kind; }
  // {"kind": <name>, ...parameters}.
  const nlohmann::json& descriptor() const { return rep_->descriptor; }
  // Alpha ranges on which the raw value was clamped into [0, 1]. Only affine
  // conjugates populate this.
  const std::vector<AlphaInterval>& clamped_intervals() const {
    return rep_->clamped;
  }
  // Grid values of an empirical curve; empty for other kinds.
  const std::vector<double>& grid_betas() const { return rep_->betas; }

 private:
  struct Rep {
    CurveKind kind;
    nlohmann::json descriptor;
    std::function<double(double)> eval;
    std::vector<AlphaInterval> clamped;
    std::vector<double> betas;
  };

  explicit TradeoffCurve(std::shared_ptr<const Rep> rep) : rep_(std::move(rep)) {}

  friend absl::StatusOr<TradeoffCurve> AffineConjugate(const TradeoffCurve& f,
                                                       const UnivariateLaw& base,
                                                       double h);

  std::shared_ptr<const Rep> rep_;
};

// f_{eps,delta}(alpha) = max(0, 1 - delta - e^eps alpha, e^-eps (1 - delta - alpha)).
absl::StatusOr<double> EvalFEpsDelta(double epsilon, double delta, double alpha);

// G_mu(alpha) = Phi(-Phi^{-1}(alpha) - mu).
absl::StatusOr<double> EvalGdp(double mu, double alpha);

// F(F^{-1}(1 - alpha) - shift): the trade-off between X and X + shift when X
// is log-concave with CDF F.
absl::StatusOr<double> TradeoffFromCdf(const UnivariateLaw& law, double shift,
                                       double alpha);

// Trade-off of the +-h truncation of a noise whose untruncated curve is f,
// computed as L_h o f o L_h^{-1} with L_h(x) = (x - F(-h)) / (F(h) - F(-h)).
// Values are clamped into [0, 1]; the clamped alpha ranges are recorded.
absl::StatusOr<TradeoffCurve> AffineConjugate(const TradeoffCurve& f,
                                              const UnivariateLaw& base,
                                              double h);

// {0, 1/(n-1), ..., 1}.
std::vector<double> UniformAlphaGrid(std::size_t grid_size);

// max_j |f(a_j) - g(a_j)| over the uniform grid.
absl::StatusOr<double> SupDistance(const TradeoffCurve& f, const TradeoffCurve& g,
                                   std::size_t grid_size);

// True iff f(a_j) >= g(a_j) - 1e-12 at every uniform grid point.
absl::StatusOr<bool> Dominates(const TradeoffCurve& f, const TradeoffCurve& g,
                               std::size_t grid_size);

// Levy distance between the empirical CDF of `sorted_samples` and
// `reference`: the smallest t with
//   reference(x_k - t) - t <= (k-1)/n  and  k/n <= reference(x_k + t) + t
// for every k, located by bisection to 1e-10.
absl::StatusOr<double> LevyDistanceEmpirical(
    std::span<const double> sorted_samples,
    const std::function<double(double)>& reference);

struct ShapeReport {
  bool non_increasing = true;
  bool convex = true;
  bool in_unit_interval = true;
  // Largest violation seen across the three checks.
  double worst_violation = 0.0;
};

// Checks monotonicity, convexity (successive drops non-increasing) and range
// on the uniform grid, each within `tolerance`.
ShapeReport CheckShape(const TradeoffCurve& f, std::size_t grid_size,
                       double tolerance = 1e-9);

// "alpha,beta" CSV with one row per uniform grid point. Values are written
// with 17 significant digits.
std::string CurveToCsv(const TradeoffCurve& f, std::size_t grid_size);

// Parses the output of CurveToCsv (comment lines starting with '#' and the
// header are skipped).
absl::StatusOr<std::vector<std::pair<double, double>>> ParseCurveCsv(
    std::string_view csv);

// Maps the "noise" member of a noise_induced descriptor to its law.
using LawResolver =
    std::function<absl::StatusOr<UnivariateLaw>(const nlohmann::json&)>;

// Rebuilds a curve from descriptor(). noise_induced curves need a resolver.
absl::StatusOr<TradeoffCurve> CurveFromJson(const nlohmann::json& descriptor,
                                            const LawResolver& resolver = nullptr);

}  // namespace dpclt

#endif  // DPCLT_TRADEOFF_CURVE_H_
