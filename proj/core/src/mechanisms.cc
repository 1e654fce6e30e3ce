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

#include "dpclt/mechanisms.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "dpclt/empirical_roc.h"
#include "dpclt/fisher_moments.h"
#include "dpclt/random.h"
#include "dpclt/stats.h"
#include "dpclt/status_macros.h"

namespace dpclt {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

absl::Status CheckPositive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    return absl::InvalidArgumentError(
        absl::StrCat(name, " must be finite and > 0, got ", value));
  }
  return absl::OkStatus();
}

absl::StatusOr<double> UnitSecondMoment(
    const std::variant<NoiseModel, NormPowerDensity>& noise) {
  if (const auto* model = std::get_if<NoiseModel>(&noise)) {
    return SecondMoment(*model);
  }
  const auto& d = std::get<NormPowerDensity>(noise);
  ASSIGN_OR_RETURN(double second, SecondMomentExact(d.n, d.p, d.alpha));
  return std::pow(d.c, -2.0 / d.alpha) * second;
}

// Unit-scale noise rows: count x n for norm-power noise, count x dim of
// i.i.d. one-dimensional noise otherwise.
absl::StatusOr<SampleMatrix> UnitNoise(const MechanismSpec& spec,
                                       std::size_t dim, std::size_t count,
                                       std::uint64_t seed) {
  if (spec.is_norm_power()) {
    return SampleNormPower(std::get<NormPowerDensity>(spec.noise), count, seed);
  }
  SampleMatrix m;
  m.rows = count;
  m.cols = dim;
  m.data = Sample(std::get<NoiseModel>(spec.noise), count * dim, seed);
  return m;
}

}  // namespace

nlohmann::json MechanismSpec::ToJson() const {
  nlohmann::json noise_json;
  if (const auto* model = std::get_if<NoiseModel>(&noise)) {
    noise_json = {{"type", "noise1d"}, {"model", model->ToJson()}};
  } else {
    noise_json = {{"type", "norm_power"},
                  {"density", std::get<NormPowerDensity>(noise).ToJson()}};
  }
  return {{"noise", noise_json},
          {"t", t},
          {"sensitivity", sensitivity},
          {"budget", budget.ToJson()},
          {"expected_err_l2", expected_err_l2}};
}

absl::StatusOr<MechanismSpec> MechanismSpec::FromJson(const nlohmann::json& j) {
  try {
    const auto& noise_json = j.at("noise");
    const std::string type = noise_json.at("type").get<std::string>();
    ASSIGN_OR_RETURN(PrivacyBudget budget, PrivacyBudget::FromJson(j.at("budget")));
    const double t = j.at("t").get<double>();
    const double sensitivity = j.at("sensitivity").get<double>();
    if (type == "noise1d") {
      ASSIGN_OR_RETURN(NoiseModel model, NoiseModel::FromJson(noise_json.at("model")));
      return MakeMechanism(model, t, sensitivity, budget);
    }
    if (type == "norm_power") {
      ASSIGN_OR_RETURN(NormPowerDensity d,
                       NormPowerDensity::FromJson(noise_json.at("density")));
      return MakeMechanism(d, t, sensitivity, budget);
    }
    return absl::InvalidArgumentError(absl::StrCat("unknown noise type '", type, "'"));
  } catch (const nlohmann::json::exception& e) {
    return absl::InvalidArgumentError(absl::StrCat("bad mechanism JSON: ", e.what()));
  }
}

absl::StatusOr<MechanismSpec> MakeMechanism(
    std::variant<NoiseModel, NormPowerDensity> noise, double t,
    double sensitivity, PrivacyBudget budget) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    return absl::InvalidArgumentError(absl::StrCat("t must be finite and >= 0, got ", t));
  }
  RETURN_IF_ERROR(CheckPositive(sensitivity, "sensitivity"));
  if (const auto* d = std::get_if<NormPowerDensity>(&noise)) {
    RETURN_IF_ERROR(d->Validate());
  }
  ASSIGN_OR_RETURN(double second, UnitSecondMoment(noise));
  return MechanismSpec{std::move(noise), t, sensitivity, budget, t * t * second};
}

absl::StatusOr<MechanismSpec> CalibrateMechanism(const PrivacyBudget& budget,
                                                 double sensitivity,
                                                 NoiseFamily family) {
  ASSIGN_OR_RETURN(NoiseModel model, Calibrate(budget, sensitivity, family));
  ASSIGN_OR_RETURN(NoiseModel unit, model.WithScale(1.0));
  return MakeMechanism(unit, model.scale(), sensitivity, budget);
}

absl::StatusOr<MechanismSpec> CalibrateNormPower(const NormPowerDensity& d,
                                                 double sensitivity, double mu) {
  RETURN_IF_ERROR(d.Validate());
  RETURN_IF_ERROR(CheckPositive(sensitivity, "sensitivity"));
  ASSIGN_OR_RETURN(PrivacyBudget budget, PrivacyBudget::Gdp(mu));
  ASSIGN_OR_RETURN(double scale, GdpScale(d.n, d.p, d.alpha, d.c, mu));
  return MakeMechanism(d, sensitivity * scale, sensitivity, budget);
}

double OneWayMarginalSensitivity(int n, std::size_t records) {
  return std::sqrt(static_cast<double>(n)) / static_cast<double>(records);
}

absl::StatusOr<std::vector<double>> AnswerQuery(std::span<const double> answer,
                                                const MechanismSpec& spec,
                                                std::uint64_t seed) {
  for (double v : answer) {
    if (!std::isfinite(v)) {
      return absl::InvalidArgumentError("query answer has non-finite entries");
    }
  }
  if (answer.empty()) return absl::InvalidArgumentError("query answer is empty");
  if (spec.is_norm_power() &&
      answer.size() != static_cast<std::size_t>(std::get<NormPowerDensity>(spec.noise).n)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "answer has dimension ", answer.size(), " but the noise has n = ",
        std::get<NormPowerDensity>(spec.noise).n));
  }
  std::vector<double> out(answer.begin(), answer.end());
  if (spec.t == 0.0) return out;
  ASSIGN_OR_RETURN(SampleMatrix noise, UnitNoise(spec, answer.size(), 1, seed));
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += spec.t * noise.data[i];
  return out;
}

absl::StatusOr<std::vector<ComparisonRow>> CompareMechanisms(double epsilon,
                                                             double delta) {
  RETURN_IF_ERROR(CheckPositive(epsilon, "epsilon"));
  if (!(delta > 0.0 && delta < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("delta must lie in (0, 1), got ", delta));
  }
  const double unit = 1.0 / (epsilon * epsilon);
  std::vector<ComparisonRow> rows;

  ASSIGN_OR_RETURN(NoiseModel lap, NoiseModel::Laplace(1.0 / epsilon));
  ASSIGN_OR_RETURN(double lap_quad, SecondMomentByQuadrature(lap));
  rows.push_back({"Lap", SecondMoment(lap) / unit, lap_quad / unit});

  // Classical Gaussian calibration, evaluated without its epsilon <= 1 guard.
  const double sigma = std::sqrt(2.0 * std::log(1.25 / delta)) / epsilon;
  ASSIGN_OR_RETURN(NoiseModel g2006, NoiseModel::Gaussian(sigma));
  ASSIGN_OR_RETURN(double g2006_quad, SecondMomentByQuadrature(g2006));
  rows.push_back({"G2006", SecondMoment(g2006) / unit, g2006_quad / unit});

  ASSIGN_OR_RETURN(PrivacyBudget approx, PrivacyBudget::ApproxDp(epsilon, delta));
  ASSIGN_OR_RETURN(NoiseModel tlap,
                   Calibrate(approx, 1.0, NoiseFamily::kTruncatedLaplace));
  ASSIGN_OR_RETURN(double tlap_quad, SecondMomentByQuadrature(tlap));
  rows.push_back({"TLap", SecondMoment(tlap) / unit, tlap_quad / unit});

  ASSIGN_OR_RETURN(PrivacyBudget gdp, PrivacyBudget::Gdp(epsilon));
  ASSIGN_OR_RETURN(NoiseModel g2019, Calibrate(gdp, 1.0, NoiseFamily::kGaussian));
  ASSIGN_OR_RETURN(double g2019_quad, SecondMomentByQuadrature(g2019));
  rows.push_back({"G2019", SecondMoment(g2019) / unit, g2019_quad / unit});
  return rows;
}

absl::StatusOr<LinfAnswer> LinfMechanism(std::span<const double> answer,
                                         double sensitivity, double mu,
                                         std::uint64_t seed) {
  const std::size_t n = answer.size();
  if (n < 16) {
    return absl::InvalidArgumentError(absl::StrCat(
        "the l_inf mechanism needs n >= 16 so that log log n > 1, got n = ", n));
  }
  RETURN_IF_ERROR(CheckPositive(sensitivity, "sensitivity"));
  RETURN_IF_ERROR(CheckPositive(mu, "mu"));
  const double log_log_n = std::log(std::log(static_cast<double>(n)));
  LinfAnswer out;
  out.report.p = 2.0 * log_log_n;
  ASSIGN_OR_RETURN(double fisher,
                   FisherInfoExact(static_cast<int>(n), out.report.p, out.report.p));
  out.report.t = sensitivity * std::sqrt(fisher) / mu;
  ASSIGN_OR_RETURN(SampleMatrix noise,
                   SampleIndependent(out.report.p, static_cast<int>(n), 1, seed));
  out.values.assign(answer.begin(), answer.end());
  double sup = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = out.report.t * noise.data[i];
    out.values[i] += e;
    sup = std::max(sup, std::abs(e));
  }
  out.report.noise_linf = sup;
  out.report.ratio = sup / (sensitivity * std::sqrt(log_log_n));
  return out;
}

absl::StatusOr<ErrReport> ComputeErrReport(const MechanismSpec& spec,
                                           std::size_t count, std::uint64_t seed) {
  ErrReport out;
  out.err_l2 = spec.expected_err_l2;
  if (count == 0) return out;
  ASSIGN_OR_RETURN(SampleMatrix noise, UnitNoise(spec, 1, count, seed));
  std::vector<double> sq(noise.rows);
  for (std::size_t i = 0; i < noise.rows; ++i) {
    const double sup = spec.t * LpNorm(noise.Row(i), kInf);
    sq[i] = sup * sup;
  }
  out.err_linf_mc = Mean(sq);
  out.err_linf_std_error =
      sq.size() > 1 ? std::sqrt(SampleVariance(sq) / sq.size()) : 0.0;
  return out;
}

absl::StatusOr<BudgetCheckResult> BudgetCheck(const MechanismSpec& spec,
                                              std::size_t grid_size,
                                              std::size_t count,
                                              std::uint64_t seed) {
  if (grid_size < 2) return absl::InvalidArgumentError("grid_size must be >= 2");
  if (spec.t <= 0.0) {
    return absl::FailedPreconditionError("budget check needs t > 0");
  }
  const TradeoffCurve target = spec.budget.TemplateCurve();
  std::optional<TradeoffCurve> curve;
  if (const auto* model = std::get_if<NoiseModel>(&spec.noise)) {
    ASSIGN_OR_RETURN(NoiseModel scaled, model->WithScale(spec.t));
    ASSIGN_OR_RETURN(TradeoffCurve exact, ExactTradeoff(scaled, spec.sensitivity));
    curve = exact;
  } else {
    NormPowerDensity d = std::get<NormPowerDensity>(spec.noise);
    d.c *= std::pow(spec.t, -d.alpha);
    std::vector<double> v = ShiftDirection(d.n, DirectionMode::kRandomUnit, seed);
    for (double& x : v) x *= spec.sensitivity;
    ASSIGN_OR_RETURN(EmpiricalCurve empirical, EmpiricalTradeoff(d, v, count, seed));
    ASSIGN_OR_RETURN(TradeoffCurve c, empirical.Curve());
    curve = c;
  }
  BudgetCheckResult out;
  ASSIGN_OR_RETURN(out.dominates, Dominates(*curve, target, grid_size));
  ASSIGN_OR_RETURN(out.sup_gap, SupDistance(*curve, target, grid_size));
  for (double a : UniformAlphaGrid(grid_size)) {
    out.worst_violation = std::max(out.worst_violation, target(a) - (*curve)(a));
  }
  return out;
}

}  // namespace dpclt
