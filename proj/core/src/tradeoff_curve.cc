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

#include "dpclt/tradeoff_curve.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"
#include "dpclt/numerics.h"
#include "dpclt/status_macros.h"

namespace dpclt {
namespace {

constexpr double kDominanceTolerance = 1e-12;

absl::Status CheckAlpha(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("alpha must lie in [0, 1], got ", alpha));
  }
  return absl::OkStatus();
}

absl::Status CheckEpsDelta(double epsilon, double delta) {
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
    return absl::InvalidArgumentError(
        absl::StrCat("epsilon must be finite and >= 0, got ", epsilon));
  }
  if (!(delta >= 0.0 && delta <= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("delta must lie in [0, 1], got ", delta));
  }
  return absl::OkStatus();
}

absl::Status CheckMu(double mu) {
  if (!(mu >= 0.0) || !std::isfinite(mu)) {
    return absl::InvalidArgumentError(
        absl::StrCat("mu must be finite and >= 0, got ", mu));
  }
  return absl::OkStatus();
}

double FEpsDeltaUnchecked(double epsilon, double delta, double alpha) {
  const double steep = 1.0 - delta - std::exp(epsilon) * alpha;
  const double shallow = std::exp(-epsilon) * (1.0 - delta - alpha);
  return std::max({0.0, steep, shallow});
}

double GdpUnchecked(double mu, double alpha) {
  if (mu == 0.0) return 1.0 - alpha;
  return NormalCdf(-NormalQuantile(alpha) - mu);
}

double Clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

std::string FormatDouble(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

std::string_view CurveKindName(CurveKind kind) {
  switch (kind) {
    case CurveKind::kFEpsDelta:
      return "f_eps_delta";
    case CurveKind::kGdp:
      return "gdp";
    case CurveKind::kNoiseInduced:
      return "noise_induced";
    case CurveKind::kEmpirical:
      return "empirical";
    case CurveKind::kAffineConjugate:
      return "affine_conjugate";
  }
  return "unknown";
}

absl::StatusOr<double> EvalFEpsDelta(double epsilon, double delta, double alpha) {
  RETURN_IF_ERROR(CheckEpsDelta(epsilon, delta));
  RETURN_IF_ERROR(CheckAlpha(alpha));
  return FEpsDeltaUnchecked(epsilon, delta, alpha);
}

absl::StatusOr<double> EvalGdp(double mu, double alpha) {
  RETURN_IF_ERROR(CheckMu(mu));
  RETURN_IF_ERROR(CheckAlpha(alpha));
  return GdpUnchecked(mu, alpha);
}

absl::StatusOr<double> TradeoffFromCdf(const UnivariateLaw& law, double shift,
                                       double alpha) {
  RETURN_IF_ERROR(CheckAlpha(alpha));
  if (!(shift >= 0.0) || !std::isfinite(shift)) {
    return absl::InvalidArgumentError(
        absl::StrCat("shift must be finite and >= 0, got ", shift));
  }
  const double q = law.quantile(1.0 - alpha);
  if (std::isnan(q)) {
    return absl::InternalError(
        absl::StrCat("quantile evaluation failed at u = ", 1.0 - alpha));
  }
  const double beta = law.cdf(q - shift);
  if (std::isnan(beta)) {
    return absl::InternalError(
        absl::StrCat("cdf evaluation failed at x = ", q - shift));
  }
  return Clamp01(beta);
}

absl::StatusOr<TradeoffCurve> TradeoffCurve::FEpsDelta(double epsilon,
                                                       double delta) {
  RETURN_IF_ERROR(CheckEpsDelta(epsilon, delta));
  auto rep = std::make_shared<Rep>();
  rep->kind = CurveKind::kFEpsDelta;
  rep->descriptor = {{"kind", CurveKindName(rep->kind)},
                     {"epsilon", epsilon},
                     {"delta", delta}};
  rep->eval = [epsilon, delta](double a) {
    return FEpsDeltaUnchecked(epsilon, delta, a);
  };
  return TradeoffCurve(std::move(rep));
}

absl::StatusOr<TradeoffCurve> TradeoffCurve::Gdp(double mu) {
  RETURN_IF_ERROR(CheckMu(mu));
  auto rep = std::make_shared<Rep>();
  rep->kind = CurveKind::kGdp;
  rep->descriptor = {{"kind", CurveKindName(rep->kind)}, {"mu", mu}};
  rep->eval = [mu](double a) { return GdpUnchecked(mu, a); };
  return TradeoffCurve(std::move(rep));
}

TradeoffCurve TradeoffCurve::Identity() { return *Gdp(0.0); }

absl::StatusOr<TradeoffCurve> TradeoffCurve::FromLaw(UnivariateLaw law,
                                                     double shift,
                                                     nlohmann::json law_descriptor) {
  if (!law.cdf || !law.quantile) {
    return absl::InvalidArgumentError("FromLaw: cdf and quantile are required");
  }
  if (!(shift >= 0.0) || !std::isfinite(shift)) {
    return absl::InvalidArgumentError(
        absl::StrCat("shift must be finite and >= 0, got ", shift));
  }
  auto rep = std::make_shared<Rep>();
  rep->kind = CurveKind::kNoiseInduced;
  rep->descriptor = {{"kind", CurveKindName(rep->kind)},
                     {"noise", std::move(law_descriptor)},
                     {"shift", shift}};
  rep->eval = [law = std::move(law), shift](double a) {
    const double q = law.quantile(1.0 - a);
    return Clamp01(law.cdf(q - shift));
  };
  return TradeoffCurve(std::move(rep));
}

absl::StatusOr<TradeoffCurve> TradeoffCurve::PiecewiseLinear(
    std::vector<double> betas) {
  if (betas.size() < 2) {
    return absl::InvalidArgumentError(
        "PiecewiseLinear: need at least two grid values");
  }
  for (double b : betas) {
    if (!(b >= 0.0 && b <= 1.0)) {
      return absl::InvalidArgumentError(
          absl::StrCat("PiecewiseLinear: beta outside [0, 1]: ", b));
    }
  }
  auto rep = std::make_shared<Rep>();
  rep->kind = CurveKind::kEmpirical;
  rep->betas = std::move(betas);
  rep->descriptor = {{"kind", CurveKindName(rep->kind)}, {"betas", rep->betas}};
  const std::vector<double>* values = &rep->betas;
  rep->eval = [values](double a) {
    const std::size_t segments = values->size() - 1;
    const double pos = a * static_cast<double>(segments);
    const auto j = std::min(static_cast<std::size_t>(pos), segments - 1);
    const double w = pos - static_cast<double>(j);
    return (*values)[j] * (1.0 - w) + (*values)[j + 1] * w;
  };
  return TradeoffCurve(std::move(rep));
}

double TradeoffCurve::operator()(double alpha) const {
  return rep_->eval(Clamp01(alpha));
}

absl::StatusOr<double> TradeoffCurve::At(double alpha) const {
  RETURN_IF_ERROR(CheckAlpha(alpha));
  return rep_->eval(alpha);
}

absl::StatusOr<TradeoffCurve> AffineConjugate(const TradeoffCurve& f,
                                              const UnivariateLaw& base,
                                              double h) {
  if (!(h > 0.0) || !std::isfinite(h)) {
    return absl::InvalidArgumentError(
        absl::StrCat("truncation h must be finite and > 0, got ", h));
  }
  const double lower = base.cdf(-h);
  const double upper = base.cdf(h);
  const double mass = upper - lower;
  if (!(mass > 0.0)) {
    return absl::FailedPreconditionError(
        absl::StrCat("degenerate truncation: F(h) - F(-h) = ", mass));
  }
  // Type I error alpha of the truncated test maps to mass * alpha + 1 - F(h)
  // for the untruncated one; type II errors map back through (x - F(-h)) / mass.
  const double upper_tail = 1.0 - upper;
  auto raw = [f, lower, mass, upper_tail](double a) {
    return (f(mass * a + upper_tail) - lower) / mass;
  };

  std::vector<AlphaInterval> clamped;
  if (raw(0.0) > 1.0) {
    ASSIGN_OR_RETURN(double edge,
                     BisectThreshold([&](double a) { return raw(a) <= 1.0; },
                                     0.0, 1.0, 1e-14));
    clamped.push_back({0.0, edge});
  }
  if (raw(1.0) < 0.0) {
    // raw is non-increasing, so the negative region is a final segment.
    ASSIGN_OR_RETURN(double edge,
                     BisectThreshold([&](double a) { return raw(1.0 - a) >= 0.0; },
                                     0.0, 1.0, 1e-14));
    clamped.push_back({1.0 - edge, 1.0});
  }

  auto rep = std::make_shared<TradeoffCurve::Rep>();
  rep->kind = CurveKind::kAffineConjugate;
  rep->descriptor = {{"kind", CurveKindName(rep->kind)},
                     {"base", f.descriptor()},
                     {"h", h},
                     {"lower", lower},
                     {"upper", upper}};
  rep->clamped = std::move(clamped);
  rep->eval = [raw](double a) { return Clamp01(raw(a)); };
  return TradeoffCurve(std::move(rep));
}

std::vector<double> UniformAlphaGrid(std::size_t grid_size) {
  std::vector<double> grid(grid_size);
  if (grid_size == 1) {
    grid[0] = 0.0;
    return grid;
  }
  const double step = 1.0 / static_cast<double>(grid_size - 1);
  for (std::size_t j = 0; j < grid_size; ++j) {
    grid[j] = static_cast<double>(j) * step;
  }
  grid.back() = 1.0;
  return grid;
}

absl::StatusOr<double> SupDistance(const TradeoffCurve& f, const TradeoffCurve& g,
                                   std::size_t grid_size) {
  if (grid_size < 2) {
    return absl::InvalidArgumentError("grid_size must be >= 2");
  }
  double worst = 0.0;
  for (double a : UniformAlphaGrid(grid_size)) {
    worst = std::max(worst, std::abs(f(a) - g(a)));
  }
  return worst;
}

absl::StatusOr<bool> Dominates(const TradeoffCurve& f, const TradeoffCurve& g,
                               std::size_t grid_size) {
  if (grid_size < 2) {
    return absl::InvalidArgumentError("grid_size must be >= 2");
  }
  for (double a : UniformAlphaGrid(grid_size)) {
    if (f(a) < g(a) - kDominanceTolerance) return false;
  }
  return true;
}

absl::StatusOr<double> LevyDistanceEmpirical(
    std::span<const double> sorted_samples,
    const std::function<double(double)>& reference) {
  if (sorted_samples.empty()) {
    return absl::InvalidArgumentError("Levy distance of an empty sample");
  }
  if (!std::is_sorted(sorted_samples.begin(), sorted_samples.end())) {
    return absl::InvalidArgumentError("Levy distance: samples must be sorted");
  }
  const double n = static_cast<double>(sorted_samples.size());
  auto brackets = [&](double t) {
    for (std::size_t i = 0; i < sorted_samples.size(); ++i) {
      const double x = sorted_samples[i];
      const double k = static_cast<double>(i + 1);
      if (reference(x - t) - t > (k - 1.0) / n) return false;
      if (k / n > reference(x + t) + t) return false;
    }
    return true;
  };
  // t = 1 always brackets a CDF against another CDF.
  return BisectThreshold(brackets, 0.0, 1.0, 1e-10);
}

ShapeReport CheckShape(const TradeoffCurve& f, std::size_t grid_size,
                       double tolerance) {
  ShapeReport report;
  const std::vector<double> grid = UniformAlphaGrid(grid_size);
  std::vector<double> beta(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) beta[j] = f(grid[j]);
  for (std::size_t j = 0; j < beta.size(); ++j) {
    const double out = std::max(-beta[j], beta[j] - 1.0);
    if (out > tolerance) report.in_unit_interval = false;
    report.worst_violation = std::max(report.worst_violation, out);
    if (j + 1 < beta.size()) {
      const double rise = beta[j + 1] - beta[j];
      if (rise > tolerance) report.non_increasing = false;
      report.worst_violation = std::max(report.worst_violation, rise);
    }
    if (j + 2 < beta.size()) {
      const double drop_now = beta[j] - beta[j + 1];
      const double drop_next = beta[j + 1] - beta[j + 2];
      const double excess = drop_next - drop_now;
      if (excess > tolerance) report.convex = false;
      report.worst_violation = std::max(report.worst_violation, excess);
    }
  }
  return report;
}

std::string CurveToCsv(const TradeoffCurve& f, std::size_t grid_size) {
  std::string out = "alpha,beta\n";
  for (double a : UniformAlphaGrid(grid_size)) {
    absl::StrAppend(&out, FormatDouble(a), ",", FormatDouble(f(a)), "\n");
  }
  return out;
}

absl::StatusOr<std::vector<std::pair<double, double>>> ParseCurveCsv(
    std::string_view csv) {
  std::vector<std::pair<double, double>> rows;
  for (absl::string_view line :
       absl::StrSplit(absl::string_view(csv.data(), csv.size()), '\n')) {
    line = absl::StripTrailingAsciiWhitespace(line);
    if (line.empty() || line.front() == '#' || line == "alpha,beta") continue;
    std::vector<std::string> cells = absl::StrSplit(line, ',');
    if (cells.size() != 2) {
      return absl::InvalidArgumentError(
          absl::StrCat("malformed curve row: '", line, "'"));
    }
    try {
      std::size_t used_a = 0;
      std::size_t used_b = 0;
      const double a = std::stod(cells[0], &used_a);
      const double b = std::stod(cells[1], &used_b);
      if (used_a != cells[0].size() || used_b != cells[1].size()) {
        throw std::invalid_argument("trailing characters");
      }
      rows.emplace_back(a, b);
    } catch (const std::exception&) {
      return absl::InvalidArgumentError(
          absl::StrCat("malformed curve row: '", line, "'"));
    }
  }
  return rows;
}

absl::StatusOr<TradeoffCurve> CurveFromJson(const nlohmann::json& descriptor,
                                            const LawResolver& resolver) {
  if (!descriptor.is_object() || !descriptor.contains("kind") ||
      !descriptor["kind"].is_string()) {
    return absl::InvalidArgumentError("curve descriptor needs a string 'kind'");
  }
  const std::string kind = descriptor["kind"].get<std::string>();
  try {
    if (kind == CurveKindName(CurveKind::kFEpsDelta)) {
      return TradeoffCurve::FEpsDelta(descriptor.at("epsilon").get<double>(),
                                      descriptor.at("delta").get<double>());
    }
    if (kind == CurveKindName(CurveKind::kGdp)) {
      return TradeoffCurve::Gdp(descriptor.at("mu").get<double>());
    }
    if (kind == CurveKindName(CurveKind::kEmpirical)) {
      return TradeoffCurve::PiecewiseLinear(
          descriptor.at("betas").get<std::vector<double>>());
    }
    if (kind == CurveKindName(CurveKind::kNoiseInduced)) {
      if (!resolver) {
        return absl::UnimplementedError(
            "noise_induced descriptors need a law resolver");
      }
      ASSIGN_OR_RETURN(UnivariateLaw law, resolver(descriptor.at("noise")));
      return TradeoffCurve::FromLaw(std::move(law),
                                    descriptor.at("shift").get<double>(),
                                    descriptor.at("noise"));
    }
    if (kind == CurveKindName(CurveKind::kAffineConjugate)) {
      ASSIGN_OR_RETURN(TradeoffCurve base,
                       CurveFromJson(descriptor.at("base"), resolver));
      const double lower = descriptor.at("lower").get<double>();
      const double upper = descriptor.at("upper").get<double>();
      const double h = descriptor.at("h").get<double>();
      // Only F(-h) and F(h) enter the conjugation; a two-point law suffices.
      UnivariateLaw endpoints{
          [lower, upper](double x) { return x < 0 ? lower : upper; },
          [](double) { return std::nan(""); }};
      return AffineConjugate(base, endpoints, h);
    }
  } catch (const nlohmann::json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("bad curve descriptor: ", e.what()));
  }
  return absl::InvalidArgumentError(absl::StrCat("unknown curve kind '", kind, "'"));
}

}  // namespace dpclt
