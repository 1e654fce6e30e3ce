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

#include "dpclt/noise1d.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "dpclt/numerics.h"
#include "dpclt/random.h"
#include "dpclt/status_macros.h"

namespace dpclt {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

absl::Status CheckScale(double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    return absl::InvalidArgumentError(
        absl::StrCat("noise scale must be finite and > 0, got ", scale));
  }
  return absl::OkStatus();
}

absl::Status CheckGeometricRatio(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("p_geom must lie in (0, 1), got ", p));
  }
  return absl::OkStatus();
}

double LaplaceCdf(double z) {
  return z < 0.0 ? 0.5 * std::exp(z) : 1.0 - 0.5 * std::exp(-z);
}

double LaplaceQuantile(double u) {
  if (u <= 0.0) return -kInf;
  if (u >= 1.0) return kInf;
  return u < 0.5 ? std::log(2.0 * u) : -std::log(2.0 * (1.0 - u));
}

// Two-sided geometric on the integers.
double GeomMass(double p, long long k) {
  return (1.0 - p) / (1.0 + p) * std::pow(p, static_cast<double>(std::llabs(k)));
}

double GeomCdf(double p, long long m) {
  if (m >= 0) return 1.0 - std::pow(p, static_cast<double>(m + 1)) / (1.0 + p);
  return std::pow(p, static_cast<double>(-m)) / (1.0 + p);
}

// Smallest integer m with GeomCdf(m) >= u, for u in (0, 1).
long long GeomQuantile(double p, double u) {
  const double log_p = std::log(p);
  long long m;
  if (u <= p / (1.0 + p)) {
    m = -static_cast<long long>(std::floor(std::log(u * (1.0 + p)) / log_p));
  } else {
    m = static_cast<long long>(
            std::ceil(std::log((1.0 - u) * (1.0 + p)) / log_p)) - 1;
    m = std::max<long long>(m, 0);
  }
  while (GeomCdf(p, m - 1) >= u) --m;
  while (GeomCdf(p, m) < u) ++m;
  return m;
}

// E xi^2 = 2p / (1 - p)^2 for the two-sided geometric.
double GeomSecondMoment(double p) { return 2.0 * p / ((1.0 - p) * (1.0 - p)); }

// E X^2 of the standard truncated Laplace: 2 - h (h + 2) / (e^h - 1).
double TruncatedLaplaceStandardSecondMoment(double h) {
  return 2.0 - h * (h + 2.0) / std::expm1(h);
}

}  // namespace

std::string_view NoiseFamilyName(NoiseFamily family) {
  switch (family) {
    case NoiseFamily::kLaplace:
      return "laplace";
    case NoiseFamily::kTruncatedLaplace:
      return "truncated_laplace";
    case NoiseFamily::kGaussian:
      return "gaussian";
    case NoiseFamily::kDoubleGeometric:
      return "double_geometric";
    case NoiseFamily::kTgu:
      return "tgu";
  }
  return "unknown";
}

absl::StatusOr<NoiseFamily> ParseNoiseFamily(std::string_view name) {
  for (NoiseFamily f : {NoiseFamily::kLaplace, NoiseFamily::kTruncatedLaplace,
                        NoiseFamily::kGaussian, NoiseFamily::kDoubleGeometric,
                        NoiseFamily::kTgu}) {
    if (name == NoiseFamilyName(f)) return f;
  }
  if (name == "tlap") return NoiseFamily::kTruncatedLaplace;
  if (name == "dgeom") return NoiseFamily::kDoubleGeometric;
  return absl::InvalidArgumentError(absl::StrCat("unknown noise family '", std::string(name), "'"));
}

// PrivacyBudget ------------------------------------------------------------

absl::StatusOr<PrivacyBudget> PrivacyBudget::PureDp(double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    return absl::InvalidArgumentError(
        absl::StrCat("epsilon must be finite and > 0, got ", epsilon));
  }
  return PrivacyBudget(Kind::kPureDp, epsilon, 0.0, 0.0);
}

absl::StatusOr<PrivacyBudget> PrivacyBudget::ApproxDp(double epsilon,
                                                      double delta) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    return absl::InvalidArgumentError(
        absl::StrCat("epsilon must be finite and > 0, got ", epsilon));
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("delta must lie in (0, 1), got ", delta));
  }
  return PrivacyBudget(Kind::kApproxDp, epsilon, delta, 0.0);
}

absl::StatusOr<PrivacyBudget> PrivacyBudget::Gdp(double mu) {
  if (!(mu > 0.0) || !std::isfinite(mu)) {
    return absl::InvalidArgumentError(
        absl::StrCat("mu must be finite and > 0, got ", mu));
  }
  return PrivacyBudget(Kind::kGdp, 0.0, 0.0, mu);
}

TradeoffCurve PrivacyBudget::TemplateCurve() const {
  switch (kind_) {
    case Kind::kPureDp:
      return *TradeoffCurve::FEpsDelta(epsilon_, 0.0);
    case Kind::kApproxDp:
      return *TradeoffCurve::FEpsDelta(epsilon_, delta_);
    case Kind::kGdp:
      return *TradeoffCurve::Gdp(mu_);
  }
  return TradeoffCurve::Identity();
}

nlohmann::json PrivacyBudget::ToJson() const {
  switch (kind_) {
    case Kind::kPureDp:
      return {{"kind", "pure_dp"}, {"epsilon", epsilon_}};
    case Kind::kApproxDp:
      return {{"kind", "approx_dp"}, {"epsilon", epsilon_}, {"delta", delta_}};
    case Kind::kGdp:
      return {{"kind", "gdp"}, {"mu", mu_}};
  }
  return {};
}

absl::StatusOr<PrivacyBudget> PrivacyBudget::FromJson(const nlohmann::json& j) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "pure_dp") return PureDp(j.at("epsilon").get<double>());
    if (kind == "approx_dp") {
      return ApproxDp(j.at("epsilon").get<double>(), j.at("delta").get<double>());
    }
    if (kind == "gdp") return Gdp(j.at("mu").get<double>());
    return absl::InvalidArgumentError(absl::StrCat("unknown budget kind '", kind, "'"));
  } catch (const nlohmann::json::exception& e) {
    return absl::InvalidArgumentError(absl::StrCat("bad budget JSON: ", e.what()));
  }
}

// NoiseModel ---------------------------------------------------------------

absl::StatusOr<NoiseModel> NoiseModel::Laplace(double scale) {
  RETURN_IF_ERROR(CheckScale(scale));
  return NoiseModel(NoiseFamily::kLaplace, scale, 0.0, 0.0);
}

absl::StatusOr<NoiseModel> NoiseModel::TruncatedLaplace(double scale, double h) {
  RETURN_IF_ERROR(CheckScale(scale));
  if (!(h > 0.0) || !std::isfinite(h)) {
    return absl::InvalidArgumentError(
        absl::StrCat("truncation h must be finite and > 0, got ", h));
  }
  return NoiseModel(NoiseFamily::kTruncatedLaplace, scale, h, 0.0);
}

absl::StatusOr<NoiseModel> NoiseModel::Gaussian(double scale) {
  RETURN_IF_ERROR(CheckScale(scale));
  return NoiseModel(NoiseFamily::kGaussian, scale, 0.0, 0.0);
}

absl::StatusOr<NoiseModel> NoiseModel::DoubleGeometric(double scale, double p_geom) {
  RETURN_IF_ERROR(CheckScale(scale));
  RETURN_IF_ERROR(CheckGeometricRatio(p_geom));
  return NoiseModel(NoiseFamily::kDoubleGeometric, scale, 0.0, p_geom);
}

absl::StatusOr<NoiseModel> NoiseModel::Tgu(double scale, double p_geom) {
  RETURN_IF_ERROR(CheckScale(scale));
  RETURN_IF_ERROR(CheckGeometricRatio(p_geom));
  return NoiseModel(NoiseFamily::kTgu, scale, 0.0, p_geom);
}

absl::StatusOr<NoiseModel> NoiseModel::WithScale(double scale) const {
  RETURN_IF_ERROR(CheckScale(scale));
  NoiseModel copy = *this;
  copy.scale_ = scale;
  return copy;
}

double NoiseModel::StandardCdf(double z) const {
  if (z == -kInf) return 0.0;
  if (z == kInf) return 1.0;
  switch (family_) {
    case NoiseFamily::kLaplace:
      return LaplaceCdf(z);
    case NoiseFamily::kTruncatedLaplace: {
      const double tail = 0.5 * std::exp(-h_);
      const double mass = -std::expm1(-h_);
      return std::clamp((LaplaceCdf(z) - tail) / mass, 0.0, 1.0);
    }
    case NoiseFamily::kGaussian:
      return NormalCdf(z);
    case NoiseFamily::kDoubleGeometric:
      return GeomCdf(p_geom_, static_cast<long long>(std::floor(z)));
    case NoiseFamily::kTgu: {
      const auto m = static_cast<long long>(std::floor(z + 0.5));
      return GeomCdf(p_geom_, m - 1) +
             GeomMass(p_geom_, m) * (z - (static_cast<double>(m) - 0.5));
    }
  }
  return std::nan("");
}

double NoiseModel::StandardQuantile(double u) const {
  switch (family_) {
    case NoiseFamily::kLaplace:
      return LaplaceQuantile(u);
    case NoiseFamily::kTruncatedLaplace: {
      if (u <= 0.0) return -h_;
      if (u >= 1.0) return h_;
      const double tail = 0.5 * std::exp(-h_);
      const double mass = -std::expm1(-h_);
      return std::clamp(LaplaceQuantile(mass * u + tail), -h_, h_);
    }
    case NoiseFamily::kGaussian:
      return NormalQuantile(u);
    case NoiseFamily::kDoubleGeometric:
      if (u <= 0.0) return -kInf;
      if (u >= 1.0) return kInf;
      return static_cast<double>(GeomQuantile(p_geom_, u));
    case NoiseFamily::kTgu: {
      if (u <= 0.0) return -kInf;
      if (u >= 1.0) return kInf;
      const long long m = GeomQuantile(p_geom_, u);
      const double below = GeomCdf(p_geom_, m - 1);
      return static_cast<double>(m) - 0.5 + (u - below) / GeomMass(p_geom_, m);
    }
  }
  return std::nan("");
}

double NoiseModel::Pdf(double x) const {
  const double z = x / scale_;
  switch (family_) {
    case NoiseFamily::kLaplace:
      return 0.5 * std::exp(-std::abs(z)) / scale_;
    case NoiseFamily::kTruncatedLaplace:
      if (std::abs(z) > h_) return 0.0;
      return 0.5 * std::exp(-std::abs(z)) / -std::expm1(-h_) / scale_;
    case NoiseFamily::kGaussian:
      return NormalPdf(z) / scale_;
    case NoiseFamily::kDoubleGeometric: {
      const double k = std::round(z);
      if (std::abs(z - k) > 1e-9) return 0.0;
      return GeomMass(p_geom_, static_cast<long long>(k));
    }
    case NoiseFamily::kTgu:
      return GeomMass(p_geom_, static_cast<long long>(std::floor(z + 0.5))) /
             scale_;
  }
  return 0.0;
}

double NoiseModel::Cdf(double x) const { return StandardCdf(x / scale_); }

double NoiseModel::Quantile(double u) const {
  return scale_ * StandardQuantile(u);
}

UnivariateLaw NoiseModel::Law() const {
  NoiseModel self = *this;
  return UnivariateLaw{[self](double x) { return self.Cdf(x); },
                       [self](double u) { return self.Quantile(u); }};
}

nlohmann::json NoiseModel::ToJson() const {
  nlohmann::json j = {{"family", NoiseFamilyName(family_)}, {"scale", scale_}};
  if (family_ == NoiseFamily::kTruncatedLaplace) j["h"] = h_;
  if (family_ == NoiseFamily::kDoubleGeometric || family_ == NoiseFamily::kTgu) {
    j["p_geom"] = p_geom_;
  }
  return j;
}

absl::StatusOr<NoiseModel> NoiseModel::FromJson(const nlohmann::json& j) {
  try {
    ASSIGN_OR_RETURN(NoiseFamily family,
                     ParseNoiseFamily(j.at("family").get<std::string>()));
    const double scale = j.at("scale").get<double>();
    switch (family) {
      case NoiseFamily::kLaplace:
        return Laplace(scale);
      case NoiseFamily::kTruncatedLaplace:
        return TruncatedLaplace(scale, j.at("h").get<double>());
      case NoiseFamily::kGaussian:
        return Gaussian(scale);
      case NoiseFamily::kDoubleGeometric:
        return DoubleGeometric(scale, j.at("p_geom").get<double>());
      case NoiseFamily::kTgu:
        return Tgu(scale, j.at("p_geom").get<double>());
    }
  } catch (const nlohmann::json::exception& e) {
    return absl::InvalidArgumentError(absl::StrCat("bad noise JSON: ", e.what()));
  }
  return absl::InvalidArgumentError("bad noise JSON");
}

// Calibration and moments --------------------------------------------------

absl::StatusOr<double> TlapH(double epsilon, double delta) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    return absl::InvalidArgumentError(
        absl::StrCat("epsilon must be finite and > 0, got ", epsilon));
  }
  if (delta == 0.0) {
    return absl::InvalidArgumentError(
        "delta = 0 needs infinite truncation; use the Laplace mechanism");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("delta must lie in (0, 1), got ", delta));
  }
  return std::log1p(std::expm1(epsilon) / (2.0 * delta));
}

absl::StatusOr<NoiseModel> Calibrate(const PrivacyBudget& budget,
                                     double sensitivity, NoiseFamily family) {
  if (!(sensitivity > 0.0) || !std::isfinite(sensitivity)) {
    return absl::InvalidArgumentError(
        absl::StrCat("sensitivity must be finite and > 0, got ", sensitivity));
  }
  using Kind = PrivacyBudget::Kind;
  const auto incompatible = [&]() {
    return absl::InvalidArgumentError(absl::StrCat(
        "cannot calibrate ", std::string(NoiseFamilyName(family)), " noise to a ",
        budget.ToJson()["kind"].get<std::string>(), " budget"));
  };
  switch (family) {
    case NoiseFamily::kLaplace:
      if (budget.kind() != Kind::kPureDp) return incompatible();
      return NoiseModel::Laplace(sensitivity / budget.epsilon());
    case NoiseFamily::kDoubleGeometric:
      if (budget.kind() != Kind::kPureDp) return incompatible();
      return NoiseModel::DoubleGeometric(sensitivity, std::exp(-budget.epsilon()));
    case NoiseFamily::kTgu:
      if (budget.kind() != Kind::kPureDp) return incompatible();
      return NoiseModel::Tgu(sensitivity, std::exp(-budget.epsilon()));
    case NoiseFamily::kTruncatedLaplace: {
      if (budget.kind() != Kind::kApproxDp) return incompatible();
      ASSIGN_OR_RETURN(double h, TlapH(budget.epsilon(), budget.delta()));
      return NoiseModel::TruncatedLaplace(sensitivity / budget.epsilon(), h);
    }
    case NoiseFamily::kGaussian:
      if (budget.kind() == Kind::kGdp) {
        return NoiseModel::Gaussian(sensitivity / budget.mu());
      }
      if (budget.kind() == Kind::kApproxDp) {
        if (budget.epsilon() > 1.0) {
          return absl::InvalidArgumentError(absl::StrCat(
              "the classical Gaussian calibration needs epsilon <= 1, got ",
              budget.epsilon()));
        }
        return NoiseModel::Gaussian(sensitivity *
                                    std::sqrt(2.0 * std::log(1.25 / budget.delta())) /
                                    budget.epsilon());
      }
      return incompatible();
  }
  return incompatible();
}

double SecondMoment(const NoiseModel& model) {
  const double s2 = model.scale() * model.scale();
  switch (model.family()) {
    case NoiseFamily::kLaplace:
      return 2.0 * s2;
    case NoiseFamily::kTruncatedLaplace:
      return TruncatedLaplaceStandardSecondMoment(model.h()) * s2;
    case NoiseFamily::kGaussian:
      return s2;
    case NoiseFamily::kDoubleGeometric:
      return GeomSecondMoment(model.p_geom()) * s2;
    case NoiseFamily::kTgu:
      return (GeomSecondMoment(model.p_geom()) + 1.0 / 12.0) * s2;
  }
  return std::nan("");
}

absl::StatusOr<double> SecondMomentByQuadrature(const NoiseModel& model) {
  const double s = model.scale();
  switch (model.family()) {
    case NoiseFamily::kLaplace:
    case NoiseFamily::kGaussian: {
      // Symmetric: twice the positive half; the Laplace kink sits at 0.
      ASSIGN_OR_RETURN(double half,
                       Integrate([&](double x) { return x * x * model.Pdf(x); },
                                 0.0, kInf));
      return 2.0 * half;
    }
    case NoiseFamily::kTruncatedLaplace: {
      ASSIGN_OR_RETURN(double half,
                       Integrate([&](double x) { return x * x * model.Pdf(x); },
                                 0.0, model.h() * s));
      return 2.0 * half;
    }
    case NoiseFamily::kDoubleGeometric:
    case NoiseFamily::kTgu: {
      const double cell = model.family() == NoiseFamily::kTgu ? 1.0 / 12.0 : 0.0;
      const double p = model.p_geom();
      double total = cell * GeomMass(p, 0);
      for (long long k = 1; k < 100000; ++k) {
        const double term =
            2.0 * GeomMass(p, k) * (static_cast<double>(k * k) + cell);
        total += term;
        if (term < 1e-18 * total) break;
      }
      return total * s * s;
    }
  }
  return absl::InternalError("unknown family");
}

TruncatedLaplaceMomentCandidates TruncatedLaplaceSecondMomentCandidates(
    double epsilon, double h) {
  TruncatedLaplaceMomentCandidates c;
  const double e2 = epsilon * epsilon;
  c.integral_form =
      (2.0 - std::exp(-h) * (h * h + 2.0 * h + 2.0)) / -std::expm1(-h) / e2;
  c.epsilon_form = (2.0 / e2) * (1.0 - e2 * h * (h + 2.0) / std::expm1(h));
  return c;
}

std::vector<double> Sample(const NoiseModel& model, std::size_t count,
                           std::uint64_t seed, unsigned threads) {
  std::vector<double> out(count);
  const double s = model.scale();
  ForEachBlock(count, threads, [&](std::size_t block, std::size_t begin,
                                   std::size_t end) {
    Rng rng(SubstreamSeed(seed, block));
    const double log_p =
        model.p_geom() > 0.0 ? std::log(model.p_geom()) : 0.0;
    auto geometric = [&]() {
      return std::floor(std::log(rng.UniformOpen()) / log_p);
    };
    for (std::size_t i = begin; i < end; ++i) {
      double z = 0.0;
      switch (model.family()) {
        case NoiseFamily::kLaplace:
          z = rng.Rademacher() * rng.Exponential();
          break;
        case NoiseFamily::kTruncatedLaplace: {
          // Inverse CDF of |Z| with density proportional to e^-x on [0, h].
          const double u = rng.Uniform();
          z = rng.Rademacher() * -std::log1p(u * std::expm1(-model.h()));
          break;
        }
        case NoiseFamily::kGaussian:
          z = rng.Normal();
          break;
        case NoiseFamily::kDoubleGeometric:
          z = geometric() - geometric();
          break;
        case NoiseFamily::kTgu:
          z = geometric() - geometric() + (rng.Uniform() - 0.5);
          break;
      }
      out[i] = s * z;
    }
  });
  return out;
}

absl::StatusOr<TradeoffCurve> ExactTradeoff(const NoiseModel& model,
                                            double shift) {
  if (!(shift > 0.0) || !std::isfinite(shift)) {
    return absl::InvalidArgumentError(
        absl::StrCat("shift must be finite and > 0, got ", shift));
  }
  switch (model.family()) {
    case NoiseFamily::kDoubleGeometric:
      return absl::UnimplementedError(
          "exact trade-off of pure double-geometric noise is not provided; "
          "use TGU noise");
    case NoiseFamily::kTgu: {
      // The likelihood ratio of TGU against an integer translate is monotone,
      // so threshold tests on the continuous CDF are optimal.
      const double units = shift / model.scale();
      if (std::abs(units - std::round(units)) > 1e-9) {
        return absl::UnimplementedError(absl::StrCat(
            "TGU trade-off needs shift / scale to be an integer, got ", units));
      }
      break;
    }
    default:
      break;
  }
  return TradeoffCurve::FromLaw(model.Law(), shift, model.ToJson());
}

absl::StatusOr<UnivariateLaw> ResolveNoiseLaw(const nlohmann::json& noise) {
  ASSIGN_OR_RETURN(NoiseModel model, NoiseModel::FromJson(noise));
  return model.Law();
}

absl::StatusOr<TradeoffCurve> ParseCurve(const nlohmann::json& descriptor) {
  return CurveFromJson(descriptor, ResolveNoiseLaw);
}

}  // namespace dpclt
