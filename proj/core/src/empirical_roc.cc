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

#include "dpclt/empirical_roc.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <set>

#include <boost/math/special_functions/gamma.hpp>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "dpclt/fisher_moments.h"
#include "dpclt/numerics.h"
#include "dpclt/random.h"
#include "dpclt/stats.h"
#include "dpclt/status_macros.h"

namespace dpclt {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Relative gap below which two log-likelihood ratios count as tied.
constexpr double kTieTolerance = 1e-11;
// Substream index reserved for the random shift direction.
constexpr std::uint64_t kDirectionStream = 0xffffffffULL;

absl::Status CheckDimension(const NormPowerDensity& d, std::span<const double> v) {
  if (v.size() != static_cast<std::size_t>(d.n)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "shift has dimension ", v.size(), " but the density has n = ", d.n));
  }
  return absl::OkStatus();
}

absl::StatusOr<double> FisherScalar(const NormPowerDensity& d) {
  ASSIGN_OR_RETURN(double fisher, FisherInfoExact(d.n, d.p, d.alpha));
  return std::pow(d.c, 2.0 / d.alpha) * fisher;
}

double SquaredNorm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

// Law of a single coordinate with density proportional to exp(-c |x|^p).
UnivariateLaw GeneralizedNormalLaw(double p, double c) {
  const double shape = 1.0 / p;
  auto cdf = [=](double x) {
    if (x == 0.0) return 0.5;
    if (std::isinf(x)) return x > 0 ? 1.0 : 0.0;
    const double tail = 0.5 * boost::math::gamma_q(shape, c * std::pow(std::abs(x), p));
    return x > 0 ? 1.0 - tail : tail;
  };
  auto quantile = [=](double u) {
    if (u <= 0.0) return -kInf;
    if (u >= 1.0) return kInf;
    if (u == 0.5) return 0.0;
    const double tail = u < 0.5 ? 2.0 * u : 2.0 * (1.0 - u);
    const double r = std::pow(boost::math::gamma_q_inv(shape, tail) / c, 1.0 / p);
    return u < 0.5 ? -r : r;
  };
  return UnivariateLaw{cdf, quantile};
}

// Merges values of a and b that agree up to rounding, so that ties which
// are exact in real arithmetic stay ties in floating point.
void SnapTies(std::vector<double>& a, std::vector<double>& b) {
  std::vector<double> all;
  all.reserve(a.size() + b.size());
  all.insert(all.end(), a.begin(), a.end());
  all.insert(all.end(), b.begin(), b.end());
  std::sort(all.begin(), all.end());
  if (all.empty()) return;
  const double tol =
      kTieTolerance * std::max({1.0, std::abs(all.front()), std::abs(all.back())});
  std::vector<double> starts = {all.front()};
  for (std::size_t i = 1; i < all.size(); ++i) {
    if (all[i] - all[i - 1] > tol) starts.push_back(all[i]);
  }
  auto snap = [&starts](double& x) {
    x = *(std::upper_bound(starts.begin(), starts.end(), x) - 1);
  };
  for (double& x : a) snap(x);
  for (double& x : b) snap(x);
}

// Lower convex hull of (xs, ys) evaluated on a uniform grid of `grid_size`
// points. xs must be sorted and span [0, 1].
std::vector<double> LowerHullOnGrid(const std::vector<double>& xs,
                                    const std::vector<double>& ys,
                                    std::size_t grid_size) {
  std::vector<std::size_t> hull;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    while (hull.size() >= 2) {
      const std::size_t a = hull[hull.size() - 2];
      const std::size_t b = hull.back();
      const double cross =
          (xs[b] - xs[a]) * (ys[i] - ys[a]) - (xs[i] - xs[a]) * (ys[b] - ys[a]);
      if (cross > 0.0) break;
      hull.pop_back();
    }
    hull.push_back(i);
  }
  std::vector<double> out;
  out.reserve(grid_size);
  std::size_t k = 0;
  for (double a : UniformAlphaGrid(grid_size)) {
    while (k + 2 < hull.size() && xs[hull[k + 1]] < a) ++k;
    const double x0 = xs[hull[k]];
    const double x1 = xs[hull[k + 1]];
    const double w = x1 > x0 ? std::clamp((a - x0) / (x1 - x0), 0.0, 1.0) : 1.0;
    out.push_back((1.0 - w) * ys[hull[k]] + w * ys[hull[k + 1]]);
  }
  return out;
}

}  // namespace

std::string_view TieVariantName(TieVariant variant) {
  return variant == TieVariant::kAppendix ? "appendix" : "main_text";
}

absl::StatusOr<TieVariant> ParseTieVariant(std::string_view name) {
  if (name == "appendix") return TieVariant::kAppendix;
  if (name == "main_text") return TieVariant::kMainText;
  return absl::InvalidArgumentError(absl::StrCat("unknown tie variant '", std::string(name), "'"));
}

std::string_view DirectionModeName(DirectionMode mode) {
  return mode == DirectionMode::kAxis ? "axis" : "random_unit";
}

absl::StatusOr<DirectionMode> ParseDirectionMode(std::string_view name) {
  if (name == "axis") return DirectionMode::kAxis;
  if (name == "random_unit") return DirectionMode::kRandomUnit;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown direction mode '", std::string(name), "'"));
}

absl::StatusOr<TradeoffCurve> EmpiricalCurve::Curve() const {
  return TradeoffCurve::PiecewiseLinear(betas);
}

std::vector<double> BetasFromLlr(std::vector<double> h0_llr,
                                 std::vector<double> h1_llr,
                                 TieVariant variant) {
  SnapTies(h0_llr, h1_llr);
  std::sort(h0_llr.begin(), h0_llr.end());
  std::sort(h1_llr.begin(), h1_llr.end());
  const std::size_t n = h0_llr.size();
  const double nn = static_cast<double>(n);
  std::vector<double> betas(n + 1, 0.0);
  for (std::size_t j = 0; j <= n; ++j) {
    if (variant == TieVariant::kAppendix && j == 0) {
      betas[j] = 1.0;
      continue;
    }
    if (variant == TieVariant::kMainText && j == n) {
      betas[j] = 0.0;
      continue;
    }
    const double h =
        variant == TieVariant::kAppendix ? h0_llr[n - j] : h0_llr[n - 1 - j];
    const auto a_lo = std::lower_bound(h0_llr.begin(), h0_llr.end(), h);
    const auto a_hi = std::upper_bound(a_lo, h0_llr.end(), h);
    const double above = static_cast<double>(h0_llr.end() - a_hi);
    const double tied = static_cast<double>(a_hi - a_lo);
    // Fraction of tied H0 values rejected so that alpha is exactly j / N.
    const double gamma = (static_cast<double>(j) - above) / tied;
    const auto b_lo = std::lower_bound(h1_llr.begin(), h1_llr.end(), h);
    const auto b_hi = std::upper_bound(b_lo, h1_llr.end(), h);
    const double below = static_cast<double>(b_lo - h1_llr.begin());
    const double b_tied = static_cast<double>(b_hi - b_lo);
    betas[j] = std::clamp((below + (1.0 - gamma) * b_tied) / nn, 0.0, 1.0);
  }
  betas[n] = 0.0;
  return betas;
}

absl::StatusOr<double> LikelihoodProjection(const NormPowerDensity& d,
                                            std::span<const double> v,
                                            std::span<const double> x) {
  RETURN_IF_ERROR(d.Validate());
  RETURN_IF_ERROR(CheckDimension(d, v));
  RETURN_IF_ERROR(CheckDimension(d, x));
  ASSIGN_OR_RETURN(double fisher, FisherScalar(d));
  std::vector<double> shifted(x.begin(), x.end());
  for (std::size_t i = 0; i < shifted.size(); ++i) shifted[i] += v[i];
  return d.Phi(shifted) - d.Phi(x) - 0.5 * fisher * SquaredNorm(v);
}

absl::StatusOr<EmpiricalCurve> EmpiricalTradeoffFromSamples(
    const NormPowerDensity& d, std::span<const double> v,
    const SampleMatrix& samples, TieVariant variant) {
  RETURN_IF_ERROR(d.Validate());
  RETURN_IF_ERROR(CheckDimension(d, v));
  if (samples.rows < 1 || samples.cols != v.size()) {
    return absl::InvalidArgumentError("sample matrix does not match the shift");
  }
  std::vector<double> h0(samples.rows);
  std::vector<double> h1(samples.rows);
  std::vector<double> plus(samples.cols);
  std::vector<double> minus(samples.cols);
  for (std::size_t i = 0; i < samples.rows; ++i) {
    const auto x = samples.Row(i);
    for (std::size_t k = 0; k < x.size(); ++k) {
      plus[k] = x[k] + v[k];
      minus[k] = x[k] - v[k];
    }
    const double phi = d.Phi(x);
    h0[i] = phi - d.Phi(minus);
    h1[i] = d.Phi(plus) - phi;
  }
  EmpiricalCurve out;
  out.betas = BetasFromLlr(std::move(h0), std::move(h1), variant);
  out.sample_size = samples.rows;
  out.tag = {{"density", d.ToJson()},
             {"shift", std::vector<double>(v.begin(), v.end())},
             {"variant", TieVariantName(variant)}};
  return out;
}

absl::StatusOr<EmpiricalCurve> EmpiricalTradeoff(const NormPowerDensity& d,
                                                 std::span<const double> v,
                                                 std::size_t count,
                                                 std::uint64_t seed,
                                                 TieVariant variant,
                                                 unsigned threads) {
  RETURN_IF_ERROR(CheckDimension(d, v));
  ASSIGN_OR_RETURN(SampleMatrix samples, SampleNormPower(d, count, seed, threads));
  ASSIGN_OR_RETURN(EmpiricalCurve out,
                   EmpiricalTradeoffFromSamples(d, v, samples, variant));
  out.seed = seed;
  return out;
}

absl::StatusOr<EmpiricalCurve> EmpiricalTradeoffGeneral(
    const LogDensity& log_p, const LogDensity& log_q, const PointSampler& sample_p,
    const PointSampler& sample_q, std::size_t count, std::uint64_t seed,
    TieVariant variant) {
  if (count < 1) return absl::InvalidArgumentError("count must be >= 1");
  ASSIGN_OR_RETURN(SampleMatrix xs, sample_p(count, SubstreamSeed(seed, 0xa0)));
  ASSIGN_OR_RETURN(SampleMatrix ys, sample_q(count, SubstreamSeed(seed, 0xa1)));
  if (xs.rows != count || ys.rows != count) {
    return absl::InternalError("sampler returned the wrong number of rows");
  }
  auto llr = [&](const SampleMatrix& m, const char* which,
                 std::vector<double>& out) -> absl::Status {
    out.resize(m.rows);
    for (std::size_t i = 0; i < m.rows; ++i) {
      const double lp = log_p(m.Row(i));
      const double lq = log_q(m.Row(i));
      if (!std::isfinite(lp) || !std::isfinite(lq)) {
        return absl::OutOfRangeError(absl::StrCat(
            "non-finite log density at ", which, " sample ", i));
      }
      out[i] = lq - lp;
    }
    return absl::OkStatus();
  };
  std::vector<double> a;
  std::vector<double> b;
  RETURN_IF_ERROR(llr(xs, "P", a));
  RETURN_IF_ERROR(llr(ys, "Q", b));
  EmpiricalCurve out;
  out.betas = BetasFromLlr(std::move(a), std::move(b), variant);
  out.sample_size = count;
  out.seed = seed;
  out.tag = {{"kind", "general"}, {"variant", TieVariantName(variant)}};
  return out;
}

absl::StatusOr<ProjectionTradeoff> TradeoffFromProjectionCdfs(
    const UnivariateLaw& f_v, const UnivariateLaw& f_neg_v, double vIv,
    double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("alpha must lie in [0, 1], got ", alpha));
  }
  if (!(vIv >= 0.0)) {
    return absl::InvalidArgumentError(absl::StrCat("vIv must be >= 0, got ", vIv));
  }
  const double q = f_neg_v.quantile(alpha);
  if (std::isnan(q)) return absl::InternalError("quantile evaluation failed");
  const double raw = f_v.cdf(-q - vIv);
  ProjectionTradeoff out;
  out.beta = std::clamp(raw, 0.0, 1.0);
  out.clamped = !(raw >= 0.0 && raw <= 1.0);
  return out;
}

absl::StatusOr<TradeoffCurve> ProjectionTradeoffCurve(const NormPowerDensity& d,
                                                      std::span<const double> v,
                                                      const SampleMatrix& samples,
                                                      std::size_t grid_size) {
  RETURN_IF_ERROR(d.Validate());
  RETURN_IF_ERROR(CheckDimension(d, v));
  if (grid_size < 2) return absl::InvalidArgumentError("grid_size must be >= 2");
  ASSIGN_OR_RETURN(double fisher, FisherScalar(d));
  const double vIv = fisher * SquaredNorm(v);
  std::vector<double> pos(samples.rows);
  std::vector<double> neg(samples.rows);
  std::vector<double> plus(samples.cols);
  std::vector<double> minus(samples.cols);
  for (std::size_t i = 0; i < samples.rows; ++i) {
    const auto x = samples.Row(i);
    for (std::size_t k = 0; k < x.size(); ++k) {
      plus[k] = x[k] + v[k];
      minus[k] = x[k] - v[k];
    }
    const double phi = d.Phi(x);
    pos[i] = d.Phi(plus) - phi - 0.5 * vIv;
    neg[i] = d.Phi(minus) - phi - 0.5 * vIv;
  }
  // Rejecting when P_{-v}(y) <= q, i.e. when -q - vIv <= thr = -P_{-v}(y) - vIv,
  // gives alpha = #{thr >= tau} / N and beta = #{P_v(X) < tau} / N;
  // randomizing between thresholds traces the lower convex hull.
  std::vector<double> thr(neg.size());
  for (std::size_t i = 0; i < neg.size(); ++i) thr[i] = -neg[i] - vIv;
  SnapTies(pos, thr);
  std::sort(pos.begin(), pos.end());
  std::sort(thr.begin(), thr.end(), std::greater<>());
  const double count = static_cast<double>(samples.rows);
  std::vector<double> alphas = {0.0};
  std::vector<double> betas = {1.0};
  for (std::size_t i = 0; i < thr.size(); ++i) {
    if (i + 1 < thr.size() && thr[i + 1] == thr[i]) continue;
    const auto below = std::lower_bound(pos.begin(), pos.end(), thr[i]);
    alphas.push_back(static_cast<double>(i + 1) / count);
    betas.push_back(static_cast<double>(below - pos.begin()) / count);
  }
  alphas.push_back(1.0);
  betas.push_back(0.0);
  std::vector<double> grid = LowerHullOnGrid(alphas, betas, grid_size);
  grid.front() = 1.0;
  grid.back() = 0.0;
  return TradeoffCurve::PiecewiseLinear(std::move(grid));
}

std::vector<double> ShiftDirection(int n, DirectionMode mode, std::uint64_t seed) {
  std::vector<double> v(static_cast<std::size_t>(n), 0.0);
  if (n < 1) return v;
  if (mode == DirectionMode::kAxis) {
    v[0] = 1.0;
    return v;
  }
  Rng rng(SubstreamSeed(seed, kDirectionStream));
  double norm = 0.0;
  while (norm == 0.0) {
    for (double& x : v) x = rng.Normal();
    norm = std::sqrt(SquaredNorm(v));
  }
  for (double& x : v) x /= norm;
  return v;
}

absl::Status ExperimentConfig::Validate() const {
  NormPowerDensity d;
  d.n = n;
  d.p = p;
  d.alpha = alpha;
  d.c = c;
  RETURN_IF_ERROR(d.Validate());
  if (!(mu > 0.0) || !std::isfinite(mu)) {
    return absl::InvalidArgumentError(absl::StrCat("mu must be > 0, got ", mu));
  }
  if (sample_size < 1) return absl::InvalidArgumentError("N must be >= 1");
  if (grid_size < 2) return absl::InvalidArgumentError("grid_size must be >= 2");
  return absl::OkStatus();
}

nlohmann::json ExperimentConfig::ToJson() const {
  return {{"n", n},
          {"p", p},
          {"alpha", alpha},
          {"c", c},
          {"mu", mu},
          {"N", sample_size},
          {"seed", seed},
          {"direction_mode", DirectionModeName(direction_mode)},
          {"variant", TieVariantName(variant)},
          {"grid_size", grid_size}};
}

absl::StatusOr<ExperimentConfig> ExperimentConfig::FromJson(const nlohmann::json& j) {
  if (!j.is_object()) return absl::InvalidArgumentError("config must be an object");
  static const std::set<std::string> kKeys = {
      "n", "p", "alpha", "c", "mu", "N", "seed", "direction_mode", "variant",
      "grid_size"};
  for (const auto& [key, value] : j.items()) {
    if (!kKeys.count(key)) {
      return absl::InvalidArgumentError(absl::StrCat("unknown config key '", key, "'"));
    }
  }
  ExperimentConfig cfg;
  try {
    cfg.n = j.value("n", cfg.n);
    cfg.p = j.value("p", cfg.p);
    cfg.alpha = j.value("alpha", cfg.alpha);
    cfg.c = j.value("c", cfg.c);
    cfg.mu = j.value("mu", cfg.mu);
    cfg.sample_size = j.value("N", cfg.sample_size);
    cfg.seed = j.value("seed", cfg.seed);
    cfg.grid_size = j.value("grid_size", cfg.grid_size);
    if (j.contains("direction_mode")) {
      ASSIGN_OR_RETURN(cfg.direction_mode,
                       ParseDirectionMode(j["direction_mode"].get<std::string>()));
    }
    if (j.contains("variant")) {
      ASSIGN_OR_RETURN(cfg.variant, ParseTieVariant(j["variant"].get<std::string>()));
    }
  } catch (const nlohmann::json::exception& e) {
    return absl::InvalidArgumentError(absl::StrCat("bad config JSON: ", e.what()));
  }
  RETURN_IF_ERROR(cfg.Validate());
  return cfg;
}

absl::StatusOr<CltDeviationResult> CltDeviation(const ExperimentConfig& config,
                                                unsigned threads) {
  RETURN_IF_ERROR(config.Validate());
  CltDeviationResult out;
  ASSIGN_OR_RETURN(out.scale, GdpScale(config.n, config.p, config.alpha,
                                       config.c, config.mu));
  // Noise t X with X ~ exp(-c ||x||_p^alpha) has coefficient c t^{-alpha}.
  NormPowerDensity d;
  d.n = config.n;
  d.p = config.p;
  d.alpha = config.alpha;
  d.c = config.c * std::pow(out.scale, -config.alpha);

  const std::vector<double> v =
      ShiftDirection(config.n, config.direction_mode, config.seed);
  ASSIGN_OR_RETURN(SampleMatrix samples,
                   SampleNormPower(d, config.sample_size, config.seed, threads));
  ASSIGN_OR_RETURN(out.curve,
                   EmpiricalTradeoffFromSamples(d, v, samples, config.variant));
  out.curve.seed = config.seed;
  ASSIGN_OR_RETURN(TradeoffCurve empirical, out.curve.Curve());
  ASSIGN_OR_RETURN(TradeoffCurve gmu, TradeoffCurve::Gdp(config.mu));
  ASSIGN_OR_RETURN(out.sup_to_gmu, SupDistance(empirical, gmu, config.grid_size));

  ASSIGN_OR_RETURN(double fisher, FisherScalar(d));
  const double vIv = fisher * SquaredNorm(v);
  std::vector<double> projections(samples.rows);
  std::vector<double> linear(samples.rows);
  std::vector<double> plus(samples.cols);
  std::vector<double> grad(samples.cols);
  for (std::size_t i = 0; i < samples.rows; ++i) {
    const auto x = samples.Row(i);
    for (std::size_t k = 0; k < x.size(); ++k) plus[k] = x[k] + v[k];
    projections[i] = d.Phi(plus) - d.Phi(x) - 0.5 * vIv;
    d.Gradient(x, grad);
    double dot = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) dot += v[k] * grad[k];
    linear[i] = dot;
  }
  std::vector<double> snapped = linear;
  SnapTies(projections, snapped);
  out.ks_projection = KsTwoSample(projections, snapped);
  const double sd = std::sqrt(vIv);
  for (double& x : linear) x /= sd;
  std::sort(linear.begin(), linear.end());
  ASSIGN_OR_RETURN(out.levy_projection, LevyDistanceEmpirical(linear, NormalCdf));

  if (config.direction_mode == DirectionMode::kAxis && config.p == config.alpha) {
    // Coordinates are independent, so only the first marginal is tested.
    nlohmann::json law_tag = {{"family", "generalized_normal"},
                              {"p", d.p},
                              {"c", d.c}};
    ASSIGN_OR_RETURN(TradeoffCurve exact,
                     TradeoffCurve::FromLaw(GeneralizedNormalLaw(d.p, d.c), 1.0,
                                            std::move(law_tag)));
    ASSIGN_OR_RETURN(double gap, SupDistance(exact, gmu, config.grid_size));
    out.exact_sup_to_gmu = gap;
  }
  return out;
}

}  // namespace dpclt
