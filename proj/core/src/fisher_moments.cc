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

#include "dpclt/fisher_moments.h"

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "dpclt/numerics.h"
#include "dpclt/stats.h"
#include "dpclt/status_macros.h"

namespace dpclt {
namespace {

absl::Status CheckParams(int n, double p, double alpha) {
  NormPowerDensity d;
  d.n = n;
  d.p = p;
  d.alpha = alpha;
  return d.Validate();
}

absl::StatusOr<double> FiniteExp(double log_value, const char* what) {
  const double value = std::exp(log_value);
  if (!std::isfinite(value) || value == 0.0) {
    return absl::OutOfRangeError(absl::StrCat(
        what, " leaves the double range (log value ", log_value, ")"));
  }
  return value;
}

double LogGammaFn(double x) { return std::lgamma(x); }

}  // namespace

absl::StatusOr<double> GammaMoment(double k, double m) {
  if (!(k > 0.0) || !(m + k > 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("need k > 0 and m + k > 0, got k=", k, " m=", m));
  }
  return FiniteExp(LogGammaFn(m + k) - LogGammaFn(k), "Gamma moment");
}

absl::StatusOr<double> LogLpBallVolume(int n, double p) {
  RETURN_IF_ERROR(CheckParams(n, p, 1.0));
  return n * std::numbers::ln2 + n * LogGammaFn(1.0 / p + 1.0) -
         LogGammaFn(n / p + 1.0);
}

absl::StatusOr<double> LpBallVolume(int n, double p) {
  ASSIGN_OR_RETURN(double log_volume, LogLpBallVolume(n, p));
  return FiniteExp(log_volume, "l_p ball volume");
}

absl::StatusOr<double> LogNormalizer(int n, double p, double alpha, double c) {
  RETURN_IF_ERROR(CheckParams(n, p, alpha));
  if (!(c > 0.0)) return absl::InvalidArgumentError("c must be > 0");
  ASSIGN_OR_RETURN(double log_volume, LogLpBallVolume(n, p));
  return LogGammaFn(n / alpha + 1.0) - (n / alpha) * std::log(c) + log_volume;
}

absl::StatusOr<double> Normalizer(int n, double p, double alpha, double c) {
  ASSIGN_OR_RETURN(double log_z, LogNormalizer(n, p, alpha, c));
  return FiniteExp(log_z, "normalizer");
}

absl::StatusOr<double> SecondMomentExact(int n, double p, double alpha) {
  RETURN_IF_ERROR(CheckParams(n, p, alpha));
  const double nn = static_cast<double>(n);
  const double log_value = LogGammaRatio(nn / alpha + 1.0 + 2.0 / alpha, nn / alpha + 1.0) +
                           LogGammaRatio(nn / p + 1.0, nn / p + 1.0 + 2.0 / p) +
                           std::log(nn) + LogGammaRatio(3.0 / p, 1.0 / p);
  return FiniteExp(log_value, "second moment");
}

absl::StatusOr<double> FisherInfoExact(int n, double p, double alpha) {
  RETURN_IF_ERROR(CheckParams(n, p, alpha));
  const double nn = static_cast<double>(n);
  const double log_value = 2.0 * std::log(alpha) +
                           LogGammaRatio((nn + 2.0 * alpha - 2.0) / alpha, nn / alpha) +
                           LogGammaRatio(nn / p, (nn + 2.0 * p - 2.0) / p) +
                           LogGammaRatio(2.0 - 1.0 / p, 1.0 / p);
  return FiniteExp(log_value, "Fisher information");
}

absl::StatusOr<MomentAsymptotics> Asymptotics(int n, double p, double alpha) {
  RETURN_IF_ERROR(CheckParams(n, p, alpha));
  const double nn = static_cast<double>(n);
  const double g3 = std::exp(LogGammaFn(3.0 / p) - LogGammaFn(1.0 / p));
  const double g2 = std::exp(LogGammaFn(2.0 - 1.0 / p) - LogGammaFn(1.0 / p));
  MomentAsymptotics a;
  a.second_moment = std::pow(nn, 2.0 / alpha - 2.0 / p + 1.0) *
                    std::pow(alpha, -2.0 / alpha) * std::pow(p, 2.0 / p) * g3;
  a.fisher = std::pow(nn, 2.0 / p - 2.0 / alpha) * std::pow(alpha, 2.0 / alpha) *
             std::pow(p, 2.0 - 2.0 / p) * g2;
  a.product_slope = p * p * g3 * g2;
  return a;
}

absl::StatusOr<double> CCoefficient(double p, double alpha) {
  RETURN_IF_ERROR(CheckParams(1, p, alpha));
  const double g2 = std::exp(LogGammaFn(2.0 - 1.0 / p) - LogGammaFn(1.0 / p));
  return std::pow(p, -alpha + alpha / p) * std::pow(g2, -alpha / 2.0) / alpha;
}

absl::StatusOr<McEstimate> FisherInfoMc(const NormPowerDensity& d,
                                        std::size_t count, std::uint64_t seed,
                                        unsigned threads) {
  ASSIGN_OR_RETURN(SampleMatrix m, SampleNormPower(d, count, seed, threads));
  std::vector<double> values(m.rows);
  for (std::size_t i = 0; i < m.rows; ++i) {
    values[i] = d.GradientNormSquared(m.Row(i)) / d.n;
  }
  McEstimate out;
  out.value = Mean(values);
  out.std_error =
      values.size() > 1 ? std::sqrt(SampleVariance(values) / values.size()) : 0.0;
  return out;
}

absl::StatusOr<UncertaintyProduct> UncertaintyProducts(int n, double p,
                                                       double alpha,
                                                       std::size_t count,
                                                       std::uint64_t seed,
                                                       unsigned threads) {
  ASSIGN_OR_RETURN(double second, SecondMomentExact(n, p, alpha));
  ASSIGN_OR_RETURN(double fisher, FisherInfoExact(n, p, alpha));
  UncertaintyProduct out;
  out.l2_product = second * fisher;
  if (count == 0) return out;
  NormPowerDensity d;
  d.n = n;
  d.p = p;
  d.alpha = alpha;
  ASSIGN_OR_RETURN(SampleMatrix m, SampleNormPower(d, count, seed, threads));
  std::vector<double> sup_sq(m.rows);
  for (std::size_t i = 0; i < m.rows; ++i) {
    const double sup = LpNorm(m.Row(i), std::numeric_limits<double>::infinity());
    sup_sq[i] = sup * sup * fisher;
  }
  out.linf_product_estimate = Mean(sup_sq);
  out.linf_std_error =
      sup_sq.size() > 1 ? std::sqrt(SampleVariance(sup_sq) / sup_sq.size()) : 0.0;
  return out;
}

absl::StatusOr<IsotropicConstants> ComputeIsotropicConstants(int n, double p,
                                                             double alpha) {
  RETURN_IF_ERROR(CheckParams(n, p, alpha));
  const double nn = static_cast<double>(n);
  const double log_shape = 2.0 * std::log(p) - 2.0 * std::numbers::ln2 +
                           LogGammaFn(3.0 / p) - 3.0 * LogGammaFn(1.0 / p);
  const double log_ball_sq = log_shape +
                             (1.0 + 2.0 / nn) * LogGammaFn(nn / p + 1.0) -
                             LogGammaFn(nn / p + 1.0 + 2.0 / p);
  const double log_density_sq =
      log_shape + LogGammaFn(nn / alpha + 1.0 + 2.0 / alpha) -
      LogGammaFn(nn / p + 1.0 + 2.0 / p) +
      (1.0 + 2.0 / nn) * (LogGammaFn(nn / p + 1.0) - LogGammaFn(nn / alpha + 1.0));
  IsotropicConstants out;
  out.l_ball = std::exp(0.5 * log_ball_sq);
  out.l_density = std::exp(0.5 * log_density_sq);
  return out;
}

absl::StatusOr<double> GdpScale(int n, double p, double alpha, double c,
                                double mu) {
  if (!(mu > 0.0) || !std::isfinite(mu)) {
    return absl::InvalidArgumentError(absl::StrCat("mu must be > 0, got ", mu));
  }
  if (!(c > 0.0) || !std::isfinite(c)) {
    return absl::InvalidArgumentError(absl::StrCat("c must be > 0, got ", c));
  }
  ASSIGN_OR_RETURN(double fisher, FisherInfoExact(n, p, alpha));
  return std::sqrt(std::pow(c, 2.0 / alpha) * fisher) / mu;
}

nlohmann::json FisherSummary::ToJson() const {
  return {{"n", n},
          {"p", p},
          {"alpha", alpha},
          {"fisher_norm", fisher_norm},
          {"second_moment_l2", second_moment_l2},
          {"fisher_asymp", fisher_asymp},
          {"second_moment_asymp", second_moment_asymp},
          {"uncertainty_l2", uncertainty_l2},
          {"isotropic_ball", isotropic_ball},
          {"isotropic_density", isotropic_density}};
}

absl::StatusOr<FisherSummary> Summarize(int n, double p, double alpha) {
  FisherSummary s;
  s.n = n;
  s.p = p;
  s.alpha = alpha;
  ASSIGN_OR_RETURN(s.fisher_norm, FisherInfoExact(n, p, alpha));
  ASSIGN_OR_RETURN(s.second_moment_l2, SecondMomentExact(n, p, alpha));
  ASSIGN_OR_RETURN(MomentAsymptotics a, Asymptotics(n, p, alpha));
  s.fisher_asymp = a.fisher;
  s.second_moment_asymp = a.second_moment;
  s.uncertainty_l2 = s.fisher_norm * s.second_moment_l2;
  ASSIGN_OR_RETURN(IsotropicConstants iso, ComputeIsotropicConstants(n, p, alpha));
  s.isotropic_ball = iso.l_ball;
  s.isotropic_density = iso.l_density;
  return s;
}

absl::StatusOr<ThinShell> ThinShellDiagnostic(int n, double p, double alpha,
                                              std::size_t count,
                                              std::uint64_t seed,
                                              unsigned threads) {
  ASSIGN_OR_RETURN(double c_pa, CCoefficient(p, alpha));
  NormPowerDensity d;
  d.n = n;
  d.p = p;
  d.alpha = alpha;
  d.c = std::pow(static_cast<double>(n), 1.0 - alpha / p) * c_pa;
  ASSIGN_OR_RETURN(SampleMatrix m, SampleNormPower(d, count, seed, threads));
  std::vector<double> ratios(m.rows);
  const double root_n = std::sqrt(static_cast<double>(n));
  for (std::size_t i = 0; i < m.rows; ++i) {
    ratios[i] = std::sqrt(d.GradientNormSquared(m.Row(i))) / root_n;
  }
  ThinShell out;
  out.median = SampleQuantile(ratios, 0.5);
  out.std_dev = ratios.size() > 1 ? std::sqrt(SampleVariance(ratios)) : 0.0;
  return out;
}

}  // namespace dpclt
