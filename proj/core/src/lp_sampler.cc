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

#include "dpclt/lp_sampler.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "absl/strings/str_cat.h"
#include "dpclt/random.h"
#include "dpclt/stats.h"
#include "dpclt/status_macros.h"

namespace dpclt {
namespace {

absl::Status CheckDimensions(double p, int n) {
  if (!(p >= 1.0) || !std::isfinite(p)) {
    return absl::InvalidArgumentError(absl::StrCat("p must be >= 1, got ", p));
  }
  if (n < 1) {
    return absl::InvalidArgumentError(absl::StrCat("n must be >= 1, got ", n));
  }
  return absl::OkStatus();
}

absl::Status CheckCount(std::size_t count) {
  if (count < 1) return absl::InvalidArgumentError("count must be >= 1");
  return absl::OkStatus();
}

// Fills `row` with a cone-measure point on the unit l_p sphere. Coordinates
// are sign * (xi_i / sum xi)^{1/p} with xi_i ~ Gamma(1/p), evaluated in logs
// so small shapes do not underflow.
void FillSpherePoint(Rng& rng, double p, std::span<double> row,
                     std::vector<double>& logs) {
  const double shape = 1.0 / p;
  double max_log = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < row.size(); ++i) {
    logs[i] = rng.LogGamma(shape);
    max_log = std::max(max_log, logs[i]);
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < row.size(); ++i) sum += std::exp(logs[i] - max_log);
  const double log_total = max_log + std::log(sum);
  for (std::size_t i = 0; i < row.size(); ++i) {
    row[i] = rng.Rademacher() * std::exp((logs[i] - log_total) / p);
  }
}

SampleMatrix MakeMatrix(std::size_t rows, int cols) {
  SampleMatrix m;
  m.rows = rows;
  m.cols = static_cast<std::size_t>(cols);
  m.data.assign(m.rows * m.cols, 0.0);
  return m;
}

}  // namespace

absl::Status NormPowerDensity::Validate() const {
  RETURN_IF_ERROR(CheckDimensions(p, n));
  if (!(alpha >= 1.0) || !std::isfinite(alpha)) {
    return absl::InvalidArgumentError(
        absl::StrCat("alpha must be >= 1, got ", alpha));
  }
  if (!(c > 0.0) || !std::isfinite(c)) {
    return absl::InvalidArgumentError(absl::StrCat("c must be > 0, got ", c));
  }
  return absl::OkStatus();
}

double LpNorm(std::span<const double> x, double p) {
  double scale = 0.0;
  for (double v : x) scale = std::max(scale, std::abs(v));
  if (std::isinf(p) || scale == 0.0) return scale;
  double sum = 0.0;
  for (double v : x) sum += std::pow(std::abs(v) / scale, p);
  return scale * std::pow(sum, 1.0 / p);
}

double NormPowerDensity::Phi(std::span<const double> x) const {
  return c * std::pow(LpNorm(x, p), alpha);
}

void NormPowerDensity::Gradient(std::span<const double> x,
                                std::span<double> out) const {
  const double norm = LpNorm(x, p);
  if (norm == 0.0) {
    std::fill(out.begin(), out.end(), 0.0);
    return;
  }
  const double radial = c * alpha * std::pow(norm, alpha - p);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double s = x[i] > 0.0 ? 1.0 : (x[i] < 0.0 ? -1.0 : 0.0);
    out[i] = radial * (p == 1.0 ? s : s * std::pow(std::abs(x[i]), p - 1.0));
  }
}

double NormPowerDensity::GradientNormSquared(std::span<const double> x) const {
  const double norm = LpNorm(x, p);
  if (norm == 0.0) return 0.0;
  double sum = 0.0;
  for (double v : x) {
    if (p == 1.0) {
      sum += v != 0.0 ? 1.0 : 0.0;
    } else {
      sum += std::pow(std::abs(v) / norm, 2.0 * p - 2.0);
    }
  }
  // ||grad||^2 = (c alpha)^2 ||x||_p^{2 alpha - 2} * sum (|x_i| / ||x||_p)^{2p-2}.
  return c * c * alpha * alpha * std::pow(norm, 2.0 * alpha - 2.0) * sum;
}

nlohmann::json NormPowerDensity::ToJson() const {
  return {{"n", n}, {"p", p}, {"alpha", alpha}, {"c", c}};
}

absl::StatusOr<NormPowerDensity> NormPowerDensity::FromJson(
    const nlohmann::json& j) {
  NormPowerDensity d;
  try {
    d.n = j.at("n").get<int>();
    d.p = j.at("p").get<double>();
    d.alpha = j.at("alpha").get<double>();
    d.c = j.value("c", 1.0);
  } catch (const nlohmann::json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("bad norm-power JSON: ", e.what()));
  }
  RETURN_IF_ERROR(d.Validate());
  return d;
}

std::vector<double> SampleMatrix::Column(std::size_t j) const {
  std::vector<double> out(rows);
  for (std::size_t i = 0; i < rows; ++i) out[i] = data[i * cols + j];
  return out;
}

absl::StatusOr<SampleMatrix> SampleNormPower(const NormPowerDensity& d,
                                             std::size_t count,
                                             std::uint64_t seed,
                                             unsigned threads) {
  RETURN_IF_ERROR(d.Validate());
  RETURN_IF_ERROR(CheckCount(count));
  SampleMatrix m = MakeMatrix(count, d.n);
  const double n = static_cast<double>(d.n);
  const double coefficient = std::pow(d.c, -1.0 / d.alpha);
  ForEachBlock(count, threads, [&](std::size_t block, std::size_t begin,
                                   std::size_t end) {
    Rng rng(SubstreamSeed(seed, block));
    std::vector<double> logs(m.cols);
    for (std::size_t i = begin; i < end; ++i) {
      std::span<double> row = m.Row(i);
      FillSpherePoint(rng, d.p, row, logs);
      // Radius r^{1/n} of a uniform point in the ball, times T^{1/alpha}.
      const double log_radius = std::log(rng.UniformOpen()) / n +
                                rng.LogGamma(n / d.alpha + 1.0) / d.alpha;
      const double radius = coefficient * std::exp(log_radius);
      for (double& v : row) v *= radius;
    }
  });
  return m;
}

absl::StatusOr<SampleMatrix> SampleIndependent(double p, int n,
                                               std::size_t count,
                                               std::uint64_t seed,
                                               unsigned threads) {
  RETURN_IF_ERROR(CheckDimensions(p, n));
  RETURN_IF_ERROR(CheckCount(count));
  SampleMatrix m = MakeMatrix(count, n);
  ForEachBlock(count, threads, [&](std::size_t block, std::size_t begin,
                                   std::size_t end) {
    Rng rng(SubstreamSeed(seed, block));
    for (std::size_t i = begin; i < end; ++i) {
      for (double& v : m.Row(i)) {
        v = rng.Rademacher() * std::exp(rng.LogGamma(1.0 / p) / p);
      }
    }
  });
  return m;
}

absl::StatusOr<SampleMatrix> SampleLpSphere(double p, int n, std::size_t count,
                                            std::uint64_t seed,
                                            unsigned threads) {
  RETURN_IF_ERROR(CheckDimensions(p, n));
  RETURN_IF_ERROR(CheckCount(count));
  SampleMatrix m = MakeMatrix(count, n);
  ForEachBlock(count, threads, [&](std::size_t block, std::size_t begin,
                                   std::size_t end) {
    Rng rng(SubstreamSeed(seed, block));
    std::vector<double> logs(m.cols);
    for (std::size_t i = begin; i < end; ++i) FillSpherePoint(rng, p, m.Row(i), logs);
  });
  return m;
}

absl::StatusOr<NormConcentration> NormConcentrationCheck(
    const NormPowerDensity& d, std::size_t count, std::uint64_t seed,
    unsigned threads) {
  ASSIGN_OR_RETURN(SampleMatrix m, SampleNormPower(d, count, seed, threads));
  const double reference = std::pow(d.n / (d.c * d.alpha), 1.0 / d.alpha);
  std::vector<double> ratios(m.rows);
  for (std::size_t i = 0; i < m.rows; ++i) {
    ratios[i] = LpNorm(m.Row(i), d.p) / reference;
  }
  NormConcentration out;
  out.median = SampleQuantile(ratios, 0.5);
  out.iqr = SampleQuantile(ratios, 0.75) - SampleQuantile(ratios, 0.25);
  return out;
}

}  // namespace dpclt
