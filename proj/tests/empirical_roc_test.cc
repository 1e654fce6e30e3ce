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
#include <numbers>
#include <vector>

#include "dpclt/lp_sampler.h"
#include "dpclt/noise1d.h"
#include "dpclt/random.h"
#include "dpclt/stats.h"
#include "gtest/gtest.h"
#include "oracles.h"
#include "test_util.h"

namespace dpclt {
namespace {

using ::dpclt::oracle::Phi;

NormPowerDensity Density(int n, double p, double alpha, double c = 1.0) {
  NormPowerDensity d;
  d.n = n;
  d.p = p;
  d.alpha = alpha;
  d.c = c;
  return d;
}

void ExpectValidCurve(const EmpiricalCurve& c) {
  ASSERT_EQ(c.betas.size(), c.sample_size + 1);
  EXPECT_EQ(c.betas.back(), 0.0);
  for (std::size_t j = 0; j < c.betas.size(); ++j) {
    EXPECT_GE(c.betas[j], 0.0);
    EXPECT_LE(c.betas[j], 1.0);
    if (j > 0) EXPECT_LE(c.betas[j], c.betas[j - 1]);
  }
}

double SupToGdp(const EmpiricalCurve& c, double mu) {
  TradeoffCurve f = *c.Curve();
  TradeoffCurve g = *TradeoffCurve::Gdp(mu);
  return *SupDistance(f, g, 1001);
}

// Gaussian shift pair N(0, 1) vs N(shift, 1) in one dimension.
struct ShiftPair {
  LogDensity log_p;
  LogDensity log_q;
  PointSampler sample_p;
  PointSampler sample_q;
};

ShiftPair OneDimensional(const NoiseModel& model, double shift) {
  auto log_pdf = [model](double x) { return std::log(model.Pdf(x)); };
  auto sampler = [model](double offset) {
    return [model, offset](std::size_t count,
                           std::uint64_t seed) -> absl::StatusOr<SampleMatrix> {
      SampleMatrix m{count, 1, Sample(model, count, seed)};
      for (double& x : m.data) x += offset;
      return m;
    };
  };
  return {[log_pdf](std::span<const double> x) { return log_pdf(x[0]); },
          [log_pdf, shift](std::span<const double> x) { return log_pdf(x[0] - shift); },
          sampler(0.0), sampler(shift)};
}

TEST(BetasFromLlrTest, HandExample) {
  // H0 ratios {3, 1, 2}, H1 ratios {0.5, 2.5, 4}.
  const std::vector<double> a = {3.0, 1.0, 2.0};
  const std::vector<double> b = {0.5, 2.5, 4.0};
  const std::vector<double> app = BetasFromLlr(a, b, TieVariant::kAppendix);
  EXPECT_EQ(app, (std::vector<double>{1.0, 2.0 / 3.0, 1.0 / 3.0, 0.0}));
  const std::vector<double> main = BetasFromLlr(a, b, TieVariant::kMainText);
  EXPECT_EQ(main, (std::vector<double>{2.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 0.0}));
}

TEST(BetasFromLlrTest, VariantsDifferByOneOrderStatistic) {
  Rng rng(5);
  std::vector<double> a(200), b(200);
  for (double& x : a) x = rng.Normal();
  for (double& x : b) x = rng.Normal() + 1.0;
  const std::vector<double> app = BetasFromLlr(a, b, TieVariant::kAppendix);
  const std::vector<double> main = BetasFromLlr(a, b, TieVariant::kMainText);
  for (std::size_t j = 0; j + 1 < app.size(); ++j) EXPECT_EQ(main[j], app[j + 1]);
}

TEST(BetasFromLlrTest, TiesAreSplit) {
  for (TieVariant variant : {TieVariant::kAppendix, TieVariant::kMainText}) {
    const std::vector<double> zeros(50, 0.0);
    const std::vector<double> betas = BetasFromLlr(zeros, zeros, variant);
    for (std::size_t j = 0; j < betas.size(); ++j) {
      EXPECT_NEAR(betas[j] + j / 50.0, 1.0, 1e-12) << TieVariantName(variant) << j;
    }
  }
}

TEST(LikelihoodProjectionTest, Examples) {
  const NormPowerDensity gauss = Density(3, 2.0, 2.0, 0.5);
  const std::vector<double> v = {0.3, -0.4, 1.2};
  const std::vector<double> x = {1.5, 0.2, -0.7};
  const std::vector<double> zero(3, 0.0);
  EXPECT_NEAR(*LikelihoodProjection(gauss, zero, x), 0.0, 1e-15);
  EXPECT_NEAR(*LikelihoodProjection(Density(3, 3.0, 1.5), zero, x), 0.0, 1e-15);
  double dot = 0.0;
  for (int i = 0; i < 3; ++i) dot += v[i] * x[i];
  EXPECT_NEAR(*LikelihoodProjection(gauss, v, x), dot, 1e-14);
  const std::vector<double> one = {1.0}, three = {3.0};
  EXPECT_NEAR(*LikelihoodProjection(Density(1, 1.0, 1.0), one, three), 0.5, 1e-15);
  EXPECT_FALSE(LikelihoodProjection(gauss, one, x).ok());
}

TEST(EmpiricalTradeoffTest, GaussianMatchesGdp) {
  const NormPowerDensity d = Density(5, 2.0, 2.0, 0.5);
  const std::vector<double> v = ShiftDirection(5, DirectionMode::kRandomUnit, 3);
  ASSERT_OK_AND_ASSIGN(EmpiricalCurve c, EmpiricalTradeoff(d, v, 10000, 4));
  ExpectValidCurve(c);
  EXPECT_LE(SupToGdp(c, 1.0), 0.03);
}

TEST(EmpiricalTradeoffTest, DegenerateShifts) {
  const NormPowerDensity d = Density(3, 1.5, 2.0);
  const std::vector<double> zero(3, 0.0);
  ASSERT_OK_AND_ASSIGN(EmpiricalCurve same, EmpiricalTradeoff(d, zero, 1000, 5));
  ExpectValidCurve(same);
  for (std::size_t j = 0; j <= 1000; ++j) {
    EXPECT_NEAR(same.betas[j], 1.0 - j / 1000.0, 1e-12);
  }
  const std::vector<double> far = {1e3, 0.0, 0.0};
  ASSERT_OK_AND_ASSIGN(EmpiricalCurve perfect, EmpiricalTradeoff(d, far, 1000, 6));
  ExpectValidCurve(perfect);
  for (std::size_t j = 1; j <= 1000; ++j) EXPECT_EQ(perfect.betas[j], 0.0);
}

TEST(EmpiricalTradeoffTest, InvariantsAndDeterminism) {
  for (TieVariant variant : {TieVariant::kAppendix, TieVariant::kMainText}) {
    const NormPowerDensity d = Density(4, 1.0, 1.0);
    const std::vector<double> v = ShiftDirection(4, DirectionMode::kAxis, 0);
    ASSERT_OK_AND_ASSIGN(EmpiricalCurve a, EmpiricalTradeoff(d, v, 3000, 9, variant, 1));
    ASSERT_OK_AND_ASSIGN(EmpiricalCurve b, EmpiricalTradeoff(d, v, 3000, 9, variant, 3));
    ExpectValidCurve(a);
    EXPECT_EQ(a.betas, b.betas);
  }
}

TEST(EmpiricalTradeoffTest, LaplaceAtomsMatchExactCurve) {
  const NormPowerDensity d = Density(1, 1.0, 1.0);
  ASSERT_OK_AND_ASSIGN(TradeoffCurve exact, ExactTradeoff(*NoiseModel::Laplace(1.0), 1.0));
  for (double shift : {1.0, -1.0}) {
    const std::vector<double> v = {shift};
    for (TieVariant variant : {TieVariant::kAppendix, TieVariant::kMainText}) {
      ASSERT_OK_AND_ASSIGN(EmpiricalCurve c, EmpiricalTradeoff(d, v, 10000, 14, variant));
      ASSERT_OK_AND_ASSIGN(TradeoffCurve f, c.Curve());
      EXPECT_LE(*SupDistance(f, exact, 1001), 0.03) << shift;
    }
  }
}

TEST(EmpiricalTradeoffTest, RejectsMismatchedShift) {
  const std::vector<double> v = {1.0, 0.0};
  EXPECT_FALSE(EmpiricalTradeoff(Density(3, 2.0, 2.0), v, 100, 1).ok());
}

TEST(EmpiricalTradeoffGeneralTest, IdenticalGaussians) {
  const ShiftPair pair = OneDimensional(*NoiseModel::Gaussian(1.0), 0.0);
  ASSERT_OK_AND_ASSIGN(EmpiricalCurve c,
                       EmpiricalTradeoffGeneral(pair.log_p, pair.log_q, pair.sample_p,
                                                pair.sample_q, 10000, 1));
  ExpectValidCurve(c);
  for (std::size_t j = 0; j <= 10000; ++j) {
    EXPECT_NEAR(c.betas[j], 1.0 - j / 10000.0, 2.0 / std::sqrt(10000.0));
  }
}

TEST(EmpiricalTradeoffGeneralTest, GaussianShift) {
  const ShiftPair pair = OneDimensional(*NoiseModel::Gaussian(1.0), 1.0);
  ASSERT_OK_AND_ASSIGN(EmpiricalCurve c,
                       EmpiricalTradeoffGeneral(pair.log_p, pair.log_q, pair.sample_p,
                                                pair.sample_q, 10000, 2));
  ExpectValidCurve(c);
  EXPECT_LE(SupToGdp(c, 1.0), 0.03);
}

TEST(EmpiricalTradeoffGeneralTest, LaplaceShift) {
  ASSERT_OK_AND_ASSIGN(NoiseModel lap, NoiseModel::Laplace(1.0));
  const ShiftPair pair = OneDimensional(lap, 1.0);
  for (TieVariant variant : {TieVariant::kAppendix, TieVariant::kMainText}) {
    ASSERT_OK_AND_ASSIGN(EmpiricalCurve c,
                         EmpiricalTradeoffGeneral(pair.log_p, pair.log_q, pair.sample_p,
                                                  pair.sample_q, 10000, 3, variant));
    ASSERT_OK_AND_ASSIGN(TradeoffCurve exact, ExactTradeoff(lap, 1.0));
    ASSERT_OK_AND_ASSIGN(TradeoffCurve f, c.Curve());
    EXPECT_LE(*SupDistance(f, exact, 1001), 0.03);
  }
}

TEST(EmpiricalTradeoffGeneralTest, NonFiniteDensityNamesSample) {
  ASSERT_OK_AND_ASSIGN(NoiseModel tl, NoiseModel::TruncatedLaplace(1.0, 1.0));
  const ShiftPair pair = OneDimensional(tl, 1.5);
  absl::StatusOr<EmpiricalCurve> c = EmpiricalTradeoffGeneral(
      pair.log_p, pair.log_q, pair.sample_p, pair.sample_q, 100, 4);
  ASSERT_FALSE(c.ok());
  EXPECT_EQ(c.status().code(), absl::StatusCode::kOutOfRange);
  EXPECT_NE(c.status().message().find("sample"), std::string::npos);
}

TEST(ProjectionCdfTest, Examples) {
  const UnivariateLaw normal{Phi, [](double u) { return oracle::PhiInverse(u); }};
  for (double a : UniformAlphaGrid(101)) {
    if (a == 0.0 || a == 1.0) continue;
    ASSERT_OK_AND_ASSIGN(ProjectionTradeoff g, TradeoffFromProjectionCdfs(normal, normal, 1.0, a));
    EXPECT_NEAR(g.beta, oracle::Gdp(1.0, a), 1e-9);
    ASSERT_OK_AND_ASSIGN(ProjectionTradeoff id, TradeoffFromProjectionCdfs(normal, normal, 0.0, a));
    EXPECT_NEAR(id.beta, 1.0 - a, 1e-9);
  }
  EXPECT_FALSE(TradeoffFromProjectionCdfs(normal, normal, 1.0, 1.2).ok());
  EXPECT_FALSE(TradeoffFromProjectionCdfs(normal, normal, -1.0, 0.5).ok());
}

TEST(ProjectionCdfTest, RouteEquivalence) {
  for (const NormPowerDensity& d : {Density(1, 1.0, 1.0), Density(6, 3.0, 1.5)}) {
    const std::vector<double> v = ShiftDirection(d.n, DirectionMode::kRandomUnit, 8);
    ASSERT_OK_AND_ASSIGN(SampleMatrix samples, SampleNormPower(d, 10000, 12));
    ASSERT_OK_AND_ASSIGN(EmpiricalCurve direct, EmpiricalTradeoffFromSamples(d, v, samples));
    ASSERT_OK_AND_ASSIGN(TradeoffCurve projected,
                         ProjectionTradeoffCurve(d, v, samples, 1001));
    ASSERT_OK_AND_ASSIGN(TradeoffCurve f, direct.Curve());
    EXPECT_LE(*SupDistance(f, projected, 1001), 0.05) << d.ToJson().dump();
    if (d.n == 1) {
      ASSERT_OK_AND_ASSIGN(TradeoffCurve exact,
                           ExactTradeoff(*NoiseModel::Laplace(1.0), 1.0));
      EXPECT_LE(*SupDistance(projected, exact, 1001), 0.03);
    }
  }
}

TEST(ShiftDirectionTest, UnitVectors) {
  const std::vector<double> v = ShiftDirection(30, DirectionMode::kRandomUnit, 4);
  double norm2 = 0.0;
  for (double x : v) norm2 += x * x;
  EXPECT_NEAR(norm2, 1.0, 1e-14);
  EXPECT_EQ(v, ShiftDirection(30, DirectionMode::kRandomUnit, 4));
  EXPECT_NE(v, ShiftDirection(30, DirectionMode::kRandomUnit, 5));
  const std::vector<double> e1 = ShiftDirection(3, DirectionMode::kAxis, 4);
  EXPECT_EQ(e1, (std::vector<double>{1.0, 0.0, 0.0}));
}

TEST(ExperimentConfigTest, JsonRoundTrip) {
  ExperimentConfig c;
  c.n = 12;
  c.p = std::numbers::pi;
  c.sample_size = 500;
  c.direction_mode = DirectionMode::kAxis;
  c.variant = TieVariant::kMainText;
  ASSERT_OK_AND_ASSIGN(ExperimentConfig back, ExperimentConfig::FromJson(c.ToJson()));
  EXPECT_EQ(back.ToJson(), c.ToJson());
  EXPECT_FALSE(ExperimentConfig::FromJson({{"bogus", 1}}).ok());
  EXPECT_FALSE(ExperimentConfig::FromJson({{"p", 0.5}}).ok());
  ASSERT_OK_AND_ASSIGN(ExperimentConfig partial, ExperimentConfig::FromJson({{"N", 77}}));
  EXPECT_EQ(partial.sample_size, 77u);
  EXPECT_EQ(partial.n, 30);
}

TEST(CltDeviationTest, ExactGaussian) {
  ExperimentConfig c;
  ASSERT_OK_AND_ASSIGN(CltDeviationResult r, CltDeviation(c));
  EXPECT_NEAR(r.scale, 1.0, 1e-12);
  EXPECT_LE(r.sup_to_gmu, 0.03);
  EXPECT_LE(r.ks_projection, 0.03);
  EXPECT_LE(r.levy_projection, 0.03);
  ExpectValidCurve(r.curve);
}

TEST(CltDeviationTest, AxisLaplaceDeviates) {
  ExperimentConfig c;
  c.p = 1.0;
  c.alpha = 1.0;
  c.c = 1.0;
  c.direction_mode = DirectionMode::kAxis;
  c.sample_size = 2000;
  ASSERT_OK_AND_ASSIGN(CltDeviationResult r, CltDeviation(c));
  ASSERT_TRUE(r.exact_sup_to_gmu.has_value());
  EXPECT_GE(*r.exact_sup_to_gmu, 0.1);
  EXPECT_GE(r.sup_to_gmu, 0.1);
}

TEST(CltDeviationTest, ThreadCountDoesNotMatter) {
  ExperimentConfig c;
  c.n = 8;
  c.p = 3.0;
  c.alpha = 1.5;
  c.sample_size = 3000;
  ASSERT_OK_AND_ASSIGN(CltDeviationResult a, CltDeviation(c, 1));
  ASSERT_OK_AND_ASSIGN(CltDeviationResult b, CltDeviation(c, 4));
  EXPECT_EQ(a.curve.betas, b.curve.betas);
  EXPECT_EQ(a.sup_to_gmu, b.sup_to_gmu);
}

TEST(CltDeviationTest, ErrorShrinksWithSampleSize) {
  double previous = INFINITY;
  for (std::size_t n_samples : {100u, 1000u, 10000u}) {
    std::vector<double> sups;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      ExperimentConfig c;
      c.n = 5;
      c.sample_size = n_samples;
      c.seed = seed;
      ASSERT_OK_AND_ASSIGN(CltDeviationResult r, CltDeviation(c));
      sups.push_back(r.sup_to_gmu);
    }
    const double med = Median(sups);
    EXPECT_LT(med, previous) << n_samples;
    previous = med;
  }
}

}  // namespace
}  // namespace dpclt
