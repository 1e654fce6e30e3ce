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
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "gtest/gtest.h"
#include "oracles.h"
#include "test_util.h"

namespace dpclt {
namespace {

using ::dpclt::oracle::LaplaceCdf;
using ::dpclt::oracle::Phi;

double LaplaceQuantile(double u) {
  if (u <= 0.0) return -HUGE_VAL;
  if (u >= 1.0) return HUGE_VAL;
  return u < 0.5 ? std::log(2.0 * u) : -std::log(2.0 * (1.0 - u));
}

UnivariateLaw StandardLaplace() { return {LaplaceCdf, LaplaceQuantile}; }

UnivariateLaw StandardNormal() {
  return {Phi, [](double u) {
            if (u <= 0.0) return -HUGE_VAL;
            if (u >= 1.0) return HUGE_VAL;
            return oracle::PhiInverse(u);
          }};
}

// Standard Laplace conditioned on [-h, h].
UnivariateLaw TruncatedLaplace(double h) {
  const double lo = LaplaceCdf(-h);
  const double mass = LaplaceCdf(h) - lo;
  return {[=](double x) {
            if (x <= -h) return 0.0;
            if (x >= h) return 1.0;
            return (LaplaceCdf(x) - lo) / mass;
          },
          [=](double u) {
            return std::clamp(LaplaceQuantile(lo + mass * u), -h, h);
          }};
}

double TlapHOracle(double eps, double delta) {
  return std::log(1.0 + (std::exp(eps) - 1.0) / (2.0 * delta));
}

bool InClamped(const TradeoffCurve& f, double a) {
  for (const AlphaInterval& iv : f.clamped_intervals()) {
    if (a >= iv.lo - 1e-12 && a <= iv.hi + 1e-12) return true;
  }
  return false;
}

TEST(EvalFEpsDeltaTest, Examples) {
  ASSERT_OK_AND_ASSIGN(double b0, EvalFEpsDelta(0.0, 0.0, 0.3));
  EXPECT_NEAR(b0, 0.7, 1e-15);
  ASSERT_OK_AND_ASSIGN(double b1, EvalFEpsDelta(1.0, 0.1, 0.0));
  EXPECT_NEAR(b1, 0.9, 1e-15);
  ASSERT_OK_AND_ASSIGN(double b2, EvalFEpsDelta(1.0, 0.0, 0.5));
  const double e = std::numbers::e;
  EXPECT_NEAR(b2, std::max({0.0, 1.0 - e * 0.5, 0.5 / e}), 1e-15);
  EXPECT_NEAR(b2, 0.18394, 1e-5);
  ASSERT_OK_AND_ASSIGN(double from_cdf, TradeoffFromCdf(StandardLaplace(), 1.0, 0.5));
  EXPECT_NEAR(b2, from_cdf, 1e-12);
}

TEST(EvalFEpsDeltaTest, RejectsBadParameters) {
  EXPECT_FALSE(EvalFEpsDelta(-1.0, 0.0, 0.5).ok());
  EXPECT_FALSE(EvalFEpsDelta(1.0, 1.5, 0.5).ok());
  EXPECT_FALSE(EvalFEpsDelta(1.0, 0.0, -0.1).ok());
  EXPECT_FALSE(EvalFEpsDelta(1.0, 0.0, 1.1).ok());
  EXPECT_FALSE(EvalFEpsDelta(NAN, 0.0, 0.5).ok());
}

TEST(EvalGdpTest, Examples) {
  ASSERT_OK_AND_ASSIGN(double b0, EvalGdp(0.0, 0.25));
  EXPECT_NEAR(b0, 0.75, 1e-14);
  const double fixed = Phi(-0.5);
  ASSERT_OK_AND_ASSIGN(double b1, EvalGdp(1.0, fixed));
  EXPECT_NEAR(b1, fixed, 1e-12);
  ASSERT_OK_AND_ASSIGN(double b2, EvalGdp(2.0, 0.5));
  EXPECT_NEAR(b2, Phi(-2.0), 1e-14);
  EXPECT_FALSE(EvalGdp(-0.5, 0.5).ok());
  EXPECT_FALSE(EvalGdp(1.0, 2.0).ok());
}

TEST(EvalGdpTest, MatchesOracleOnGrid) {
  for (double mu : {0.1, 0.5, 1.0, 3.0}) {
    for (double a : UniformAlphaGrid(101)) {
      ASSERT_OK_AND_ASSIGN(double b, EvalGdp(mu, a));
      EXPECT_NEAR(b, oracle::Gdp(mu, a), 1e-12) << mu << " " << a;
    }
  }
}

TEST(TradeoffFromCdfTest, Examples) {
  ASSERT_OK_AND_ASSIGN(double b0, TradeoffFromCdf(StandardLaplace(), 0.0, 0.4));
  EXPECT_NEAR(b0, 0.6, 1e-15);
  ASSERT_OK_AND_ASSIGN(double b1, TradeoffFromCdf(StandardLaplace(), 1.0, 0.5));
  EXPECT_NEAR(b1, 0.5 * std::exp(-1.0), 1e-15);
  for (double mu : {0.5, 1.0, 2.0}) {
    for (double a : UniformAlphaGrid(51)) {
      ASSERT_OK_AND_ASSIGN(double b, TradeoffFromCdf(StandardNormal(), mu, a));
      ASSERT_OK_AND_ASSIGN(double g, EvalGdp(mu, a));
      EXPECT_NEAR(b, g, 1e-10);
    }
  }
  EXPECT_FALSE(TradeoffFromCdf(StandardLaplace(), 1.0, 1.5).ok());
}

TEST(AffineConjugateTest, IdentityIsFixed) {
  for (double h : {0.3, 1.0, 5.0}) {
    for (const UnivariateLaw& law : {StandardLaplace(), StandardNormal()}) {
      ASSERT_OK_AND_ASSIGN(TradeoffCurve g,
                           AffineConjugate(TradeoffCurve::Identity(), law, h));
      for (double a : UniformAlphaGrid(101)) EXPECT_NEAR(g(a), 1.0 - a, 1e-12);
    }
  }
}

TEST(AffineConjugateTest, StartsAtOneMinusDelta) {
  const double delta = 0.01;
  ASSERT_OK_AND_ASSIGN(TradeoffCurve lap,
                       TradeoffCurve::FromLaw(StandardLaplace(), 1.0, {}));
  ASSERT_OK_AND_ASSIGN(
      TradeoffCurve g,
      AffineConjugate(lap, StandardLaplace(), TlapHOracle(1.0, delta)));
  EXPECT_NEAR(g(0.0), 1.0 - delta, 1e-12);
}

TEST(AffineConjugateTest, MatchesDirectTruncatedCurve) {
  for (double h : {4.465, 1.0, 0.7}) {
    for (double eps : {0.5, 1.0}) {
      ASSERT_OK_AND_ASSIGN(TradeoffCurve lap,
                           TradeoffCurve::FromLaw(StandardLaplace(), eps, {}));
      ASSERT_OK_AND_ASSIGN(TradeoffCurve conj,
                           AffineConjugate(lap, StandardLaplace(), h));
      const UnivariateLaw tlap = TruncatedLaplace(h);
      double worst = 0.0;
      for (double a : UniformAlphaGrid(1001)) {
        if (InClamped(conj, a)) continue;
        ASSERT_OK_AND_ASSIGN(double direct, TradeoffFromCdf(tlap, eps, a));
        worst = std::max(worst, std::abs(conj(a) - direct));
      }
      EXPECT_LE(worst, 1e-9) << "h=" << h << " eps=" << eps;
    }
  }
}

TEST(AffineConjugateTest, RejectsBadTruncation) {
  EXPECT_FALSE(AffineConjugate(TradeoffCurve::Identity(), StandardLaplace(), 0.0).ok());
  UnivariateLaw flat{[](double) { return 0.5; }, [](double) { return 0.0; }};
  EXPECT_FALSE(AffineConjugate(TradeoffCurve::Identity(), flat, 1.0).ok());
}

TEST(SupDistanceTest, Examples) {
  ASSERT_OK_AND_ASSIGN(TradeoffCurve g0, TradeoffCurve::Gdp(0.0));
  ASSERT_OK_AND_ASSIGN(TradeoffCurve g1, TradeoffCurve::Gdp(1.0));
  ASSERT_OK_AND_ASSIGN(double self, SupDistance(g1, g1, 101));
  EXPECT_EQ(self, 0.0);

  const double want01 = oracle::DenseMax(
      [](double a) { return std::abs(1.0 - a - oracle::Gdp(1.0, a)); }, 0.0, 1.0,
      20001);
  ASSERT_OK_AND_ASSIGN(double d01, SupDistance(g0, g1, 1001));
  EXPECT_NEAR(d01, want01, 1e-5);
  EXPECT_NEAR(d01, 0.38292, 1e-5);

  ASSERT_OK_AND_ASSIGN(TradeoffCurve f10, TradeoffCurve::FEpsDelta(1.0, 0.0));
  ASSERT_OK_AND_ASSIGN(TradeoffCurve lap,
                       TradeoffCurve::FromLaw(StandardLaplace(), 1.0, {}));
  const double e = std::numbers::e;
  const double want = oracle::DenseMax(
      [e](double a) {
        const double fed = std::max({0.0, 1.0 - e * a, (1.0 - a) / e});
        const double t = LaplaceCdf(LaplaceQuantile(1.0 - a) - 1.0);
        return std::abs(fed - t);
      },
      0.0, 1.0);
  ASSERT_OK_AND_ASSIGN(double d, SupDistance(f10, lap, 1001));
  // A 1001-point grid can miss the kink by half a step.
  EXPECT_LE(d, want + 1e-12);
  EXPECT_NEAR(d, want, 1e-3);
  EXPECT_NEAR(want, 0.07303, 1e-5);
  EXPECT_FALSE(SupDistance(g0, g1, 1).ok());
}

TEST(LevyDistanceTest, ExactQuantiles) {
  for (int n : {10, 100, 1000}) {
    std::vector<double> xs;
    for (int k = 1; k <= n; ++k) xs.push_back(oracle::PhiInverse((k - 0.5) / n));
    ASSERT_OK_AND_ASSIGN(double d, LevyDistanceEmpirical(xs, Phi));
    EXPECT_LE(d, 0.5 / n + 1e-9);
  }
}

TEST(LevyDistanceTest, SingleSample) {
  // Both Levy inequalities reduce to Phi(-t) <= t for an atom at 0.
  const double root =
      oracle::Bisect([](double t) { return Phi(-t) - t; }, 0.0, 1.0);
  std::vector<double> xs = {0.0};
  ASSERT_OK_AND_ASSIGN(double d, LevyDistanceEmpirical(xs, Phi));
  EXPECT_NEAR(d, root, 1e-6);
}

TEST(LevyDistanceTest, NormalSamples) {
  std::mt19937_64 gen(12345);
  std::normal_distribution<double> normal;
  std::vector<double> xs(10000);
  for (double& x : xs) x = normal(gen);
  std::sort(xs.begin(), xs.end());
  ASSERT_OK_AND_ASSIGN(double d, LevyDistanceEmpirical(xs, Phi));
  EXPECT_LE(d, 0.02);
  EXPECT_FALSE(LevyDistanceEmpirical({}, Phi).ok());
}

TEST(DominatesTest, Examples) {
  ASSERT_OK_AND_ASSIGN(TradeoffCurve g1, TradeoffCurve::Gdp(1.0));
  ASSERT_OK_AND_ASSIGN(bool self, Dominates(g1, g1, 1001));
  EXPECT_TRUE(self);

  for (double eps : {0.5, 1.0, 2.0}) {
    for (double delta : {0.01, 0.001}) {
      ASSERT_OK_AND_ASSIGN(TradeoffCurve fed, TradeoffCurve::FEpsDelta(eps, delta));
      const double h = TlapHOracle(eps, delta);
      ASSERT_OK_AND_ASSIGN(TradeoffCurve tlap,
                           TradeoffCurve::FromLaw(TruncatedLaplace(h), eps, {}));
      ASSERT_OK_AND_ASSIGN(bool dom, Dominates(tlap, fed, 1001));
      EXPECT_TRUE(dom) << eps << " " << delta;
    }
  }

  const double eps = 1.0;
  const double delta = 1e-5;
  const double sigma = std::sqrt(2.0 * std::log(1.25 / delta)) / eps;
  ASSERT_OK_AND_ASSIGN(TradeoffCurve old, TradeoffCurve::Gdp(1.0 / sigma));
  ASSERT_OK_AND_ASSIGN(TradeoffCurve fed, TradeoffCurve::FEpsDelta(eps, delta));
  ASSERT_OK_AND_ASSIGN(bool dom, Dominates(old, fed, 1001));
  EXPECT_TRUE(dom);
  ASSERT_OK_AND_ASSIGN(double gap, SupDistance(old, fed, 1001));
  EXPECT_GT(gap, 0.2);
  ASSERT_OK_AND_ASSIGN(bool reverse, Dominates(fed, old, 1001));
  EXPECT_FALSE(reverse);
}

TEST(TradeoffPropertyTest, ShapeOfConstructedCurves) {
  std::vector<TradeoffCurve> curves;
  for (double mu : {0.0, 0.5, 2.0}) curves.push_back(*TradeoffCurve::Gdp(mu));
  for (double eps : {0.1, 1.0, 3.0}) {
    curves.push_back(*TradeoffCurve::FEpsDelta(eps, 0.01));
    curves.push_back(*TradeoffCurve::FromLaw(StandardLaplace(), eps, {}));
    curves.push_back(*TradeoffCurve::FromLaw(TruncatedLaplace(2.0), eps, {}));
  }
  for (const TradeoffCurve& f : curves) {
    const ShapeReport r = CheckShape(f, 1001, 1e-9);
    EXPECT_TRUE(r.non_increasing && r.convex && r.in_unit_interval)
        << f.descriptor().dump() << " worst=" << r.worst_violation;
    for (double a : UniformAlphaGrid(201)) EXPECT_LE(f(a), 1.0 - a + 1e-12);
  }
}

TEST(TradeoffPropertyTest, SymmetricCurvesAreInvolutions) {
  std::vector<TradeoffCurve> curves = {
      *TradeoffCurve::Gdp(1.0),
      *TradeoffCurve::FromLaw(StandardNormal(), 0.7, {}),
      *TradeoffCurve::FromLaw(StandardLaplace(), 0.8, {})};
  for (const TradeoffCurve& f : curves) {
    for (double a : UniformAlphaGrid(201)) {
      if (a < 1e-3 || a > 1.0 - 1e-3) continue;
      EXPECT_NEAR(f(f(a)), a, 1e-8) << f.descriptor().dump() << " " << a;
    }
  }
}

TEST(TradeoffPropertyTest, ReciprocalSegments) {
  for (double eps : {0.5, 1.0, 2.0}) {
    ASSERT_OK_AND_ASSIGN(TradeoffCurve lap,
                         TradeoffCurve::FromLaw(StandardLaplace(), eps, {}));
    const double target = std::exp(-eps) / 4.0;
    const double lo = 0.5 * std::exp(-eps);
    for (int i = 0; i <= 200; ++i) {
      const double a = lo + (0.5 - lo) * i / 200.0;
      EXPECT_NEAR(a * lap(a), target, 1e-10);
    }
    for (double delta : {0.01, 0.001}) {
      const double h = TlapHOracle(eps, delta);
      ASSERT_OK_AND_ASSIGN(TradeoffCurve tlap,
                           TradeoffCurve::FromLaw(TruncatedLaplace(h), eps, {}));
      // Map from the truncated test back to the untruncated one.
      const double lower = LaplaceCdf(-h);
      const double mass = LaplaceCdf(h) - lower;
      auto back = [=](double x) { return mass * x + lower; };
      const double tlo = (0.5 - delta) * std::exp(-eps);
      for (int i = 0; i <= 200; ++i) {
        const double a = tlo + (0.5 - tlo) * i / 200.0;
        EXPECT_NEAR(back(a) * back(tlap(a)), target, 1e-9) << eps << " " << delta;
      }
    }
  }
}

TEST(TradeoffPropertyTest, MonotoneInShift) {
  const std::vector<double> shifts = {0.25, 0.5, 1.0};
  for (const UnivariateLaw& law :
       {StandardLaplace(), StandardNormal(), TruncatedLaplace(3.0)}) {
    for (std::size_t i = 0; i + 1 < shifts.size(); ++i) {
      ASSERT_OK_AND_ASSIGN(TradeoffCurve f1, TradeoffCurve::FromLaw(law, shifts[i], {}));
      ASSERT_OK_AND_ASSIGN(TradeoffCurve f2,
                           TradeoffCurve::FromLaw(law, shifts[i + 1], {}));
      for (double a : UniformAlphaGrid(201)) EXPECT_GE(f1(a), f2(a) - 1e-10);
    }
  }
}

TEST(TradeoffPropertyTest, DominationIsAPartialOrder) {
  ASSERT_OK_AND_ASSIGN(TradeoffCurve g05, TradeoffCurve::Gdp(0.5));
  ASSERT_OK_AND_ASSIGN(TradeoffCurve g1, TradeoffCurve::Gdp(1.0));
  ASSERT_OK_AND_ASSIGN(TradeoffCurve g2, TradeoffCurve::Gdp(2.0));
  EXPECT_TRUE(*Dominates(g05, g1, 501));
  EXPECT_TRUE(*Dominates(g1, g2, 501));
  EXPECT_TRUE(*Dominates(g05, g2, 501));
  EXPECT_FALSE(*Dominates(g2, g05, 501));
}

TEST(PiecewiseLinearTest, InterpolatesAndValidates) {
  ASSERT_OK_AND_ASSIGN(TradeoffCurve f, TradeoffCurve::PiecewiseLinear({1.0, 0.25, 0.0}));
  EXPECT_DOUBLE_EQ(f(0.0), 1.0);
  EXPECT_DOUBLE_EQ(f(0.25), 0.625);
  EXPECT_DOUBLE_EQ(f(0.5), 0.25);
  EXPECT_DOUBLE_EQ(f(1.0), 0.0);
  EXPECT_FALSE(f.At(1.5).ok());
  EXPECT_FALSE(TradeoffCurve::PiecewiseLinear({1.0}).ok());
}

TEST(SerializationTest, CsvRoundTrip) {
  ASSERT_OK_AND_ASSIGN(TradeoffCurve g, TradeoffCurve::Gdp(1.3));
  const std::string csv = CurveToCsv(g, 101);
  ASSERT_OK_AND_ASSIGN(auto rows, ParseCurveCsv(csv));
  ASSERT_EQ(rows.size(), 101u);
  for (const auto& [a, b] : rows) EXPECT_NEAR(b, g(a), 1e-12);
  EXPECT_FALSE(ParseCurveCsv("alpha,beta\n0.5,abc\n").ok());
}

TEST(SerializationTest, JsonRoundTrip) {
  std::vector<TradeoffCurve> curves = {*TradeoffCurve::Gdp(0.7),
                                       *TradeoffCurve::FEpsDelta(1.0, 0.05),
                                       *TradeoffCurve::PiecewiseLinear({1.0, 0.3, 0.0})};
  for (const TradeoffCurve& f : curves) {
    ASSERT_OK_AND_ASSIGN(TradeoffCurve g, CurveFromJson(f.descriptor()));
    for (double a : UniformAlphaGrid(101)) EXPECT_NEAR(f(a), g(a), 1e-12);
  }
  EXPECT_FALSE(CurveFromJson({{"kind", "nope"}}).ok());
}

}  // namespace
}  // namespace dpclt
