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
#include <numbers>
#include <vector>

#include "dpclt/lp_sampler.h"
#include "gtest/gtest.h"
#include "oracles.h"
#include "test_util.h"

namespace dpclt {
namespace {

constexpr int kTableN[] = {2, 10, 30, 100};
constexpr double kShapes[] = {1.0, 1.5, 2.0, 3.0};

NormPowerDensity Density(int n, double p, double alpha, double c = 1.0) {
  NormPowerDensity d;
  d.n = n;
  d.p = p;
  d.alpha = alpha;
  d.c = c;
  return d;
}

TEST(GammaMomentTest, Examples) {
  EXPECT_NEAR(*GammaMoment(2.0, 1.0), 2.0, 1e-14);
  EXPECT_NEAR(*GammaMoment(0.5, 2.0), 0.75, 1e-14);
  EXPECT_NEAR(*GammaMoment(10.0, 0.0), 1.0, 1e-14);
  EXPECT_NEAR(*GammaMoment(3.3, 1.7), std::tgamma(5.0) / std::tgamma(3.3), 1e-12);
  EXPECT_FALSE(GammaMoment(0.0, 1.0).ok());
  EXPECT_FALSE(GammaMoment(1.0, -1.0).ok());
}

TEST(LpBallVolumeTest, Examples) {
  EXPECT_NEAR(*LpBallVolume(2, 2.0), std::numbers::pi, 1e-13);
  EXPECT_NEAR(*LpBallVolume(2, 1.0), 2.0, 1e-13);
  EXPECT_NEAR(*LpBallVolume(3, 2.0), 4.0 * std::numbers::pi / 3.0, 1e-13);
  ASSERT_OK_AND_ASSIGN(double log_vol, LogLpBallVolume(100000, 2.0));
  EXPECT_TRUE(std::isfinite(log_vol));
  EXPECT_LT(log_vol, -1e5);
}

TEST(NormalizerTest, Examples) {
  EXPECT_NEAR(*Normalizer(1, 1.0, 1.0, 1.0), 2.0, 1e-14);
  EXPECT_NEAR(*Normalizer(1, 2.0, 2.0, 1.0), std::sqrt(std::numbers::pi), 1e-14);
  EXPECT_NEAR(*Normalizer(2, 1.0, 2.0, 1.0), 2.0, 1e-13);
}

TEST(NormalizerTest, MatchesOneDimensionalQuadrature) {
  for (double p : {1.0, 2.0, 3.5}) {
    for (double alpha : {1.0, 1.7, 4.0}) {
      for (double c : {0.5, 2.0}) {
        const double quad = 2.0 * oracle::Simpson(
                                      [=](double x) {
                                        return std::exp(-c * std::pow(x, alpha));
                                      },
                                      0.0, 60.0, 400000);
        EXPECT_NEAR(*Normalizer(1, p, alpha, c), quad, 1e-7 * quad);
      }
    }
  }
}

TEST(NormalizerTest, OverflowIsReported) {
  ASSERT_OK_AND_ASSIGN(double log_z, LogNormalizer(5000, 2.0, 1.0, 1.0));
  EXPECT_GT(log_z, 1000.0);
  EXPECT_EQ(Normalizer(5000, 2.0, 1.0, 1.0).status().code(),
            absl::StatusCode::kOutOfRange);
}

TEST(TableTwoTest, ExplicitRows) {
  for (int n : kTableN) {
    const double nn = n;
    EXPECT_NEAR(*SecondMomentExact(n, 1.0, 1.0), 2.0 * nn, 1e-9);
    EXPECT_NEAR(*FisherInfoExact(n, 1.0, 1.0), 1.0, 1e-9);
    EXPECT_NEAR(*SecondMomentExact(n, 2.0, 1.0), nn * (nn + 1.0), 1e-9);
    EXPECT_NEAR(*FisherInfoExact(n, 2.0, 1.0), 1.0 / nn, 1e-9);
    EXPECT_NEAR(*SecondMomentExact(n, 2.0, 2.0), nn / 2.0, 1e-9);
    EXPECT_NEAR(*FisherInfoExact(n, 2.0, 2.0), 2.0, 1e-9);
  }
}

TEST(TableTwoTest, EqualExponentsReduceToCoordinates) {
  for (int n : {1, 3, 20}) {
    for (double p : {1.0, 1.5, std::numbers::e, 5.0}) {
      const double g1 = std::tgamma(1.0 / p);
      EXPECT_NEAR(*SecondMomentExact(n, p, p), n * std::tgamma(3.0 / p) / g1,
                  1e-11 * n);
      EXPECT_NEAR(*FisherInfoExact(n, p, p), p * p * std::tgamma(2.0 - 1.0 / p) / g1,
                  1e-11);
    }
  }
}

TEST(TableTwoTest, RejectsBadParameters) {
  EXPECT_FALSE(SecondMomentExact(0, 2.0, 2.0).ok());
  EXPECT_FALSE(FisherInfoExact(3, 0.5, 2.0).ok());
  EXPECT_FALSE(FisherInfoExact(3, 2.0, 0.9).ok());
}

TEST(UncertaintyTest, ProductBoundsDimension) {
  for (int n : kTableN) {
    for (double p : kShapes) {
      for (double alpha : kShapes) {
        ASSERT_OK_AND_ASSIGN(UncertaintyProduct u, UncertaintyProducts(n, p, alpha, 0, 1));
        EXPECT_GE(u.l2_product, n * (1.0 - 1e-12)) << n << " " << p << " " << alpha;
        if (p == 2.0 && alpha == 2.0) EXPECT_NEAR(u.l2_product, n, 1e-9);
        if (!(p == 2.0 && alpha == 2.0)) EXPECT_GT(u.l2_product, n * (1.0 + 1e-6));
      }
    }
  }
  ASSERT_OK_AND_ASSIGN(UncertaintyProduct lap, UncertaintyProducts(30, 1.0, 1.0, 2000, 3));
  EXPECT_NEAR(lap.l2_product, 60.0, 1e-9);
  EXPECT_GT(lap.linf_product_estimate, 0.0);
  EXPECT_GT(lap.linf_std_error, 0.0);
}

TEST(UncertaintyTest, TraceBound) {
  for (int n : kTableN) {
    for (double p : kShapes) {
      const double prod = *SecondMomentExact(n, p, 1.5) * (n * *FisherInfoExact(n, p, 1.5));
      EXPECT_GE(prod, double(n) * n * (1.0 - 1e-12));
    }
  }
}

TEST(AsymptoticsTest, Examples) {
  ASSERT_OK_AND_ASSIGN(MomentAsymptotics g, Asymptotics(30, 2.0, 2.0));
  EXPECT_EQ(g.fisher, 2.0);
  for (int n : kTableN) {
    ASSERT_OK_AND_ASSIGN(MomentAsymptotics a, Asymptotics(n, 1.0, 1.0));
    EXPECT_NEAR(a.second_moment, 2.0 * n, 1e-9 * n);
  }
  ASSERT_OK_AND_ASSIGN(MomentAsymptotics pe,
                       Asymptotics(300, std::numbers::pi, std::numbers::e));
  const double ratio = *FisherInfoExact(300, std::numbers::pi, std::numbers::e) / pe.fisher;
  EXPECT_GE(ratio, 0.9);
  EXPECT_LE(ratio, 1.1);
}

TEST(AsymptoticsTest, ExactOverAsymptoticTendsToOne) {
  for (auto [p, alpha] : std::vector<std::pair<double, double>>{
           {1.0, 2.0}, {3.0, 1.5}, {std::numbers::pi, std::numbers::e}}) {
    for (int n : {30, 100, 300}) {
      ASSERT_OK_AND_ASSIGN(MomentAsymptotics a, Asymptotics(n, p, alpha));
      const double rs = *SecondMomentExact(n, p, alpha) / a.second_moment;
      const double rf = *FisherInfoExact(n, p, alpha) / a.fisher;
      EXPECT_GE(rs, 0.8);
      EXPECT_LE(rs, 1.25);
      EXPECT_GE(rf, 0.8);
      EXPECT_LE(rf, 1.25);
    }
  }
}

TEST(CCoefficientTest, Examples) {
  EXPECT_NEAR(*CCoefficient(1.0, 1.0), 1.0, 1e-14);
  EXPECT_NEAR(*CCoefficient(2.0, 2.0), 0.5, 1e-14);
  // c_{2,2} makes the Fisher information the identity.
  EXPECT_NEAR(0.5 * *FisherInfoExact(7, 2.0, 2.0), 1.0, 1e-12);
  ASSERT_OK_AND_ASSIGN(double c, CCoefficient(std::numbers::pi, std::numbers::e));
  EXPECT_GT(c, 0.0);
  EXPECT_TRUE(std::isfinite(c));
  const int n = 30;
  const double alpha = std::numbers::e;
  const double scaled =
      std::pow(std::pow(n, 1.0 - alpha / std::numbers::pi) * c, 2.0 / alpha) *
      *FisherInfoExact(n, std::numbers::pi, alpha);
  EXPECT_NEAR(scaled, 1.0, 0.1);
}

TEST(FisherMcTest, Examples) {
  ASSERT_OK_AND_ASSIGN(McEstimate g, FisherInfoMc(Density(5, 2.0, 2.0), 100000, 1));
  EXPECT_NEAR(g.value, 2.0, 0.06);
  ASSERT_OK_AND_ASSIGN(McEstimate l, FisherInfoMc(Density(5, 1.0, 1.0), 100000, 2));
  EXPECT_DOUBLE_EQ(l.value, 1.0);
  EXPECT_EQ(l.std_error, 0.0);
  ASSERT_OK_AND_ASSIGN(McEstimate e, FisherInfoMc(Density(10, 3.0, 2.0), 100000, 3));
  ASSERT_OK_AND_ASSIGN(double exact, FisherInfoExact(10, 3.0, 2.0));
  EXPECT_NEAR(e.value, exact, 0.03 * exact);
}

TEST(FisherMcTest, WithinThreeStandardErrors) {
  for (auto [p, alpha] : std::vector<std::pair<double, double>>{
           {1.5, 2.0}, {2.0, 1.0}, {3.0, 3.0}, {4.0, 1.5}}) {
    ASSERT_OK_AND_ASSIGN(McEstimate mc, FisherInfoMc(Density(6, p, alpha), 40000, 7));
    ASSERT_OK_AND_ASSIGN(double exact, FisherInfoExact(6, p, alpha));
    EXPECT_LE(std::abs(mc.value - exact), 3.0 * mc.std_error + 1e-12 * exact)
        << p << " " << alpha;
  }
}

TEST(FisherMcTest, CoefficientScaling) {
  const double c = 3.0;
  const double alpha = 1.5;
  ASSERT_OK_AND_ASSIGN(McEstimate mc, FisherInfoMc(Density(4, 2.5, alpha, c), 40000, 8));
  ASSERT_OK_AND_ASSIGN(double exact, FisherInfoExact(4, 2.5, alpha));
  const double want = std::pow(c, 2.0 / alpha) * exact;
  EXPECT_LE(std::abs(mc.value - want), 3.0 * mc.std_error);
}

TEST(IsotropicConstantsTest, BallsMatchDefinition) {
  ASSERT_OK_AND_ASSIGN(IsotropicConstants seg, ComputeIsotropicConstants(1, 2.0, 2.0));
  EXPECT_NEAR(seg.l_ball * seg.l_ball, 1.0 / 12.0, 1e-13);
  ASSERT_OK_AND_ASSIGN(IsotropicConstants disk, ComputeIsotropicConstants(2, 2.0, 2.0));
  EXPECT_NEAR(disk.l_ball * disk.l_ball, 1.0 / (4.0 * std::numbers::pi), 1e-13);
  // Square [-1, 1]^2 via 2-D quadrature of x^2 over the unit l_inf ball.
  ASSERT_OK_AND_ASSIGN(IsotropicConstants sq, ComputeIsotropicConstants(2, 64.0, 2.0));
  EXPECT_NEAR(sq.l_ball * sq.l_ball, 1.0 / 12.0, 1e-2);
}

TEST(IsotropicConstantsTest, DensityMatchesDefinition) {
  for (int n : {1, 2, 5, 20}) {
    for (auto [p, alpha] : std::vector<std::pair<double, double>>{
             {2.0, 2.0}, {1.0, 1.0}, {3.0, 1.5}, {1.5, 4.0}}) {
      ASSERT_OK_AND_ASSIGN(IsotropicConstants iso, ComputeIsotropicConstants(n, p, alpha));
      const double z = *Normalizer(n, p, alpha, 1.0);
      const double var = *SecondMomentExact(n, p, alpha) / n;
      const double want_sq = std::pow(z, -2.0 / n) * var;
      EXPECT_NEAR(iso.l_density * iso.l_density, want_sq, 1e-10 * want_sq)
          << n << " " << p << " " << alpha;
    }
  }
  ASSERT_OK_AND_ASSIGN(IsotropicConstants g, ComputeIsotropicConstants(1, 2.0, 2.0));
  EXPECT_NEAR(g.l_density * g.l_density, 1.0 / (2.0 * std::numbers::pi), 1e-13);
}

TEST(IsotropicConstantsTest, RelateFactorAtEqualExponents) {
  for (int n : {2, 10, 40}) {
    const double p = 3.0;
    ASSERT_OK_AND_ASSIGN(IsotropicConstants iso, ComputeIsotropicConstants(n, p, p));
    const double factor = std::sqrt(std::tgamma(n / p + 1.0 + 2.0 / p)) /
                          std::pow(std::tgamma(n / p + 1.0), 0.5 + 1.0 / n);
    EXPECT_NEAR(iso.l_density, factor * iso.l_ball, 1e-10 * iso.l_density);
  }
}

TEST(GdpScaleTest, Examples) {
  for (int n : kTableN) {
    EXPECT_NEAR(*GdpScale(n, 2.0, 2.0, 1.0, 1.0), std::numbers::sqrt2, 1e-12);
    EXPECT_NEAR(*GdpScale(n, 1.0, 1.0, 1.0, 2.0), 0.5, 1e-12);
  }
  ASSERT_OK_AND_ASSIGN(double t,
                       GdpScale(30, std::numbers::pi, std::numbers::e, 0.5772, 1.0));
  EXPECT_GT(t, 0.0);
  EXPECT_TRUE(std::isfinite(t));
  EXPECT_FALSE(GdpScale(3, 2.0, 2.0, 1.0, 0.0).ok());
}

TEST(SummaryTest, ConsistentWithParts) {
  ASSERT_OK_AND_ASSIGN(FisherSummary s, Summarize(10, 2.0, 1.0));
  EXPECT_NEAR(s.fisher_norm, 0.1, 1e-12);
  EXPECT_NEAR(s.second_moment_l2, 110.0, 1e-9);
  EXPECT_NEAR(s.uncertainty_l2, 11.0, 1e-9);
  const nlohmann::json j = s.ToJson();
  EXPECT_EQ(j.at("n"), 10);
  EXPECT_TRUE(j.contains("fisher_asymp"));
}

TEST(ThinShellTest, SpreadShrinksWithDimension) {
  double previous = INFINITY;
  for (int n : {10, 30, 100}) {
    ASSERT_OK_AND_ASSIGN(ThinShell s, ThinShellDiagnostic(n, 3.0, 1.5, 4000, 5));
    EXPECT_LE(s.std_dev, previous) << n;
    previous = s.std_dev;
  }
}

}  // namespace
}  // namespace dpclt
