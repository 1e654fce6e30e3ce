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

#ifndef DPCLT_FISHER_MOMENTS_H_
#define DPCLT_FISHER_MOMENTS_H_

#include <cstddef>
#include <cstdint>

#include <nlohmann/json.hpp>

#include "absl/status/statusor.h"
#include "dpclt/lp_sampler.h"

namespace dpclt {

// m-th moment of Gamma(k, 1): Gamma(m + k) / Gamma(k).
absl::StatusOr<double> GammaMoment(double k, double m);

// log vol(K_p) = n log 2 + n log Gamma(1/p + 1) - log Gamma(n/p + 1).
absl::StatusOr<double> LogLpBallVolume(int n, double p);
// vol(K_p); OutOfRange when the value leaves the double range (use the log).
absl::StatusOr<double> LpBallVolume(int n, double p);

// log of Z = integral of exp(-c ||x||_p^alpha).
absl::StatusOr<double> LogNormalizer(int n, double p, double alpha, double c);
absl::StatusOr<double> Normalizer(int n, double p, double alpha, double c);

// E ||X||_2^2 for coefficient c = 1.
absl::StatusOr<double> SecondMomentExact(int n, double p, double alpha);

// The scalar lambda with I = lambda * Identity, for coefficient c = 1.
absl::StatusOr<double> FisherInfoExact(int n, double p, double alpha);

struct MomentAsymptotics {
  double second_moment = 0.0;
  double fisher = 0.0;
  // C_p in E||X||_2^2 * ||I||_2 ~ C_p n.
  double product_slope = 0.0;
};
absl::StatusOr<MomentAsymptotics> Asymptotics(int n, double p, double alpha);

// c_{p,alpha}: the coefficient n^{1 - alpha/p} c_{p,alpha} normalizes the
// Fisher information to the identity as n grows.
absl::StatusOr<double> CCoefficient(double p, double alpha);

struct McEstimate {
  double value = 0.0;
  double std_error = 0.0;
};

// (1 / n) E ||grad phi(X)||_2^2 by Monte Carlo, honoring d.c.
absl::StatusOr<McEstimate> FisherInfoMc(const NormPowerDensity& d,
                                        std::size_t count, std::uint64_t seed,
                                        unsigned threads = 1);

struct UncertaintyProduct {
  double l2_product = 0.0;
  double linf_product_estimate = 0.0;
  double linf_std_error = 0.0;
};

// E||X||_2^2 * ||I||_2 exactly and E||X||_inf^2 * ||I||_2 by Monte Carlo.
absl::StatusOr<UncertaintyProduct> UncertaintyProducts(int n, double p,
                                                       double alpha,
                                                       std::size_t count,
                                                       std::uint64_t seed,
                                                       unsigned threads = 1);

struct IsotropicConstants {
  double l_ball = 0.0;
  double l_density = 0.0;
};
absl::StatusOr<IsotropicConstants> ComputeIsotropicConstants(int n, double p,
                                                             double alpha);

// t = mu^{-1} sqrt(c^{2/alpha} * FisherInfoExact(n, p, alpha)).
absl::StatusOr<double> GdpScale(int n, double p, double alpha, double c,
                                double mu);

struct FisherSummary {
  int n = 0;
  double p = 0.0;
  double alpha = 0.0;
  double fisher_norm = 0.0;
  double second_moment_l2 = 0.0;
  double fisher_asymp = 0.0;
  double second_moment_asymp = 0.0;
  double uncertainty_l2 = 0.0;
  double isotropic_ball = 0.0;
  double isotropic_density = 0.0;

  nlohmann::json ToJson() const;
};
absl::StatusOr<FisherSummary> Summarize(int n, double p, double alpha);

struct ThinShell {
  double median = 0.0;
  double std_dev = 0.0;
};

// ||grad phi(X)||_2 / sqrt(n) for the density with coefficient
// n^{1 - alpha/p} c_{p,alpha}.
absl::StatusOr<ThinShell> ThinShellDiagnostic(int n, double p, double alpha,
                                              std::size_t count,
                                              std::uint64_t seed,
                                              unsigned threads = 1);

}  // namespace dpclt

#endif  // DPCLT_FISHER_MOMENTS_H_
