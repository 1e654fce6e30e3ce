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

#ifndef DPCLT_STATS_H_
#define DPCLT_STATS_H_

#include <functional>
#include <span>
#include <vector>

namespace dpclt {

double Mean(std::span<const double> xs);
// Unbiased sample variance; 0 for fewer than two values.
double SampleVariance(std::span<const double> xs);
// Linear-interpolation quantile (R type 7) of an unsorted sample.
double SampleQuantile(std::vector<double> xs, double q);
double Median(std::vector<double> xs);

// sup_x |F_a(x) - F_b(x)| between two empirical distributions.
double KsTwoSample(std::vector<double> a, std::vector<double> b);

// sup_x |F_n(x) - F(x)| for a sample against a continuous CDF.
double KsOneSample(std::vector<double> xs,
                   const std::function<double(double)>& cdf);

// Right-continuous step CDF of a sample with a left-continuous quantile.
class EmpiricalCdf {
 public:
  explicit EmpiricalCdf(std::vector<double> samples);

  // #{x_i <= x} / N.
  double operator()(double x) const;
  // Smallest sample x_(k) with k/N >= u; u is clamped to [1/N, 1].
  double Quantile(double u) const;

  std::size_t size() const { return sorted_.size(); }
  const std::vector<double>& sorted() const { return sorted_; }

 private:
  std::vector<double> sorted_;
};

}  // namespace dpclt

#endif  // DPCLT_STATS_H_
