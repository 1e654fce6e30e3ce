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
#include <cstddef>
#include <vector>

#include "benchmark/benchmark.h"
#include "dpclt/empirical_roc.h"
#include "dpclt/lp_sampler.h"
#include "dpclt/noise1d.h"

namespace dpclt {
namespace {

void BM_BetasFromLlr(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const std::vector<double> h0 = Sample(*NoiseModel::Gaussian(1.0), n, 1);
  std::vector<double> h1 = Sample(*NoiseModel::Gaussian(1.0), n, 2);
  for (double& x : h1) x += 1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(BetasFromLlr(h0, h1, TieVariant::kAppendix));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_BetasFromLlr)->RangeMultiplier(10)->Range(100, 100000)->Complexity();

void BM_EmpiricalTradeoff(benchmark::State& state) {
  NormPowerDensity d;
  d.n = 30;
  d.p = 3.0;
  d.alpha = 2.0;
  const std::vector<double> v = ShiftDirection(d.n, DirectionMode::kRandomUnit, 3);
  const SampleMatrix rows = *SampleNormPower(d, static_cast<std::size_t>(state.range(0)), 5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(EmpiricalTradeoffFromSamples(d, v, rows));
  }
}
BENCHMARK(BM_EmpiricalTradeoff)->Arg(1000)->Arg(10000);

void BM_CltDeviation(benchmark::State& state) {
  ExperimentConfig config;
  config.sample_size = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(CltDeviation(config));
  }
}
BENCHMARK(BM_CltDeviation)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace dpclt

BENCHMARK_MAIN();
