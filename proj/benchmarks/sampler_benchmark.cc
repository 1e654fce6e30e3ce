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
#include <cstdint>
#include <vector>

#include "benchmark/benchmark.h"
#include "dpclt/lp_sampler.h"
#include "dpclt/noise1d.h"

namespace dpclt {
namespace {

NormPowerDensity Density(int n, double p, double alpha) {
  NormPowerDensity d;
  d.n = n;
  d.p = p;
  d.alpha = alpha;
  return d;
}

void BM_SampleNormPower(benchmark::State& state) {
  const NormPowerDensity d = Density(static_cast<int>(state.range(0)), 3.0, 2.0);
  std::uint64_t seed = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(SampleNormPower(d, 1024, seed++));
  }
  state.SetItemsProcessed(state.iterations() * 1024);
}
BENCHMARK(BM_SampleNormPower)->Arg(4)->Arg(30)->Arg(300);

void BM_SampleIndependent(benchmark::State& state) {
  std::uint64_t seed = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(SampleIndependent(2.5, static_cast<int>(state.range(0)), 1024,
                                               seed++));
  }
  state.SetItemsProcessed(state.iterations() * 1024);
}
BENCHMARK(BM_SampleIndependent)->Arg(4)->Arg(30)->Arg(300);

void BM_SampleThreads(benchmark::State& state) {
  const NormPowerDensity d = Density(30, 2.0, 2.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        SampleNormPower(d, 1 << 16, 7, static_cast<unsigned>(state.range(0))));
  }
  state.SetItemsProcessed(state.iterations() * (1 << 16));
}
BENCHMARK(BM_SampleThreads)->Arg(1)->Arg(4)->UseRealTime();

void BM_Sample1d(benchmark::State& state) {
  const NoiseModel model = *NoiseModel::TruncatedLaplace(1.0, 4.46492);
  std::uint64_t seed = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(Sample(model, 4096, seed++));
  }
  state.SetItemsProcessed(state.iterations() * 4096);
}
BENCHMARK(BM_Sample1d);

}  // namespace
}  // namespace dpclt

BENCHMARK_MAIN();
