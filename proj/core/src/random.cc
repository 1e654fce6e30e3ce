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

#include "dpclt/random.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>
#include <vector>

namespace dpclt {

std::uint64_t SplitMix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t SubstreamSeed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t state = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  return SplitMix64(state);
}

Rng::Rng(std::uint64_t seed) {
  std::uint64_t state = seed;
  std::seed_seq seq{static_cast<std::uint32_t>(SplitMix64(state)),
                    static_cast<std::uint32_t>(SplitMix64(state)),
                    static_cast<std::uint32_t>(SplitMix64(state)),
                    static_cast<std::uint32_t>(SplitMix64(state))};
  engine_.seed(seq);
}

double Rng::Uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::UniformOpen() {
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::Normal() {
  if (has_cached_normal_) {
    has_cached_normal_ = false;
    return cached_normal_;
  }
  const double radius = std::sqrt(-2.0 * std::log(UniformOpen()));
  const double angle = 2.0 * std::numbers::pi * Uniform();
  cached_normal_ = radius * std::sin(angle);
  has_cached_normal_ = true;
  return radius * std::cos(angle);
}

double Rng::Exponential() { return -std::log(UniformOpen()); }

double Rng::Rademacher() { return (engine_() >> 63) ? 1.0 : -1.0; }

double Rng::Gamma(double shape) {
  if (shape < 1.0) return std::exp(LogGamma(shape));
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  while (true) {
    double x;
    double v;
    do {
      x = Normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = UniformOpen();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double Rng::LogGamma(double shape) {
  if (shape >= 1.0) return std::log(Gamma(shape));
  const double boosted = Gamma(shape + 1.0);
  return std::log(boosted) + std::log(UniformOpen()) / shape;
}

void ForEachBlock(
    std::size_t count, unsigned threads,
    const std::function<void(std::size_t, std::size_t, std::size_t)>& fn) {
  const std::size_t blocks = (count + kRowsPerBlock - 1) / kRowsPerBlock;
  auto run_block = [&](std::size_t b) {
    const std::size_t begin = b * kRowsPerBlock;
    fn(b, begin, std::min(count, begin + kRowsPerBlock));
  };
  if (threads <= 1 || blocks <= 1) {
    for (std::size_t b = 0; b < blocks; ++b) run_block(b);
    return;
  }
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(threads, blocks));
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t b = w; b < blocks; b += workers) run_block(b);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace dpclt
