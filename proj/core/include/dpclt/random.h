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

// Deterministic random streams.
//
// Every Monte Carlo routine in the library is a pure function of its
// parameters and a 64-bit seed. Work is split into fixed-size blocks of
// kRowsPerBlock rows; block b draws from the substream SubstreamSeed(seed, b).
// Because the block size is part of the contract and not a tuning knob, the
// output does not depend on how many threads process the blocks.

#ifndef DPCLT_RANDOM_H_
#define DPCLT_RANDOM_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>

namespace dpclt {

inline constexpr std::size_t kRowsPerBlock = 1024;

// One step of the SplitMix64 generator; advances `state`.
std::uint64_t SplitMix64(std::uint64_t& state);

// Seed of substream `index` derived from `seed`:
//   s = seed + 0x9e3779b97f4a7c15 * (index + 1); return SplitMix64(s) of that.
std::uint64_t SubstreamSeed(std::uint64_t seed, std::uint64_t index);

class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t Bits() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double Uniform();
  // Uniform on the open interval (0, 1).
  double UniformOpen();
  // Standard normal (Box-Muller; the second variate is cached).
  double Normal();
  // Exp(1).
  double Exponential();
  // +1 or -1 with equal probability.
  double Rademacher();
  // Gamma(shape, 1). Marsaglia-Tsang for shape >= 1; for shape < 1 uses
  // Gamma(shape + 1) * U^{1/shape}.
  double Gamma(double shape);
  // log of a Gamma(shape, 1) variate; does not underflow for small shapes.
  double LogGamma(double shape);

 private:
  std::mt19937_64 engine_;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

// Calls fn(block_index, begin_row, end_row) for every block covering
// [0, count). Blocks are distributed over `threads` workers (0 or 1 runs
// inline). fn must only touch rows in its own range.
void ForEachBlock(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t, std::size_t,
                                           std::size_t)>& fn);

}  // namespace dpclt

#endif  // DPCLT_RANDOM_H_
