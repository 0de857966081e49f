// Copyright 2026 The DGM Authors
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

#include "dgm/rng.h"

#include <cmath>
#include <numeric>

#include "dgm/error.h"

namespace dgm {
namespace {

uint64_t SplitMix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

uint64_t DeriveSeed(uint64_t master_seed, uint64_t stream_id) {
  return SplitMix64(SplitMix64(master_seed) ^ SplitMix64(~stream_id));
}

SeededRng::SeededRng(uint64_t master_seed, uint64_t stream_id)
    : master_seed_(master_seed),
      stream_id_(stream_id),
      engine_(DeriveSeed(master_seed, stream_id)) {}

SeededRng SeededRng::Child(uint64_t stream_id) const {
  return SeededRng(DeriveSeed(master_seed_, stream_id_), stream_id);
}

double SeededRng::Uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

size_t SeededRng::UniformIndex(size_t n) {
  if (n == 0) throw Error("UniformIndex: empty range");
  const uint64_t bound = static_cast<uint64_t>(n);
  // Rejection sampling removes modulo bias.
  const uint64_t limit = max() - max() % bound;
  uint64_t x = engine_();
  while (x >= limit) x = engine_();
  return static_cast<size_t>(x % bound);
}

double SeededRng::Normal() {
  // Box-Muller; 1 - U keeps the log argument in (0, 1].
  const double u1 = 1.0 - Uniform();
  const double u2 = Uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

double SeededRng::Laplace(double scale) {
  const double u = Uniform() - 0.5;
  const double magnitude = -scale * std::log(1.0 - 2.0 * std::abs(u));
  return u < 0 ? -magnitude : magnitude;
}

size_t SeededRng::Categorical(std::span<const double> weights) {
  if (weights.empty()) throw Error("Categorical: no weights");
  double total = 0.0;
  for (double w : weights) total += w;
  if (!(total > 0.0)) return UniformIndex(weights.size());
  const double target = Uniform() * total;
  double cumulative = 0.0;
  size_t last_positive = 0;
  for (size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    cumulative += weights[i];
    last_positive = i;
    if (target < cumulative) return i;
  }
  return last_positive;
}

std::vector<size_t> SeededRng::Permutation(size_t n) {
  std::vector<size_t> perm(n);
  std::iota(perm.begin(), perm.end(), size_t{0});
  Shuffle(perm);
  return perm;
}

}  // namespace dgm
