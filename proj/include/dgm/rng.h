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

#ifndef DGM_RNG_H_
#define DGM_RNG_H_

#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <utility>
#include <vector>

namespace dgm {

// Mixes a master seed and a stream id into a 64-bit engine seed.
uint64_t DeriveSeed(uint64_t master_seed, uint64_t stream_id);

// Deterministic random source keyed by (master_seed, stream_id).
//
// All distributions are implemented here on top of the raw 64-bit engine so
// that draw sequences do not depend on the standard library's distribution
// classes. Instances are single-owner; concurrent work should derive child
// streams with Child().
class SeededRng {
 public:
  using result_type = uint64_t;

  explicit SeededRng(uint64_t master_seed, uint64_t stream_id = 0);

  uint64_t master_seed() const { return master_seed_; }
  uint64_t stream_id() const { return stream_id_; }

  // A fresh stream derived from this one's identity, not its state.
  SeededRng Child(uint64_t stream_id) const;

  uint64_t operator()() { return engine_(); }
  static constexpr uint64_t min() { return 0; }
  static constexpr uint64_t max() {
    return std::numeric_limits<uint64_t>::max();
  }

  // Uniform on [0, 1) with 53 bits of resolution.
  double Uniform();
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }
  // Uniform integer on [0, n). n must be positive.
  size_t UniformIndex(size_t n);
  double Normal();
  // Laplace(0, scale).
  double Laplace(double scale);
  // Index drawn with probability proportional to weights.
  size_t Categorical(std::span<const double> weights);

  template <typename T>
  void Shuffle(std::span<T> values) {
    for (size_t i = values.size(); i > 1; --i) {
      const size_t j = UniformIndex(i);
      std::swap(values[i - 1], values[j]);
    }
  }
  template <typename T>
  void Shuffle(std::vector<T>& values) {
    Shuffle(std::span<T>(values));
  }

  // Uniformly random permutation of 0..n-1.
  std::vector<size_t> Permutation(size_t n);

 private:
  uint64_t master_seed_;
  uint64_t stream_id_;
  std::mt19937_64 engine_;
};

}  // namespace dgm

#endif  // DGM_RNG_H_
