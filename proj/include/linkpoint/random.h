// Copyright 2026 The Linkpoint Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LINKPOINT_RANDOM_H_
#define LINKPOINT_RANDOM_H_

#include <cstdint>
#include <random>
#include <string_view>
#include <utility>
#include <vector>

namespace linkpoint {

// Seeded generator whose output sequence is identical on every platform.
// std::mt19937_64 is fully specified by the standard; the distributions are
// not, so bounded draws and shuffles are implemented here.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  // Derives an independent stream from a base seed and a label.
  static Rng Derive(uint64_t seed, std::string_view label);

  uint64_t Next() { return engine_(); }

  // Uniform integer in [0, bound). bound must be > 0.
  uint64_t Below(uint64_t bound);

  // Uniform double in [0, 1).
  double Uniform() { return static_cast<double>(Next() >> 11) * 0x1.0p-53; }

  bool Bernoulli(double p) { return p > 0.0 && Uniform() < p; }

  template <typename T>
  void Shuffle(std::vector<T>& items) {
    for (size_t i = items.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(Below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

  template <typename T>
  const T& Pick(const std::vector<T>& items) {
    return items[static_cast<size_t>(Below(items.size()))];
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace linkpoint

#endif  // LINKPOINT_RANDOM_H_
