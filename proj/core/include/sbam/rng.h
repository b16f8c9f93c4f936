/* Copyright 2026 The SBAM Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef SBAM_RNG_H_
#define SBAM_RNG_H_

#include <cstddef>
#include <cstdint>
#include <random>

namespace sbam {

// Deterministic random stream.
//
// The engine is std::mt19937_64, whose output sequence is fixed by the C++
// standard. Conversions to floating point and bounded integers are done here
// rather than through <random> distributions, whose algorithms are
// implementation-defined. Consequently a given seed yields the same samples on
// every conforming platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform double in [0, 1) with 53 random bits.
  double next_unit();

  // Uniform float in [lo, hi). Requires lo < hi.
  float uniform(float lo, float hi);

  // Uniform integer in [0, bound). Requires bound > 0. Unbiased (rejection).
  std::size_t below(std::size_t bound);

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

// Mixes a seed with a stream label so sub-components (initialisation, masking,
// evaluation) draw from unrelated streams of one user seed. SplitMix64 finaliser.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace sbam

#endif  // SBAM_RNG_H_
