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

#include "sbam/rng.h"

#include <cmath>
#include <limits>

#include "sbam/errors.h"

namespace sbam {

double Rng::next_unit() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

float Rng::uniform(float lo, float hi) {
  if (!(lo < hi)) {
    throw ParameterError("uniform: require lo < hi");
  }
  const double u = next_unit();
  const double v = static_cast<double>(lo) +
                   (static_cast<double>(hi) - static_cast<double>(lo)) * u;
  float out = static_cast<float>(v);
  // Rounding to float can land on hi; the interval is half-open.
  if (out >= hi) out = std::nextafter(hi, lo);
  if (out < lo) out = lo;
  return out;
}

std::size_t Rng::below(std::size_t bound) {
  if (bound == 0) throw ParameterError("below: bound must be positive");
  const std::uint64_t b = bound;
  const std::uint64_t threshold = (0 - b) % b;
  for (;;) {
    const std::uint64_t x = engine_();
    if (x >= threshold) return static_cast<std::size_t>(x % b);
  }
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace sbam
