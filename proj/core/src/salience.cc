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

#include "sbam/salience.h"

#include <cmath>
#include <limits>
#include <string>

#include "sbam/errors.h"

namespace sbam {

Mat3 affinity(const Mat3& tokens) { return bmm(tokens, transpose(tokens)); }

Mat2 outgoing_weight(const Mat3& tokens) {
  return colsum(softmax_rows(affinity(tokens)));
}

SalienceMap token_salience(const Mat3& tokens) {
  const Mat2 raw = outgoing_weight(tokens);
  SalienceMap out{Mat2(raw.rows(), raw.cols()), std::nullopt};
  for (std::size_t n = 0; n < raw.rows(); ++n) {
    const auto norm = minmax_normalize(raw.row(n));
    auto dst = out.scores.row(n);
    for (std::size_t l = 0; l < norm.size(); ++l) dst[l] = norm[l];
  }
  return out;
}

SalienceMap adjust_with_noise(const SalienceMap& s, Rng& rng, float amplitude) {
  if (!(amplitude >= 0.0f)) {
    throw ParameterError("noise amplitude must be >= 0, got " +
                         std::to_string(amplitude));
  }
  SalienceMap out{s.scores, s.scores};
  if (amplitude == 0.0f) return out;
  const Mat2 noise = uniform(rng, s.batch(), s.length(), 0.0f, amplitude);
  auto adj = out.adjusted->data();
  const auto nz = noise.data();
  for (std::size_t i = 0; i < adj.size(); ++i) {
    // Keep the half-open bound [s, s + amplitude) after float rounding.
    const double upper = static_cast<double>(adj[i]) + amplitude;
    float v = adj[i] + nz[i];
    while (static_cast<double>(v) >= upper) {
      v = std::nextafter(v, -std::numeric_limits<float>::infinity());
    }
    adj[i] = v;
  }
  return out;
}

}  // namespace sbam
