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

#ifndef SBAM_SALIENCE_H_
#define SBAM_SALIENCE_H_

#include <optional>

#include "sbam/numerics.h"
#include "sbam/rng.h"
#include "sbam/tokenize.h"

namespace sbam {

// Per-sample token salience.
//   scores:   (N, L), each row min-max normalised into [0, 1]
//   adjusted: (N, L), scores plus uniform noise; present after
//             adjust_with_noise
struct SalienceMap {
  Mat2 scores;
  std::optional<Mat2> adjusted;

  std::size_t batch() const { return scores.rows(); }
  std::size_t length() const { return scores.cols(); }
};

// A[n] = X[n] X[n]^T, shape (N, L, L).
Mat3 affinity(const Mat3& tokens);
inline Mat3 affinity(const TokenBatch& x) { return affinity(x.tokens); }

// Un-normalised outgoing weight: column sums of the row-softmaxed affinity.
// Entry (n, i) is how much token i contributes to all tokens of sample n.
Mat2 outgoing_weight(const Mat3& tokens);

// Min-max normalised outgoing weight, per sample.
//
// The Mat3 overload is the hook for externally supplied embeddings; the
// TokenBatch overload computes salience on raw patch pixels.
SalienceMap token_salience(const Mat3& tokens);
inline SalienceMap token_salience(const TokenBatch& x) {
  return token_salience(x.tokens);
}

// Returns s with adjusted = scores + U[0, amplitude). amplitude == 0 copies
// scores exactly and draws nothing from rng. Throws ParameterError when
// amplitude < 0.
SalienceMap adjust_with_noise(const SalienceMap& s, Rng& rng, float amplitude);

}  // namespace sbam

#endif  // SBAM_SALIENCE_H_
