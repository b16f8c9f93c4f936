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

#ifndef SBAM_TOKENIZE_H_
#define SBAM_TOKENIZE_H_

#include <cstddef>
#include <span>
#include <vector>

#include "sbam/image.h"
#include "sbam/numerics.h"

namespace sbam {

struct GridShape {
  std::size_t rows = 0;
  std::size_t cols = 0;

  std::size_t count() const { return rows * cols; }
  friend bool operator==(const GridShape&, const GridShape&) = default;
};

// Tokens X of shape (N, L, D) with the patch geometry they came from.
// Invariants: D == patch_side^2 * channels and L == grid.rows * grid.cols.
struct TokenBatch {
  Mat3 tokens;
  std::size_t patch_side = 0;
  std::size_t channels = 1;
  GridShape grid;

  std::size_t batch() const { return tokens.batch(); }
  std::size_t length() const { return tokens.rows(); }
  std::size_t dims() const { return tokens.cols(); }
};

// Cuts each image into non-overlapping patch_side x patch_side patches.
// Token j is the patch at grid cell (j / cols, j % cols); inside a token,
// pixels are laid out row-major with channels interleaved.
// Throws ShapeError for mixed sizes/channels or sizes not divisible by
// patch_side, ParameterError for an empty list or zero patch side.
TokenBatch patchify(std::span<const Image> images, std::size_t patch_side);

// Inverse of patchify; exact on pixel values.
std::vector<Image> unpatchify(const TokenBatch& batch);

// Per-token target normalisation: each (n, l) token is shifted by its own
// mean over D and divided by its population standard deviation plus eps.
// Throws ParameterError unless eps > 0.
TokenBatch normalize_targets(const TokenBatch& x, float eps = 1e-6f);

}  // namespace sbam

#endif  // SBAM_TOKENIZE_H_
