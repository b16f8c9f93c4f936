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

#ifndef SBAM_TINY_MAE_H_
#define SBAM_TINY_MAE_H_

#include <cstddef>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "sbam/masking.h"
#include "sbam/numerics.h"
#include "sbam/rng.h"

namespace sbam {

// Weights of a one-layer masked autoencoder:
//
//   E = X W_e + b_e                      token embedding, (L, D_h)
//   H[l] = M[l] ? mask_token : E[l]
//   A = softmax(H W_q (H W_k)^T / sqrt(D_h)) (H W_v)
//   Y = A W_d + b_d                      reconstruction, (L, D_in)
//
// The same struct doubles as the gradient container.
struct TinyMaeParams {
  Mat2 embed_w;                   // (D_in, D_h)
  std::vector<float> embed_b;     // D_h
  Mat2 attn_q;                    // (D_h, D_h)
  Mat2 attn_k;                    // (D_h, D_h)
  Mat2 attn_v;                    // (D_h, D_h)
  std::vector<float> mask_token;  // D_h
  Mat2 decode_w;                  // (D_h, D_in)
  std::vector<float> decode_b;    // D_in

  // All-zero parameters.
  TinyMaeParams(std::size_t input_dims, std::size_t hidden_dims);
  TinyMaeParams() = default;

  // Uniform fan-in initialisation; biases start at zero.
  static TinyMaeParams init(std::size_t input_dims, std::size_t hidden_dims,
                            Rng& rng);

  std::size_t input_dims() const { return embed_w.rows(); }
  std::size_t hidden_dims() const { return embed_w.cols(); }

  // Named views over every trainable block in a fixed order:
  // embed_w, embed_b, attn_q, attn_k, attn_v, mask_token, decode_w, decode_b.
  std::vector<std::pair<std::string_view, std::span<float>>> blocks();
  std::vector<std::pair<std::string_view, std::span<const float>>> blocks()
      const;

  bool all_finite() const;

  friend bool operator==(const TinyMaeParams&, const TinyMaeParams&) = default;
};

// Intermediate activations kept for backward, in double precision.
struct ForwardCache {
  struct Sample {
    std::vector<double> input;   // X (L, D_in)
    std::vector<double> hidden;  // H (L, D_h)
    std::vector<double> query;   // (L, D_h)
    std::vector<double> key;     // (L, D_h)
    std::vector<double> value;   // (L, D_h)
    std::vector<double> attn;    // softmax weights (L, L)
    std::vector<double> mixed;   // A (L, D_h)
    std::vector<double> output;  // Y (L, D_in)
  };
  std::size_t length = 0;
  std::size_t input_dims = 0;
  std::size_t hidden_dims = 0;
  MaskSet mask;
  std::vector<Sample> samples;
};

struct ForwardResult {
  Mat3 pred;  // (N, L, D_in), float copy of the cached outputs
  ForwardCache cache;
};

// Throws ShapeError when x, mask and params disagree.
ForwardResult forward(const TinyMaeParams& params, const Mat3& x,
                      const MaskSet& mask);

// Reverse-mode gradients of sum(dpred .* Y) with respect to every parameter.
// Throws ShapeError if dpred does not match the cached outputs.
TinyMaeParams backward(const TinyMaeParams& params, const ForwardCache& cache,
                       const Mat3& dpred);

}  // namespace sbam

#endif  // SBAM_TINY_MAE_H_
