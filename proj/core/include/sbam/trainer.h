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

#ifndef SBAM_TRAINER_H_
#define SBAM_TRAINER_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "sbam/image.h"
#include "sbam/masking.h"
#include "sbam/tiny_mae.h"

namespace sbam {

struct TrainConfig {
  double lr = 0.005;
  std::size_t epochs = 200;
  std::size_t batch = 8;  // minibatch size; 0 means the whole dataset
  // Strategy and ratios for the masks drawn every step. masking.seed is not
  // used here: every stream of a run derives from TrainConfig::seed.
  MaskingConfig masking;
  float eps = 1e-6f;
  std::uint64_t seed = 0;
  std::size_t patch_side = 8;
  std::size_t hidden = 16;
  // Gradients whose global L2 norm exceeds this are rescaled to it before
  // the update; 0 disables clipping.
  double clip_norm = 20.0;

  // Throws ConfigError.
  void validate() const;
};

struct TrainResult {
  TinyMaeParams params;
  // Mean minibatch loss per epoch; each minibatch loss is measured before its
  // own update, so loss_curve[0] reflects the initial weights.
  std::vector<double> loss_curve;
};

// Per epoch: shuffle, then per minibatch patchify -> normalise targets ->
// mask with cfg.masking -> forward -> masked loss -> backward -> SGD step.
// Salience is computed once on the raw patches; noise and random masks are
// redrawn for every minibatch. Deterministic in (data, cfg).
// Throws ParameterError for empty data, ConfigError for a bad cfg.
TrainResult train(std::span<const Image> data, const TrainConfig& cfg);

// Mean masked loss of params on data under the given masking, drawing masks
// from a stream seeded by eval_seed.
double evaluate(const TinyMaeParams& params, std::span<const Image> data,
                const TrainConfig& cfg, const MaskingConfig& masking,
                std::uint64_t eval_seed);

// Rescales grads in place so their global L2 norm is at most max_norm and
// returns the norm before rescaling. max_norm <= 0 leaves grads untouched.
double clip_gradients(TinyMaeParams& grads, double max_norm);

// In-place p -= lr * g for every block.
void sgd_step(TinyMaeParams& params, const TinyMaeParams& grads, double lr);

}  // namespace sbam

#endif  // SBAM_TRAINER_H_
