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

#ifndef SBAM_MIM_LOSS_H_
#define SBAM_MIM_LOSS_H_

#include <cstddef>
#include <vector>

#include "sbam/masking.h"
#include "sbam/numerics.h"

namespace sbam {

struct LossReport {
  double value = 0.0;
  std::size_t masked_count = 0;
  std::vector<double> per_sample;  // summed squared error over masked tokens
};

// Masked reconstruction loss
//
//   L = (1 / sum M) * sum_{n,l} M[n,l] * ||pred[n,l] - target[n,l]||^2
//
// The normaliser counts masked tokens, not masked elements (sum M, not
// sum M * D), so the value is a per-token squared error.
//
// Throws ShapeError when pred, target and mask disagree and EmptyMaskError when
// no token is masked.
LossReport mim_loss(const Mat3& pred, const Mat3& target, const MaskSet& mask);

// dL/dpred: 2 (pred - target) / sum M at masked tokens, zero elsewhere.
Mat3 mim_loss_grad(const Mat3& pred, const Mat3& target, const MaskSet& mask);

}  // namespace sbam

#endif  // SBAM_MIM_LOSS_H_
