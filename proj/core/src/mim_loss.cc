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

#include "sbam/mim_loss.h"

#include <string>

#include "sbam/errors.h"

namespace sbam {

namespace {

std::size_t check_inputs(const Mat3& pred, const Mat3& target,
                         const MaskSet& mask) {
  if (pred.batch() != target.batch() || pred.rows() != target.rows() ||
      pred.cols() != target.cols()) {
    throw ShapeError("mim_loss: prediction " + pred.shape_string() +
                     " vs target " + target.shape_string());
  }
  if (mask.batch() != pred.batch() || mask.length() != pred.rows()) {
    throw ShapeError("mim_loss: mask (" + std::to_string(mask.batch()) + "," +
                     std::to_string(mask.length()) + ") vs prediction " +
                     pred.shape_string());
  }
  const std::size_t masked = mask.total_masked();
  if (masked == 0) {
    throw EmptyMaskError("mim_loss: no masked tokens, loss is undefined");
  }
  return masked;
}

}  // namespace

LossReport mim_loss(const Mat3& pred, const Mat3& target, const MaskSet& mask) {
  LossReport report;
  report.masked_count = check_inputs(pred, target, mask);
  report.per_sample.assign(pred.batch(), 0.0);
  double total = 0.0;
  for (std::size_t n = 0; n < pred.batch(); ++n) {
    double sample = 0.0;
    for (std::size_t l = 0; l < pred.rows(); ++l) {
      if (!mask.masked(n, l)) continue;
      const auto p = pred.row(n, l);
      const auto t = target.row(n, l);
      for (std::size_t d = 0; d < p.size(); ++d) {
        const double diff = static_cast<double>(p[d]) - t[d];
        sample += diff * diff;
      }
    }
    report.per_sample[n] = sample;
    total += sample;
  }
  report.value = total / static_cast<double>(report.masked_count);
  return report;
}

Mat3 mim_loss_grad(const Mat3& pred, const Mat3& target, const MaskSet& mask) {
  const std::size_t masked = check_inputs(pred, target, mask);
  const double scale = 2.0 / static_cast<double>(masked);
  Mat3 grad(pred.batch(), pred.rows(), pred.cols());
  for (std::size_t n = 0; n < pred.batch(); ++n) {
    for (std::size_t l = 0; l < pred.rows(); ++l) {
      if (!mask.masked(n, l)) continue;
      const auto p = pred.row(n, l);
      const auto t = target.row(n, l);
      auto g = grad.row(n, l);
      for (std::size_t d = 0; d < p.size(); ++d) {
        g[d] = static_cast<float>(scale * (static_cast<double>(p[d]) - t[d]));
      }
    }
  }
  return grad;
}

}  // namespace sbam
