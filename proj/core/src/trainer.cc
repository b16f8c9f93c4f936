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

#include "sbam/trainer.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include "sbam/errors.h"
#include "sbam/mim_loss.h"
#include "sbam/tokenize.h"

namespace sbam {

namespace {

enum Stream : std::uint64_t { kInit = 0, kShuffle = 1, kMask = 2 };

// Patch tokens, their normalised targets and raw-patch salience.
struct Prepared {
  TokenBatch tokens;
  TokenBatch targets;
  SalienceMap salience;
};

Prepared prepare(std::span<const Image> data, const TrainConfig& cfg) {
  Prepared p;
  p.tokens = patchify(data, cfg.patch_side);
  p.targets = normalize_targets(p.tokens, cfg.eps);
  if (cfg.masking.strategy == Strategy::kRandom) {
    p.salience.scores = Mat2(p.tokens.batch(), p.tokens.length());
  } else {
    p.salience = token_salience(p.tokens);
  }
  return p;
}

Mat3 gather(const Mat3& src, std::span<const std::size_t> rows) {
  Mat3 out(rows.size(), src.rows(), src.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto from = src.slice(rows[i]);
    std::copy(from.begin(), from.end(), out.slice(i).begin());
  }
  return out;
}

SalienceMap gather(const SalienceMap& src, std::span<const std::size_t> rows) {
  SalienceMap out{Mat2(rows.size(), src.length()), std::nullopt};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto from = src.scores.row(rows[i]);
    std::copy(from.begin(), from.end(), out.scores.row(i).begin());
  }
  return out;
}

}  // namespace

void TrainConfig::validate() const {
  if (!(lr >= 0.0) || !std::isfinite(lr)) {
    throw ConfigError("lr must be a finite value >= 0, got " + std::to_string(lr));
  }
  if (patch_side == 0) throw ConfigError("patch must be > 0");
  if (hidden == 0) throw ConfigError("hidden must be > 0");
  if (!(eps > 0.0f)) throw ConfigError("eps must be > 0");
  if (!(clip_norm >= 0.0) || !std::isfinite(clip_norm)) {
    throw ConfigError("clip-norm must be a finite value >= 0, got " +
                      std::to_string(clip_norm));
  }
  masking.validate();
}

double clip_gradients(TinyMaeParams& grads, double max_norm) {
  double sq = 0.0;
  for (const auto& [name, block] : std::as_const(grads).blocks()) {
    for (float g : block) sq += static_cast<double>(g) * static_cast<double>(g);
  }
  const double norm = std::sqrt(sq);
  if (max_norm > 0.0 && norm > max_norm) {
    const double scale = max_norm / norm;
    for (auto& [name, block] : grads.blocks()) {
      for (float& g : block) g = static_cast<float>(static_cast<double>(g) * scale);
    }
  }
  return norm;
}

void sgd_step(TinyMaeParams& params, const TinyMaeParams& grads, double lr) {
  auto dst = params.blocks();
  const auto src = grads.blocks();
  for (std::size_t b = 0; b < dst.size(); ++b) {
    auto p = dst[b].second;
    const auto g = src[b].second;
    for (std::size_t i = 0; i < p.size(); ++i) {
      p[i] = static_cast<float>(static_cast<double>(p[i]) -
                                lr * static_cast<double>(g[i]));
    }
  }
}

TrainResult train(std::span<const Image> data, const TrainConfig& cfg) {
  if (data.empty()) throw ParameterError("train: no training images");
  cfg.validate();
  const Prepared prep = prepare(data, cfg);
  const std::size_t count = prep.tokens.batch();
  const std::size_t batch = cfg.batch == 0 ? count : std::min(cfg.batch, count);

  Rng init_rng(derive_seed(cfg.seed, kInit));
  Rng shuffle_rng(derive_seed(cfg.seed, kShuffle));
  Rng mask_rng(derive_seed(cfg.seed, kMask));

  TrainResult result;
  result.params = TinyMaeParams::init(prep.tokens.dims(), cfg.hidden, init_rng);
  result.loss_curve.reserve(cfg.epochs);

  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (std::size_t i = count; i > 1; --i) {
      std::swap(order[i - 1], order[shuffle_rng.below(i)]);
    }
    double epoch_loss = 0.0;
    std::size_t steps = 0;
    for (std::size_t start = 0; start < count; start += batch) {
      const std::span<const std::size_t> rows(
          order.data() + start, std::min(batch, count - start));
      const Mat3 x = gather(prep.tokens.tokens, rows);
      const Mat3 target = gather(prep.targets.tokens, rows);
      const MaskPlan plan = make_mask(gather(prep.salience, rows), cfg.masking,
                                      mask_rng);
      const ForwardResult fwd = forward(result.params, x, plan.mask);
      const LossReport loss = mim_loss(fwd.pred, target, plan.mask);
      const Mat3 dpred = mim_loss_grad(fwd.pred, target, plan.mask);
      TinyMaeParams grads = backward(result.params, fwd.cache, dpred);
      clip_gradients(grads, cfg.clip_norm);
      sgd_step(result.params, grads, cfg.lr);
      epoch_loss += loss.value;
      ++steps;
    }
    result.loss_curve.push_back(epoch_loss / static_cast<double>(steps));
  }
  return result;
}

double evaluate(const TinyMaeParams& params, std::span<const Image> data,
                const TrainConfig& cfg, const MaskingConfig& masking,
                std::uint64_t eval_seed) {
  if (data.empty()) throw ParameterError("evaluate: no images");
  TrainConfig eval_cfg = cfg;
  eval_cfg.masking = masking;
  eval_cfg.validate();
  const Prepared prep = prepare(data, eval_cfg);
  Rng rng(eval_seed);
  const MaskPlan plan = make_mask(prep.salience, masking, rng);
  const ForwardResult fwd = forward(params, prep.tokens.tokens, plan.mask);
  return mim_loss(fwd.pred, prep.targets.tokens, plan.mask).value;
}

}  // namespace sbam
