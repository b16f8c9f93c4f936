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
#include <numeric>

#include <gtest/gtest.h>

#include "sbam/errors.h"
#include "sbam/salience.h"
#include "sbam/synthetic.h"
#include "sbam/tokenize.h"

namespace sbam {
namespace {

std::vector<Image> dataset(std::size_t count, std::uint64_t seed) {
  Rng rng(seed);
  return planted_object_images(count, PlantedObjectSpec{}, rng);
}

TEST(Synthetic, ObjectGeometry) {
  PlantedObjectSpec spec;
  EXPECT_EQ(object_patch_count(spec), 4u);
  spec.coverage = 0.5;
  EXPECT_EQ(object_patch_count(spec), 8u);
  spec.coverage = 0.01;
  EXPECT_EQ(object_patch_count(spec), 1u);

  Rng rng(61);
  for (double coverage : {0.125, 0.25, 0.5}) {
    spec.coverage = coverage;
    for (const auto& s : generate_planted_objects(20, spec, rng)) {
      const auto count = std::accumulate(s.object_tokens.begin(),
                                         s.object_tokens.end(), std::size_t{0});
      EXPECT_EQ(count, object_patch_count(spec));
      EXPECT_EQ(s.object_rows * s.object_cols, count);
      for (float p : s.image.pixels) {
        EXPECT_GE(p, 0.0f);
        EXPECT_LE(p, 1.0f);
      }
    }
  }
}

TEST(Synthetic, ObjectIsBrighterThanBackground) {
  Rng rng(62);
  const PlantedObjectSpec spec;
  for (const auto& s : generate_planted_objects(10, spec, rng)) {
    const TokenBatch tb = patchify(std::span(&s.image, 1), spec.patch_side);
    float dimmest_object = 1.0f, brightest_background = 0.0f;
    for (std::size_t l = 0; l < tb.length(); ++l) {
      const auto r = tb.tokens.row(0, l);
      const float mean = std::accumulate(r.begin(), r.end(), 0.0f) / r.size();
      if (s.object_tokens[l]) {
        dimmest_object = std::min(dimmest_object, mean);
      } else {
        brightest_background = std::max(brightest_background, mean);
      }
    }
    EXPECT_GT(dimmest_object, brightest_background + 0.3f);
  }
}

TEST(Synthetic, SaliencePeaksInsideObject) {
  Rng rng(63);
  const PlantedObjectSpec spec;
  for (const auto& s : generate_planted_objects(20, spec, rng)) {
    const TokenBatch tb = patchify(std::span(&s.image, 1), spec.patch_side);
    const Mat2 scores = token_salience(tb).scores;
    const auto r = scores.row(0);
    const auto peak = std::max_element(r.begin(), r.end()) - r.begin();
    EXPECT_EQ(s.object_tokens[static_cast<std::size_t>(peak)], 1);
  }
}

TEST(Synthetic, RejectsBadSpecs) {
  Rng rng(64);
  PlantedObjectSpec spec;
  spec.size = 30;
  EXPECT_THROW(generate_planted_objects(1, spec, rng), ParameterError);
  spec = PlantedObjectSpec{};
  spec.coverage = 0.0;
  EXPECT_THROW(generate_planted_objects(1, spec, rng), ParameterError);
  spec = PlantedObjectSpec{};
  spec.texture = 0.3f;
  EXPECT_THROW(generate_planted_objects(1, spec, rng), ParameterError);
  spec = PlantedObjectSpec{};
  spec.size = 40;  // 5x5 grid
  spec.coverage = 7.0 / 25.0;  // 7 is prime and wider than the grid
  EXPECT_THROW(generate_planted_objects(1, spec, rng), ParameterError);
}

TEST(Synthetic, DeterministicPerSeed) {
  EXPECT_EQ(dataset(4, 9), dataset(4, 9));
  EXPECT_NE(dataset(4, 9), dataset(4, 10));
}

TEST(TrainConfigTest, Validation) {
  TrainConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.lr = -1.0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = TrainConfig{};
  cfg.hidden = 0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = TrainConfig{};
  cfg.masking.base_ratio = 2.0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = TrainConfig{};
  cfg.clip_norm = -1.0;
  EXPECT_THROW(cfg.validate(), ConfigError);
}

TEST(Train, EmptyDataIsAnError) {
  EXPECT_THROW(train({}, TrainConfig{}), ParameterError);
}

TEST(Train, ZeroLearningRateLeavesInitialWeights) {
  const auto data = dataset(8, 1);
  TrainConfig cfg;
  cfg.epochs = 0;
  const TinyMaeParams initial = train(data, cfg).params;
  cfg.lr = 0.0;
  cfg.epochs = 5;
  const TrainResult r = train(data, cfg);
  EXPECT_EQ(r.params, initial);
  EXPECT_EQ(r.loss_curve.size(), 5u);
}

TEST(Train, SameSeedSameCurve) {
  const auto data = dataset(16, 2);
  TrainConfig cfg;
  cfg.epochs = 10;
  cfg.seed = 4;
  const TrainResult a = train(data, cfg);
  const TrainResult b = train(data, cfg);
  EXPECT_EQ(a.loss_curve, b.loss_curve);
  EXPECT_EQ(a.params, b.params);
  cfg.seed = 5;
  EXPECT_NE(train(data, cfg).loss_curve, a.loss_curve);
}

TEST(Train, StrategiesGiveDifferentCurves) {
  const auto data = dataset(16, 3);
  TrainConfig cfg;
  cfg.epochs = 5;
  cfg.masking.strategy = Strategy::kRandom;
  const auto random_curve = train(data, cfg).loss_curve;
  cfg.masking.strategy = Strategy::kSbam;
  const auto sbam_curve = train(data, cfg).loss_curve;
  cfg.masking.strategy = Strategy::kSalienceOnly;
  const auto salience_curve = train(data, cfg).loss_curve;
  EXPECT_NE(random_curve, sbam_curve);
  EXPECT_NE(sbam_curve, salience_curve);
}

TEST(Train, LossDropsOnPlantedObjects) {
  const auto data = dataset(64, 0);
  TrainConfig cfg;
  const TrainResult r = train(data, cfg);
  ASSERT_EQ(r.loss_curve.size(), 200u);
  EXPECT_LT(r.loss_curve.back(), 0.5 * r.loss_curve.front());
  EXPECT_TRUE(r.params.all_finite());
}

TEST(Train, FullBatchMode) {
  const auto data = dataset(6, 4);
  TrainConfig cfg;
  cfg.batch = 0;
  cfg.epochs = 3;
  EXPECT_EQ(train(data, cfg).loss_curve.size(), 3u);
}

TEST(Evaluate, DeterministicAndSeedDependent) {
  const auto data = dataset(8, 5);
  TrainConfig cfg;
  cfg.epochs = 3;
  const TrainResult r = train(data, cfg);
  MaskingConfig eval;
  eval.strategy = Strategy::kRandom;
  eval.base_ratio = 0.5;
  const double a = evaluate(r.params, data, cfg, eval, 1);
  EXPECT_EQ(a, evaluate(r.params, data, cfg, eval, 1));
  EXPECT_NE(a, evaluate(r.params, data, cfg, eval, 2));
  EXPECT_THROW(evaluate(r.params, {}, cfg, eval, 1), ParameterError);
}

TEST(ClipGradients, RescalesOnlyLargeNorms) {
  TinyMaeParams g(1, 1);
  g.embed_w(0, 0) = 3.0f;
  g.decode_b[0] = 4.0f;
  TinyMaeParams small = g;
  EXPECT_DOUBLE_EQ(clip_gradients(small, 10.0), 5.0);
  EXPECT_EQ(small, g);
  EXPECT_DOUBLE_EQ(clip_gradients(g, 1.0), 5.0);
  EXPECT_FLOAT_EQ(g.embed_w(0, 0), 0.6f);
  EXPECT_FLOAT_EQ(g.decode_b[0], 0.8f);
  TinyMaeParams off = small;
  clip_gradients(off, 0.0);
  EXPECT_EQ(off, small);
}

TEST(SgdStep, SubtractsScaledGradient) {
  TinyMaeParams p(1, 1), g(1, 1);
  p.decode_b[0] = 1.0f;
  g.decode_b[0] = 4.0f;
  sgd_step(p, g, 0.25);
  EXPECT_EQ(p.decode_b[0], 0.0f);
}

}  // namespace
}  // namespace sbam
