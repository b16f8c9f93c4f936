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

#include <benchmark/benchmark.h>

#include "sbam/masking.h"
#include "sbam/mim_loss.h"
#include "sbam/numerics.h"
#include "sbam/salience.h"
#include "sbam/synthetic.h"
#include "sbam/tiny_mae.h"
#include "sbam/tokenize.h"
#include "sbam/trainer.h"

namespace sbam {
namespace {

Mat3 random_tokens(std::size_t n, std::size_t l, std::size_t d) {
  Rng rng(7);
  Mat3 m(n, l, d);
  for (float& v : m.data()) v = rng.uniform(-1.0f, 1.0f);
  return m;
}

// Args: tokens per sample L, token width D; batch of 8.
void BM_Bmm(benchmark::State& state) {
  const auto l = static_cast<std::size_t>(state.range(0));
  const auto d = static_cast<std::size_t>(state.range(1));
  const Mat3 x = random_tokens(8, l, d);
  const Mat3 xt = transpose(x);
  for (auto _ : state) benchmark::DoNotOptimize(bmm(x, xt));
  state.SetItemsProcessed(state.iterations() * 8 * l * l * d);
}
BENCHMARK(BM_Bmm)->Args({16, 64})->Args({64, 192})->Args({196, 768});

void BM_SoftmaxRows(benchmark::State& state) {
  const auto l = static_cast<std::size_t>(state.range(0));
  const Mat3 a = random_tokens(8, l, l);
  for (auto _ : state) benchmark::DoNotOptimize(softmax_rows(a));
  state.SetItemsProcessed(state.iterations() * 8 * l * l);
}
BENCHMARK(BM_SoftmaxRows)->Arg(16)->Arg(64)->Arg(196);

void BM_TokenSalience(benchmark::State& state) {
  const auto l = static_cast<std::size_t>(state.range(0));
  const auto d = static_cast<std::size_t>(state.range(1));
  const Mat3 x = random_tokens(8, l, d);
  for (auto _ : state) benchmark::DoNotOptimize(token_salience(x));
}
BENCHMARK(BM_TokenSalience)->Args({16, 64})->Args({196, 768});

void BM_MakeMask(benchmark::State& state) {
  const SalienceMap s = token_salience(random_tokens(64, 196, 48));
  MaskingConfig cfg;
  cfg.strategy = static_cast<Strategy>(state.range(0));
  Rng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(make_mask(s, cfg, rng));
  state.SetLabel(std::string(to_string(cfg.strategy)));
}
BENCHMARK(BM_MakeMask)
    ->Arg(static_cast<int>(Strategy::kRandom))
    ->Arg(static_cast<int>(Strategy::kSbam))
    ->Arg(static_cast<int>(Strategy::kSbamAmr));

// One forward/backward/update on a minibatch of planted-object images.
void BM_TrainStep(benchmark::State& state) {
  const auto batch = static_cast<std::size_t>(state.range(0));
  Rng rng(3);
  const auto images = planted_object_images(batch, PlantedObjectSpec{}, rng);
  const TokenBatch x = patchify(images, 8);
  const TokenBatch target = normalize_targets(x);
  const SalienceMap s = token_salience(x);
  TinyMaeParams params = TinyMaeParams::init(x.dims(), 16, rng);
  const MaskingConfig cfg;
  for (auto _ : state) {
    const MaskPlan plan = make_mask(s, cfg, rng);
    const ForwardResult fwd = forward(params, x.tokens, plan.mask);
    const Mat3 dpred = mim_loss_grad(fwd.pred, target.tokens, plan.mask);
    sgd_step(params, backward(params, fwd.cache, dpred), 1e-3);
  }
  state.SetItemsProcessed(state.iterations() * batch);
}
BENCHMARK(BM_TrainStep)->Arg(8)->Arg(64);

}  // namespace
}  // namespace sbam

BENCHMARK_MAIN();
