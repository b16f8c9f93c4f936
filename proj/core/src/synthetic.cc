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

#include "sbam/synthetic.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "sbam/errors.h"

namespace sbam {

std::size_t object_patch_count(const PlantedObjectSpec& spec) {
  if (spec.patch_side == 0 || spec.size == 0 || spec.size % spec.patch_side != 0) {
    throw ParameterError("planted objects: image size " + std::to_string(spec.size) +
                         " must be a positive multiple of patch side " +
                         std::to_string(spec.patch_side));
  }
  if (!(spec.coverage > 0.0 && spec.coverage <= 1.0)) {
    throw ParameterError("planted objects: coverage must lie in (0,1], got " +
                         std::to_string(spec.coverage));
  }
  const std::size_t grid = spec.size / spec.patch_side;
  const std::size_t total = grid * grid;
  const auto want = static_cast<std::size_t>(
      std::llround(spec.coverage * static_cast<double>(total)));
  return std::clamp<std::size_t>(want, 1, total);
}

std::vector<PlantedObjectImage> generate_planted_objects(
    std::size_t count, const PlantedObjectSpec& spec, Rng& rng) {
  if (spec.channels != 1 && spec.channels != 3) {
    throw ParameterError("planted objects: channels must be 1 or 3");
  }
  if (!(spec.texture >= 0.0f && spec.texture < 0.3f)) {
    throw ParameterError("planted objects: texture must lie in [0,0.3), got " +
                         std::to_string(spec.texture));
  }
  if (!(spec.background_texture >= 0.0f && spec.background_texture <= 0.1f)) {
    throw ParameterError("planted objects: background texture must lie in [0,0.1], got " +
                         std::to_string(spec.background_texture));
  }
  const std::size_t area = object_patch_count(spec);
  const std::size_t grid = spec.size / spec.patch_side;

  std::vector<std::pair<std::size_t, std::size_t>> shapes;
  for (std::size_t h = 1; h <= grid; ++h) {
    if (area % h == 0 && area / h <= grid) shapes.emplace_back(h, area / h);
  }
  if (shapes.empty()) {
    throw ParameterError("planted objects: no rectangle of " + std::to_string(area) +
                         " patches fits a " + std::to_string(grid) + "x" +
                         std::to_string(grid) + " grid");
  }

  const float half = spec.texture * 0.5f;
  const float bg_half = spec.background_texture * 0.5f;
  std::vector<PlantedObjectImage> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const auto [rows, cols] = shapes[rng.below(shapes.size())];
    const std::size_t top = rng.below(grid - rows + 1);
    const std::size_t left = rng.below(grid - cols + 1);
    const float background = rng.uniform(0.05f, 0.3f);
    const float object = rng.uniform(0.7f + half, 1.0f - half);
    const bool vertical = rng.below(2) == 1;

    PlantedObjectImage sample;
    sample.object_rows = rows;
    sample.object_cols = cols;
    sample.object_tokens.assign(grid * grid, 0);
    for (std::size_t r = top; r < top + rows; ++r) {
      for (std::size_t c = left; c < left + cols; ++c) {
        sample.object_tokens[r * grid + c] = 1;
      }
    }
    Image im(spec.size, spec.size, spec.channels);
    for (std::size_t y = 0; y < spec.size; ++y) {
      for (std::size_t x = 0; x < spec.size; ++x) {
        const std::size_t token = (y / spec.patch_side) * grid + x / spec.patch_side;
        const bool inside = sample.object_tokens[token] != 0;
        const std::size_t phase = vertical ? x : y;
        const float sign = (phase / 2) % 2 == 0 ? 1.0f : -1.0f;
        const float value =
            inside ? object + sign * half : background + sign * bg_half;
        for (std::size_t c = 0; c < spec.channels; ++c) im.at(x, y, c) = value;
      }
    }
    sample.image = std::move(im);
    out.push_back(std::move(sample));
  }
  return out;
}

std::vector<Image> planted_object_images(std::size_t count,
                                         const PlantedObjectSpec& spec,
                                         Rng& rng) {
  std::vector<Image> images;
  images.reserve(count);
  for (auto& s : generate_planted_objects(count, spec, rng)) {
    images.push_back(std::move(s.image));
  }
  return images;
}

}  // namespace sbam
