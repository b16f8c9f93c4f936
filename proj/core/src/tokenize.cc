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

#include "sbam/tokenize.h"

#include <cmath>
#include <string>

#include "sbam/errors.h"

namespace sbam {

namespace {

std::string describe(const Image& im) {
  return std::to_string(im.width) + "x" + std::to_string(im.height) + "x" +
         std::to_string(im.channels);
}

}  // namespace

TokenBatch patchify(std::span<const Image> images, std::size_t patch_side) {
  if (images.empty()) throw ParameterError("patchify: no images");
  if (patch_side == 0) throw ParameterError("patchify: patch side must be > 0");
  const Image& first = images.front();
  for (std::size_t i = 1; i < images.size(); ++i) {
    const Image& im = images[i];
    if (im.width != first.width || im.height != first.height ||
        im.channels != first.channels) {
      throw ShapeError("patchify: image " + std::to_string(i) + " is " +
                       describe(im) + " but image 0 is " + describe(first));
    }
  }
  if (first.width % patch_side != 0 || first.height % patch_side != 0) {
    throw ShapeError("patchify: image " + describe(first) +
                     " is not divisible by patch side " +
                     std::to_string(patch_side));
  }

  TokenBatch out;
  out.patch_side = patch_side;
  out.channels = first.channels;
  out.grid = {first.height / patch_side, first.width / patch_side};
  const std::size_t ch = first.channels;
  const std::size_t dims = patch_side * patch_side * ch;
  out.tokens = Mat3(images.size(), out.grid.count(), dims);

  for (std::size_t n = 0; n < images.size(); ++n) {
    const Image& im = images[n];
    for (std::size_t l = 0; l < out.grid.count(); ++l) {
      const std::size_t y0 = (l / out.grid.cols) * patch_side;
      const std::size_t x0 = (l % out.grid.cols) * patch_side;
      auto tok = out.tokens.row(n, l);
      std::size_t d = 0;
      for (std::size_t py = 0; py < patch_side; ++py) {
        for (std::size_t px = 0; px < patch_side; ++px) {
          for (std::size_t c = 0; c < ch; ++c) {
            tok[d++] = im.at(x0 + px, y0 + py, c);
          }
        }
      }
    }
  }
  return out;
}

std::vector<Image> unpatchify(const TokenBatch& batch) {
  const std::size_t p = batch.patch_side;
  const std::size_t ch = batch.channels;
  if (batch.dims() != p * p * ch || batch.length() != batch.grid.count()) {
    throw ShapeError("unpatchify: tokens " + batch.tokens.shape_string() +
                     " inconsistent with patch geometry");
  }
  std::vector<Image> out;
  out.reserve(batch.batch());
  for (std::size_t n = 0; n < batch.batch(); ++n) {
    Image im;
    im.width = batch.grid.cols * p;
    im.height = batch.grid.rows * p;
    im.channels = ch;
    im.pixels.assign(im.width * im.height * ch, 0.0f);
    for (std::size_t l = 0; l < batch.length(); ++l) {
      const std::size_t y0 = (l / batch.grid.cols) * p;
      const std::size_t x0 = (l % batch.grid.cols) * p;
      const auto tok = batch.tokens.row(n, l);
      std::size_t d = 0;
      for (std::size_t py = 0; py < p; ++py) {
        for (std::size_t px = 0; px < p; ++px) {
          for (std::size_t c = 0; c < ch; ++c) {
            im.at(x0 + px, y0 + py, c) = tok[d++];
          }
        }
      }
    }
    out.push_back(std::move(im));
  }
  return out;
}

TokenBatch normalize_targets(const TokenBatch& x, float eps) {
  if (!(eps > 0.0f)) {
    throw ParameterError("normalize_targets: eps must be > 0, got " +
                         std::to_string(eps));
  }
  TokenBatch out = x;
  const std::size_t dims = x.dims();
  if (dims == 0) return out;
  for (std::size_t n = 0; n < x.batch(); ++n) {
    for (std::size_t l = 0; l < x.length(); ++l) {
      const auto in = x.tokens.row(n, l);
      double mean = 0.0;
      for (float v : in) mean += v;
      mean /= static_cast<double>(dims);
      double var = 0.0;
      for (float v : in) var += (v - mean) * (v - mean);
      var /= static_cast<double>(dims);
      const double denom = std::sqrt(var) + eps;
      auto o = out.tokens.row(n, l);
      for (std::size_t d = 0; d < dims; ++d) {
        o[d] = static_cast<float>((in[d] - mean) / denom);
      }
    }
  }
  return out;
}

}  // namespace sbam
