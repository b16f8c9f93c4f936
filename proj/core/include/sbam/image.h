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

#ifndef SBAM_IMAGE_H_
#define SBAM_IMAGE_H_

#include <cstddef>
#include <filesystem>
#include <vector>

namespace sbam {

// Row-major, channel-interleaved image with pixel values in [0, 1].
struct Image {
  std::size_t width = 0;
  std::size_t height = 0;
  std::size_t channels = 1;  // 1 (gray) or 3 (RGB)
  std::vector<float> pixels;

  Image() = default;
  Image(std::size_t width, std::size_t height, std::size_t channels,
        float fill = 0.0f);
  // Throws ShapeError / ParameterError if the buffer or values are invalid.
  Image(std::size_t width, std::size_t height, std::size_t channels,
        std::vector<float> pixels);

  float& at(std::size_t x, std::size_t y, std::size_t c = 0) {
    return pixels[(y * width + x) * channels + c];
  }
  float at(std::size_t x, std::size_t y, std::size_t c = 0) const {
    return pixels[(y * width + x) * channels + c];
  }

  friend bool operator==(const Image&, const Image&) = default;
};

// Binary netpbm: P5 (gray) and P6 (RGB), maxval 255. Samples map to [0, 1]
// by /255. Throws IoError (naming the path) or FormatError.
Image read_pnm(const std::filesystem::path& path);

// Writes P5 for 1-channel images and P6 for 3-channel ones. Pixels are
// clamped to [0, 1] and rounded to the nearest of 256 levels.
void write_pnm(const std::filesystem::path& path, const Image& image);

}  // namespace sbam

#endif  // SBAM_IMAGE_H_
