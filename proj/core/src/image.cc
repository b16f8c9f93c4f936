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

#include "sbam/image.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <string>
#include <utility>

#include "sbam/errors.h"

namespace sbam {

namespace {

void check_channels(std::size_t channels) {
  if (channels != 1 && channels != 3) {
    throw ParameterError("image channels must be 1 or 3, got " +
                         std::to_string(channels));
  }
}

// Reads one whitespace-delimited header token, skipping '#' comments.
std::string next_token(const std::string& bytes, std::size_t& pos,
                       const std::string& where) {
  for (;;) {
    while (pos < bytes.size() &&
           std::isspace(static_cast<unsigned char>(bytes[pos]))) {
      ++pos;
    }
    if (pos < bytes.size() && bytes[pos] == '#') {
      while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      continue;
    }
    break;
  }
  const std::size_t start = pos;
  while (pos < bytes.size() &&
         !std::isspace(static_cast<unsigned char>(bytes[pos]))) {
    ++pos;
  }
  if (start == pos) throw FormatError(where + ": truncated header");
  return bytes.substr(start, pos - start);
}

std::size_t parse_dim(const std::string& tok, const std::string& where) {
  if (tok.empty() ||
      !std::all_of(tok.begin(), tok.end(),
                   [](unsigned char c) { return std::isdigit(c); })) {
    throw FormatError(where + ": bad header field '" + tok + "'");
  }
  return std::stoul(tok);
}

}  // namespace

Image::Image(std::size_t w, std::size_t h, std::size_t c, float fill)
    : width(w), height(h), channels(c), pixels(w * h * c, fill) {
  check_channels(c);
}

Image::Image(std::size_t w, std::size_t h, std::size_t c,
             std::vector<float> px)
    : width(w), height(h), channels(c), pixels(std::move(px)) {
  check_channels(c);
  if (pixels.size() != w * h * c) {
    throw ShapeError("image " + std::to_string(w) + "x" + std::to_string(h) +
                     "x" + std::to_string(c) + " needs " +
                     std::to_string(w * h * c) + " pixels, got " +
                     std::to_string(pixels.size()));
  }
  for (float p : pixels) {
    if (!(p >= 0.0f && p <= 1.0f)) {
      throw ParameterError("image pixel outside [0,1]: " + std::to_string(p));
    }
  }
}

Image read_pnm(const std::filesystem::path& path) {
  const std::string where = path.string();
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + where);
  const std::string bytes((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());
  if (bytes.size() < 2 || bytes[0] != 'P' ||
      (bytes[1] != '5' && bytes[1] != '6')) {
    throw FormatError(where + ": expected P5 or P6 magic");
  }
  const std::size_t channels = bytes[1] == '5' ? 1 : 3;
  std::size_t pos = 2;
  const std::size_t width = parse_dim(next_token(bytes, pos, where), where);
  const std::size_t height = parse_dim(next_token(bytes, pos, where), where);
  const std::size_t maxval = parse_dim(next_token(bytes, pos, where), where);
  if (maxval != 255) {
    throw FormatError(where + ": only maxval 255 is supported, got " +
                      std::to_string(maxval));
  }
  if (width == 0 || height == 0) throw FormatError(where + ": empty image");
  // Exactly one whitespace byte separates the header from the raster.
  ++pos;
  const std::size_t count = width * height * channels;
  if (bytes.size() < pos + count) {
    throw FormatError(where + ": raster truncated (" +
                      std::to_string(bytes.size() - std::min(pos, bytes.size())) +
                      " of " + std::to_string(count) + " bytes)");
  }
  std::vector<float> px(count);
  for (std::size_t i = 0; i < count; ++i) {
    px[i] = static_cast<float>(static_cast<unsigned char>(bytes[pos + i])) /
            255.0f;
  }
  return Image(width, height, channels, std::move(px));
}

void write_pnm(const std::filesystem::path& path, const Image& image) {
  check_channels(image.channels);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << (image.channels == 1 ? "P5" : "P6") << '\n'
      << image.width << ' ' << image.height << "\n255\n";
  std::string raster(image.pixels.size(), '\0');
  for (std::size_t i = 0; i < image.pixels.size(); ++i) {
    const float v = std::clamp(image.pixels[i], 0.0f, 1.0f);
    raster[i] = static_cast<char>(
        static_cast<unsigned char>(std::lround(v * 255.0f)));
  }
  out.write(raster.data(), static_cast<std::streamsize>(raster.size()));
  if (!out) throw IoError("short write to " + path.string());
}

}  // namespace sbam
