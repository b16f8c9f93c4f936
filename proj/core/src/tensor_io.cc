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

#include "sbam/tensor_io.h"

#include <algorithm>
#include <array>
#include <bit>
#include <fstream>
#include <functional>
#include <istream>
#include <numeric>
#include <ostream>
#include <string>

#include "sbam/errors.h"

namespace sbam {

namespace {

constexpr std::array<char, 4> kMagic = {'S', 'B', 'T', 'N'};

template <typename T>
void put_le(std::ostream& out, T v) {
  std::array<char, sizeof(T)> bytes;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    bytes[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  }
  out.write(bytes.data(), bytes.size());
}

template <typename T>
T get_le(std::istream& in, const char* what) {
  std::array<unsigned char, sizeof(T)> bytes;
  in.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
  if (in.gcount() != static_cast<std::streamsize>(bytes.size())) {
    throw FormatError(std::string("tensor record truncated in ") + what);
  }
  T v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(bytes[i]) << (8 * i);
  return v;
}

std::uint64_t element_count(std::span<const std::uint64_t> dims) {
  return std::accumulate(dims.begin(), dims.end(), std::uint64_t{1},
                         std::multiplies<>());
}

}  // namespace

void write_tensor(std::ostream& out, const Tensor& t) {
  if (element_count(t.dims) != t.data.size()) {
    throw ShapeError("write_tensor: dims hold " + std::to_string(element_count(t.dims)) +
                     " elements, payload has " + std::to_string(t.data.size()));
  }
  out.write(kMagic.data(), kMagic.size());
  put_le<std::uint32_t>(out, kTensorVersion);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(t.dims.size()));
  for (std::uint64_t d : t.dims) put_le<std::uint64_t>(out, d);
  for (float v : t.data) put_le<std::uint32_t>(out, std::bit_cast<std::uint32_t>(v));
}

bool read_tensor(std::istream& in, Tensor& t) {
  std::array<char, 4> magic;
  in.read(magic.data(), magic.size());
  if (in.gcount() == 0 && in.eof()) return false;
  if (in.gcount() != 4 || magic != kMagic) {
    throw FormatError("tensor record: bad magic (expected SBTN)");
  }
  const auto version = get_le<std::uint32_t>(in, "version");
  if (version != kTensorVersion) {
    throw FormatError("tensor record: unsupported version " + std::to_string(version));
  }
  const auto ndim = get_le<std::uint32_t>(in, "ndim");
  if (ndim > 16) throw FormatError("tensor record: implausible rank " + std::to_string(ndim));
  t.dims.resize(ndim);
  for (auto& d : t.dims) d = get_le<std::uint64_t>(in, "dims");
  const std::uint64_t count = element_count(t.dims);
  if (count > (std::uint64_t{1} << 32)) {
    throw FormatError("tensor record: implausible element count " + std::to_string(count));
  }
  t.data.resize(static_cast<std::size_t>(count));
  for (float& v : t.data) v = std::bit_cast<float>(get_le<std::uint32_t>(in, "payload"));
  return true;
}

std::vector<Tensor> read_tensors(std::istream& in) {
  std::vector<Tensor> out;
  Tensor t;
  while (read_tensor(in, t)) out.push_back(t);
  return out;
}

Tensor to_tensor(const Mat3& m) {
  const auto d = m.data();
  return {{m.batch(), m.rows(), m.cols()}, std::vector<float>(d.begin(), d.end())};
}

Tensor to_tensor(const Mat2& m) {
  const auto d = m.data();
  return {{m.rows(), m.cols()}, std::vector<float>(d.begin(), d.end())};
}

void save_params(const std::filesystem::path& path, const TinyMaeParams& params) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  auto vec = [](std::span<const float> v) {
    return Tensor{{v.size()}, std::vector<float>(v.begin(), v.end())};
  };
  const Tensor records[] = {
      to_tensor(params.embed_w), vec(params.embed_b),    to_tensor(params.attn_q),
      to_tensor(params.attn_k),  to_tensor(params.attn_v), vec(params.mask_token),
      to_tensor(params.decode_w), vec(params.decode_b)};
  for (const Tensor& t : records) write_tensor(out, t);
  if (!out) throw IoError("short write to " + path.string());
}

TinyMaeParams load_params(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  const std::vector<Tensor> tensors = read_tensors(in);
  if (tensors.size() != 8 || tensors[0].dims.size() != 2) {
    throw FormatError(path.string() + ": expected 8 parameter tensors");
  }
  TinyMaeParams params(tensors[0].dims[0], tensors[0].dims[1]);
  auto blocks = params.blocks();
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (tensors[i].data.size() != blocks[i].second.size()) {
      throw FormatError(path.string() + ": block '" + std::string(blocks[i].first) +
                        "' has " + std::to_string(tensors[i].data.size()) +
                        " values, expected " + std::to_string(blocks[i].second.size()));
    }
    std::copy(tensors[i].data.begin(), tensors[i].data.end(), blocks[i].second.begin());
  }
  return params;
}

}  // namespace sbam
