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

#ifndef SBAM_TENSOR_IO_H_
#define SBAM_TENSOR_IO_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "sbam/numerics.h"
#include "sbam/tiny_mae.h"

namespace sbam {

// Binary tensor container. One record is
//
//   "SBTN"                 4 bytes magic
//   version                u32 little-endian (currently 1)
//   ndim                   u32 little-endian
//   dims[ndim]             u64 little-endian each
//   payload[prod(dims)]    f32 little-endian, row-major
//
// Files may hold several records back to back.
struct Tensor {
  std::vector<std::uint64_t> dims;
  std::vector<float> data;

  friend bool operator==(const Tensor&, const Tensor&) = default;
};

inline constexpr std::uint32_t kTensorVersion = 1;

// Throws ShapeError if data.size() != prod(dims).
void write_tensor(std::ostream& out, const Tensor& t);
// Returns false on clean end of stream before a record starts; throws
// FormatError on a bad magic, version or truncated record.
bool read_tensor(std::istream& in, Tensor& t);
std::vector<Tensor> read_tensors(std::istream& in);

Tensor to_tensor(const Mat3& m);
Tensor to_tensor(const Mat2& m);

// Model parameters as eight records in TinyMaeParams::blocks() order;
// matrices are rank 2, vectors rank 1. Throws IoError / FormatError.
void save_params(const std::filesystem::path& path, const TinyMaeParams& params);
TinyMaeParams load_params(const std::filesystem::path& path);

}  // namespace sbam

#endif  // SBAM_TENSOR_IO_H_
