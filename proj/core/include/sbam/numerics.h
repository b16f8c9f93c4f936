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

#ifndef SBAM_NUMERICS_H_
#define SBAM_NUMERICS_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "sbam/rng.h"

namespace sbam {

// Dense row-major matrix of 32-bit floats.
class Mat2 {
 public:
  Mat2() = default;
  Mat2(std::size_t rows, std::size_t cols, float fill = 0.0f);
  // Throws ShapeError unless data.size() == rows * cols.
  Mat2(std::size_t rows, std::size_t cols, std::vector<float> data);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }

  float& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  float operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  std::span<float> row(std::size_t i) {
    return {data_.data() + i * cols_, cols_};
  }
  std::span<const float> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }

  std::span<float> data() { return data_; }
  std::span<const float> data() const { return data_; }

  std::string shape_string() const;

  friend bool operator==(const Mat2&, const Mat2&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<float> data_;
};

// Batch of n row-major (rows x cols) slices in one contiguous buffer.
// Houses token batches (N, L, D) and affinity matrices (N, L, L).
class Mat3 {
 public:
  Mat3() = default;
  Mat3(std::size_t n, std::size_t rows, std::size_t cols, float fill = 0.0f);
  // Throws ShapeError unless data.size() == n * rows * cols.
  Mat3(std::size_t n, std::size_t rows, std::size_t cols,
       std::vector<float> data);

  std::size_t batch() const { return n_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }

  float& operator()(std::size_t k, std::size_t i, std::size_t j) {
    return data_[(k * rows_ + i) * cols_ + j];
  }
  float operator()(std::size_t k, std::size_t i, std::size_t j) const {
    return data_[(k * rows_ + i) * cols_ + j];
  }

  std::span<float> slice(std::size_t k) {
    return {data_.data() + k * rows_ * cols_, rows_ * cols_};
  }
  std::span<const float> slice(std::size_t k) const {
    return {data_.data() + k * rows_ * cols_, rows_ * cols_};
  }
  std::span<float> row(std::size_t k, std::size_t i) {
    return {data_.data() + (k * rows_ + i) * cols_, cols_};
  }
  std::span<const float> row(std::size_t k, std::size_t i) const {
    return {data_.data() + (k * rows_ + i) * cols_, cols_};
  }

  std::span<float> data() { return data_; }
  std::span<const float> data() const { return data_; }

  std::string shape_string() const;

  friend bool operator==(const Mat3&, const Mat3&) = default;

 private:
  std::size_t n_ = 0;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<float> data_;
};

// out[k] = a[k] * b[k]. a is (n, L, D), b is (n, D, M). Accumulates in double.
Mat3 bmm(const Mat3& a, const Mat3& b);

// Per-slice transpose: (n, r, c) -> (n, c, r).
Mat3 transpose(const Mat3& a);

// Row-wise softmax with max subtraction; every row of the result sums to 1.
Mat3 softmax_rows(const Mat3& a);

// out(k, i) = sum_j a(k, j, i): one score per column, summed over rows.
Mat2 colsum(const Mat3& a);

// (x - min) / (max - min). A constant vector maps to all zeros.
std::vector<float> minmax_normalize(std::span<const float> v);

// Stable ascending argsort; ties keep ascending original index.
std::vector<std::size_t> argsort_asc(std::span<const float> v);

// rows x cols samples drawn row-major from U[lo, hi). Throws ParameterError
// if lo >= hi.
Mat2 uniform(Rng& rng, std::size_t rows, std::size_t cols, float lo, float hi);

}  // namespace sbam

#endif  // SBAM_NUMERICS_H_
