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

#include "sbam/numerics.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

#include "sbam/errors.h"

namespace sbam {

Mat2::Mat2(std::size_t rows, std::size_t cols, float fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Mat2::Mat2(std::size_t rows, std::size_t cols, std::vector<float> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw ShapeError("Mat2" + shape_string() + ": buffer holds " +
                     std::to_string(data_.size()) + " elements");
  }
}

std::string Mat2::shape_string() const {
  return "(" + std::to_string(rows_) + "," + std::to_string(cols_) + ")";
}

Mat3::Mat3(std::size_t n, std::size_t rows, std::size_t cols, float fill)
    : n_(n), rows_(rows), cols_(cols), data_(n * rows * cols, fill) {}

Mat3::Mat3(std::size_t n, std::size_t rows, std::size_t cols,
           std::vector<float> data)
    : n_(n), rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != n_ * rows_ * cols_) {
    throw ShapeError("Mat3" + shape_string() + ": buffer holds " +
                     std::to_string(data_.size()) + " elements");
  }
}

std::string Mat3::shape_string() const {
  return "(" + std::to_string(n_) + "," + std::to_string(rows_) + "," +
         std::to_string(cols_) + ")";
}

Mat3 bmm(const Mat3& a, const Mat3& b) {
  if (a.batch() != b.batch() || a.cols() != b.rows()) {
    throw ShapeError("bmm: cannot multiply " + a.shape_string() + " by " +
                     b.shape_string());
  }
  const std::size_t n = a.batch();
  const std::size_t rows = a.rows();
  const std::size_t inner = a.cols();
  const std::size_t cols = b.cols();
  Mat3 out(n, rows, cols);
  std::vector<double> acc(cols);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < rows; ++i) {
      std::fill(acc.begin(), acc.end(), 0.0);
      for (std::size_t p = 0; p < inner; ++p) {
        const double lhs = a(k, i, p);
        const auto brow = b.row(k, p);
        for (std::size_t j = 0; j < cols; ++j) acc[j] += lhs * brow[j];
      }
      auto orow = out.row(k, i);
      for (std::size_t j = 0; j < cols; ++j) {
        orow[j] = static_cast<float>(acc[j]);
      }
    }
  }
  return out;
}

Mat3 transpose(const Mat3& a) {
  Mat3 out(a.batch(), a.cols(), a.rows());
  for (std::size_t k = 0; k < a.batch(); ++k) {
    for (std::size_t i = 0; i < a.rows(); ++i) {
      for (std::size_t j = 0; j < a.cols(); ++j) out(k, j, i) = a(k, i, j);
    }
  }
  return out;
}

Mat3 softmax_rows(const Mat3& a) {
  Mat3 out(a.batch(), a.rows(), a.cols());
  std::vector<double> e(a.cols());
  for (std::size_t k = 0; k < a.batch(); ++k) {
    for (std::size_t i = 0; i < a.rows(); ++i) {
      const auto in = a.row(k, i);
      if (in.empty()) continue;
      const float mx = *std::max_element(in.begin(), in.end());
      double sum = 0.0;
      for (std::size_t j = 0; j < in.size(); ++j) {
        e[j] = std::exp(static_cast<double>(in[j]) - mx);
        sum += e[j];
      }
      auto orow = out.row(k, i);
      for (std::size_t j = 0; j < in.size(); ++j) {
        orow[j] = static_cast<float>(e[j] / sum);
      }
    }
  }
  return out;
}

Mat2 colsum(const Mat3& a) {
  Mat2 out(a.batch(), a.cols());
  std::vector<double> acc(a.cols());
  for (std::size_t k = 0; k < a.batch(); ++k) {
    std::fill(acc.begin(), acc.end(), 0.0);
    for (std::size_t j = 0; j < a.rows(); ++j) {
      const auto r = a.row(k, j);
      for (std::size_t i = 0; i < r.size(); ++i) acc[i] += r[i];
    }
    for (std::size_t i = 0; i < acc.size(); ++i) {
      out(k, i) = static_cast<float>(acc[i]);
    }
  }
  return out;
}

std::vector<float> minmax_normalize(std::span<const float> v) {
  std::vector<float> out(v.size(), 0.0f);
  if (v.empty()) return out;
  const auto [lo_it, hi_it] = std::minmax_element(v.begin(), v.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  if (!(hi > lo)) return out;
  const double range = hi - lo;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i] = static_cast<float>((v[i] - lo) / range);
  }
  return out;
}

std::vector<std::size_t> argsort_asc(std::span<const float> v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  return idx;
}

Mat2 uniform(Rng& rng, std::size_t rows, std::size_t cols, float lo, float hi) {
  if (!(lo < hi)) {
    throw ParameterError("uniform: lo (" + std::to_string(lo) +
                         ") must be below hi (" + std::to_string(hi) + ")");
  }
  Mat2 out(rows, cols);
  for (float& x : out.data()) x = rng.uniform(lo, hi);
  return out;
}

}  // namespace sbam
