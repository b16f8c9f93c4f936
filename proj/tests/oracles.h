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

// Slow, independent reference implementations used only by the tests. Each
// one is written from the formula with plain loops in double precision and
// shares no code with the library kernels it checks.

#ifndef SBAM_TESTS_ORACLES_H_
#define SBAM_TESTS_ORACLES_H_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "sbam/masking.h"
#include "sbam/numerics.h"
#include "sbam/tiny_mae.h"

namespace sbam::oracle {

using Grid = std::vector<std::vector<double>>;

inline Grid matrix(std::size_t rows, std::size_t cols) {
  return Grid(rows, std::vector<double>(cols, 0.0));
}

inline Grid slice(const Mat3& m, std::size_t k) {
  Grid g = matrix(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) g[i][j] = m(k, i, j);
  return g;
}

inline Grid slice(const Mat2& m) {
  Grid g = matrix(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) g[i][j] = m(i, j);
  return g;
}

inline Grid matmul(const Grid& a, const Grid& b) {
  Grid out = matrix(a.size(), b.empty() ? 0 : b[0].size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < out[i].size(); ++j)
      for (std::size_t k = 0; k < b.size(); ++k) out[i][j] += a[i][k] * b[k][j];
  return out;
}

inline Grid transposed(const Grid& a) {
  Grid out = matrix(a.empty() ? 0 : a[0].size(), a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) out[j][i] = a[i][j];
  return out;
}

// Row softmax straight from the definition, exp(a_ij) / sum_k exp(a_ik),
// with the row max factored out of numerator and denominator alike.
inline Grid softmax(const Grid& a) {
  Grid out = a;
  for (auto& row : out) {
    double top = row[0];
    for (double v : row) top = std::max(top, v);
    double total = 0.0;
    for (double v : row) total += std::exp(v - top);
    for (double& v : row) v = std::exp(v - top) / total;
  }
  return out;
}

// Per-sample salience of raw tokens: column sums of the softmaxed affinity,
// then min-max scaled (all zeros when flat).
inline std::vector<double> salience(const Grid& x) {
  const Grid attn = softmax(matmul(x, transposed(x)));
  const std::size_t n = x.size();
  std::vector<double> raw(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) raw[i] += attn[j][i];
  const double lo = *std::min_element(raw.begin(), raw.end());
  const double hi = *std::max_element(raw.begin(), raw.end());
  std::vector<double> out(n, 0.0);
  if (hi > lo)
    for (std::size_t i = 0; i < n; ++i) out[i] = (raw[i] - lo) / (hi - lo);
  return out;
}

// Selection sort by repeated minimum search; picks the lowest index on ties.
inline std::vector<std::size_t> argsort(const std::vector<double>& v) {
  std::vector<bool> used(v.size(), false);
  std::vector<std::size_t> out;
  for (std::size_t step = 0; step < v.size(); ++step) {
    std::size_t best = v.size();
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (used[i]) continue;
      if (best == v.size() || v[i] < v[best]) best = i;
    }
    used[best] = true;
    out.push_back(best);
  }
  return out;
}

// Double-precision copy of every parameter block.
struct Params {
  Grid we, wq, wk, wv, wd;
  std::vector<double> be, mask_token, bd;

  explicit Params(const TinyMaeParams& p)
      : we(slice(p.embed_w)),
        wq(slice(p.attn_q)),
        wk(slice(p.attn_k)),
        wv(slice(p.attn_v)),
        wd(slice(p.decode_w)),
        be(p.embed_b.begin(), p.embed_b.end()),
        mask_token(p.mask_token.begin(), p.mask_token.end()),
        bd(p.decode_b.begin(), p.decode_b.end()) {}

  // Flat views, in the same block order as TinyMaeParams::blocks().
  std::vector<double*> entries() {
    std::vector<double*> out;
    auto add_grid = [&](Grid& g) {
      for (auto& row : g)
        for (double& v : row) out.push_back(&v);
    };
    auto add_vec = [&](std::vector<double>& v) {
      for (double& e : v) out.push_back(&e);
    };
    add_grid(we);
    add_vec(be);
    add_grid(wq);
    add_grid(wk);
    add_grid(wv);
    add_vec(mask_token);
    add_grid(wd);
    add_vec(bd);
    return out;
  }
};

// One sample through embed, mask substitution, single-head attention and
// the linear decoder.
inline Grid forward(const Params& p, const Grid& x,
                    const std::vector<bool>& masked) {
  const std::size_t length = x.size();
  const std::size_t hidden = p.be.size();
  Grid h = matmul(x, p.we);
  for (std::size_t l = 0; l < length; ++l)
    for (std::size_t d = 0; d < hidden; ++d)
      h[l][d] = masked[l] ? p.mask_token[d] : h[l][d] + p.be[d];
  const Grid q = matmul(h, p.wq);
  const Grid k = matmul(h, p.wk);
  const Grid v = matmul(h, p.wv);
  Grid scores = matmul(q, transposed(k));
  const double scale = 1.0 / std::sqrt(static_cast<double>(hidden));
  for (auto& row : scores)
    for (double& s : row) s *= scale;
  Grid y = matmul(matmul(softmax(scores), v), p.wd);
  for (auto& row : y)
    for (std::size_t d = 0; d < row.size(); ++d) row[d] += p.bd[d];
  return y;
}

// Masked reconstruction loss: squared error summed over masked tokens,
// divided by the number of masked tokens.
inline double loss(const std::vector<Grid>& pred,
                   const std::vector<Grid>& target,
                   const std::vector<std::vector<bool>>& masked) {
  double total = 0.0;
  double count = 0.0;
  for (std::size_t n = 0; n < pred.size(); ++n) {
    for (std::size_t l = 0; l < pred[n].size(); ++l) {
      if (!masked[n][l]) continue;
      count += 1.0;
      for (std::size_t d = 0; d < pred[n][l].size(); ++d) {
        const double e = pred[n][l][d] - target[n][l][d];
        total += e * e;
      }
    }
  }
  return total / count;
}

inline std::vector<std::vector<bool>> mask_bits(const MaskSet& m) {
  std::vector<std::vector<bool>> out(m.batch(),
                                     std::vector<bool>(m.length(), false));
  for (std::size_t n = 0; n < m.batch(); ++n)
    for (std::size_t l = 0; l < m.length(); ++l) out[n][l] = m.masked(n, l);
  return out;
}

// End-to-end loss of params on (x, target, mask), all in double.
inline double model_loss(const Params& p, const Mat3& x, const Mat3& target,
                         const MaskSet& m) {
  const auto bits = mask_bits(m);
  std::vector<Grid> pred, tgt;
  for (std::size_t n = 0; n < x.batch(); ++n) {
    pred.push_back(forward(p, slice(x, n), bits[n]));
    tgt.push_back(slice(target, n));
  }
  return loss(pred, tgt, bits);
}

// Central difference of f at *v with step h, restoring *v afterwards.
inline double central_difference(double* v, double h,
                                 const std::function<double()>& f) {
  const double saved = *v;
  *v = saved + h;
  const double up = f();
  *v = saved - h;
  const double down = f();
  *v = saved;
  return (up - down) / (2.0 * h);
}

// |a - b| relative to the larger magnitude, with an absolute floor so that
// gradients that are zero up to rounding compare as equal.
inline double relative_error(double a, double b, double floor = 1e-4) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

}  // namespace sbam::oracle

#endif  // SBAM_TESTS_ORACLES_H_
