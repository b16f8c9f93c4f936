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

#include "sbam/tiny_mae.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "sbam/errors.h"

namespace sbam {

namespace {

using Buffer = std::vector<double>;

Buffer to_double(std::span<const float> v) { return Buffer(v.begin(), v.end()); }

// c(m, n) = a(m, k) * b(k, n)
void matmul(const Buffer& a, const Buffer& b, Buffer& c, std::size_t m,
            std::size_t k, std::size_t n) {
  c.assign(m * n, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t p = 0; p < k; ++p) {
      const double av = a[i * k + p];
      const double* brow = &b[p * n];
      double* crow = &c[i * n];
      for (std::size_t j = 0; j < n; ++j) crow[j] += av * brow[j];
    }
  }
}

// c(m, p) = a(m, k) * b(p, k)^T
void matmul_nt(const Buffer& a, const Buffer& b, Buffer& c, std::size_t m,
               std::size_t k, std::size_t p) {
  c.assign(m * p, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < p; ++j) {
      double s = 0.0;
      for (std::size_t q = 0; q < k; ++q) s += a[i * k + q] * b[j * k + q];
      c[i * p + j] = s;
    }
  }
}

// c(k, n) += a(m, k)^T * b(m, n)
void accumulate_tn(const Buffer& a, const Buffer& b, Buffer& c, std::size_t m,
                   std::size_t k, std::size_t n) {
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t i = 0; i < k; ++i) {
      const double av = a[r * k + i];
      if (av == 0.0) continue;
      const double* brow = &b[r * n];
      double* crow = &c[i * n];
      for (std::size_t j = 0; j < n; ++j) crow[j] += av * brow[j];
    }
  }
}

void add_row_sums(const Buffer& g, Buffer& bias, std::size_t rows,
                  std::size_t cols) {
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t j = 0; j < cols; ++j) bias[j] += g[r * cols + j];
  }
}

void store(const Buffer& src, std::span<float> dst) {
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = static_cast<float>(src[i]);
}

void fill_uniform(std::span<float> dst, Rng& rng, float bound) {
  for (float& v : dst) v = rng.uniform(-bound, bound);
}

}  // namespace

TinyMaeParams::TinyMaeParams(std::size_t input_dims, std::size_t hidden_dims)
    : embed_w(input_dims, hidden_dims),
      embed_b(hidden_dims, 0.0f),
      attn_q(hidden_dims, hidden_dims),
      attn_k(hidden_dims, hidden_dims),
      attn_v(hidden_dims, hidden_dims),
      mask_token(hidden_dims, 0.0f),
      decode_w(hidden_dims, input_dims),
      decode_b(input_dims, 0.0f) {}

TinyMaeParams TinyMaeParams::init(std::size_t input_dims,
                                  std::size_t hidden_dims, Rng& rng) {
  if (input_dims == 0 || hidden_dims == 0) {
    throw ParameterError("TinyMaeParams::init: dimensions must be positive");
  }
  TinyMaeParams p(input_dims, hidden_dims);
  const float in_bound = 1.0f / std::sqrt(static_cast<float>(input_dims));
  const float hid_bound = 1.0f / std::sqrt(static_cast<float>(hidden_dims));
  fill_uniform(p.embed_w.data(), rng, in_bound);
  fill_uniform(p.attn_q.data(), rng, hid_bound);
  fill_uniform(p.attn_k.data(), rng, hid_bound);
  fill_uniform(p.attn_v.data(), rng, hid_bound);
  fill_uniform(p.mask_token, rng, 0.02f);
  fill_uniform(p.decode_w.data(), rng, hid_bound);
  return p;
}

std::vector<std::pair<std::string_view, std::span<float>>>
TinyMaeParams::blocks() {
  return {{"embed_w", embed_w.data()},   {"embed_b", embed_b},
          {"attn_q", attn_q.data()},     {"attn_k", attn_k.data()},
          {"attn_v", attn_v.data()},     {"mask_token", mask_token},
          {"decode_w", decode_w.data()}, {"decode_b", decode_b}};
}

std::vector<std::pair<std::string_view, std::span<const float>>>
TinyMaeParams::blocks() const {
  return {{"embed_w", embed_w.data()},   {"embed_b", embed_b},
          {"attn_q", attn_q.data()},     {"attn_k", attn_k.data()},
          {"attn_v", attn_v.data()},     {"mask_token", mask_token},
          {"decode_w", decode_w.data()}, {"decode_b", decode_b}};
}

bool TinyMaeParams::all_finite() const {
  for (const auto& [name, block] : blocks()) {
    for (float v : block) {
      if (!std::isfinite(v)) return false;
    }
  }
  return true;
}

ForwardResult forward(const TinyMaeParams& params, const Mat3& x,
                      const MaskSet& mask) {
  const std::size_t d_in = params.input_dims();
  const std::size_t d_h = params.hidden_dims();
  if (x.cols() != d_in) {
    throw ShapeError("forward: tokens " + x.shape_string() + " but model expects " +
                     std::to_string(d_in) + " input dims");
  }
  if (mask.batch() != x.batch() || mask.length() != x.rows()) {
    throw ShapeError("forward: mask (" + std::to_string(mask.batch()) + "," +
                     std::to_string(mask.length()) + ") vs tokens " +
                     x.shape_string());
  }
  const std::size_t length = x.rows();
  const double scale = 1.0 / std::sqrt(static_cast<double>(d_h));

  const Buffer we = to_double(params.embed_w.data());
  const Buffer wq = to_double(params.attn_q.data());
  const Buffer wk = to_double(params.attn_k.data());
  const Buffer wv = to_double(params.attn_v.data());
  const Buffer wd = to_double(params.decode_w.data());

  ForwardResult result;
  ForwardCache& cache = result.cache;
  cache.length = length;
  cache.input_dims = d_in;
  cache.hidden_dims = d_h;
  cache.mask = mask;
  cache.samples.resize(x.batch());
  result.pred = Mat3(x.batch(), length, d_in);

  Buffer embedded;
  Buffer scores;
  for (std::size_t n = 0; n < x.batch(); ++n) {
    ForwardCache::Sample& s = cache.samples[n];
    s.input = to_double(x.slice(n));
    matmul(s.input, we, embedded, length, d_in, d_h);
    s.hidden.resize(length * d_h);
    for (std::size_t l = 0; l < length; ++l) {
      for (std::size_t j = 0; j < d_h; ++j) {
        s.hidden[l * d_h + j] = mask.masked(n, l)
                                    ? static_cast<double>(params.mask_token[j])
                                    : embedded[l * d_h + j] + params.embed_b[j];
      }
    }
    matmul(s.hidden, wq, s.query, length, d_h, d_h);
    matmul(s.hidden, wk, s.key, length, d_h, d_h);
    matmul(s.hidden, wv, s.value, length, d_h, d_h);
    matmul_nt(s.query, s.key, scores, length, d_h, length);
    s.attn.resize(length * length);
    for (std::size_t i = 0; i < length; ++i) {
      double mx = -INFINITY;
      for (std::size_t j = 0; j < length; ++j) {
        mx = std::max(mx, scores[i * length + j] * scale);
      }
      double sum = 0.0;
      for (std::size_t j = 0; j < length; ++j) {
        const double e = std::exp(scores[i * length + j] * scale - mx);
        s.attn[i * length + j] = e;
        sum += e;
      }
      for (std::size_t j = 0; j < length; ++j) s.attn[i * length + j] /= sum;
    }
    matmul(s.attn, s.value, s.mixed, length, length, d_h);
    matmul(s.mixed, wd, s.output, length, d_h, d_in);
    for (std::size_t l = 0; l < length; ++l) {
      for (std::size_t j = 0; j < d_in; ++j) {
        s.output[l * d_in + j] += params.decode_b[j];
      }
    }
    store(s.output, result.pred.slice(n));
  }
  return result;
}

TinyMaeParams backward(const TinyMaeParams& params, const ForwardCache& cache,
                       const Mat3& dpred) {
  const std::size_t length = cache.length;
  const std::size_t d_in = cache.input_dims;
  const std::size_t d_h = cache.hidden_dims;
  if (dpred.batch() != cache.samples.size() || dpred.rows() != length ||
      dpred.cols() != d_in) {
    throw ShapeError("backward: upstream gradient " + dpred.shape_string() +
                     " does not match forward output (" +
                     std::to_string(cache.samples.size()) + "," +
                     std::to_string(length) + "," + std::to_string(d_in) + ")");
  }
  if (params.input_dims() != d_in || params.hidden_dims() != d_h) {
    throw ShapeError("backward: parameters do not match cached forward pass");
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>(d_h));

  const Buffer wq = to_double(params.attn_q.data());
  const Buffer wk = to_double(params.attn_k.data());
  const Buffer wv = to_double(params.attn_v.data());
  const Buffer wd = to_double(params.decode_w.data());

  Buffer g_we(d_in * d_h, 0.0), g_be(d_h, 0.0);
  Buffer g_wq(d_h * d_h, 0.0), g_wk(d_h * d_h, 0.0), g_wv(d_h * d_h, 0.0);
  Buffer g_tok(d_h, 0.0);
  Buffer g_wd(d_h * d_in, 0.0), g_bd(d_in, 0.0);

  Buffer d_mixed, d_attn, d_value, d_query, d_key, d_hidden, tmp;
  Buffer d_scores(length * length);
  Buffer d_embed(length * d_h);
  for (std::size_t n = 0; n < cache.samples.size(); ++n) {
    const ForwardCache::Sample& s = cache.samples[n];
    const Buffer g = to_double(dpred.slice(n));

    accumulate_tn(s.mixed, g, g_wd, length, d_h, d_in);
    add_row_sums(g, g_bd, length, d_in);
    matmul_nt(g, wd, d_mixed, length, d_in, d_h);

    matmul_nt(d_mixed, s.value, d_attn, length, d_h, length);
    d_value.assign(length * d_h, 0.0);
    accumulate_tn(s.attn, d_mixed, d_value, length, length, d_h);

    // Softmax Jacobian, row by row, folded with the 1/sqrt(D_h) scale.
    for (std::size_t i = 0; i < length; ++i) {
      double dot = 0.0;
      for (std::size_t j = 0; j < length; ++j) {
        dot += s.attn[i * length + j] * d_attn[i * length + j];
      }
      for (std::size_t j = 0; j < length; ++j) {
        d_scores[i * length + j] =
            s.attn[i * length + j] * (d_attn[i * length + j] - dot) * scale;
      }
    }
    matmul(d_scores, s.key, d_query, length, length, d_h);
    d_key.assign(length * d_h, 0.0);
    accumulate_tn(d_scores, s.query, d_key, length, length, d_h);

    accumulate_tn(s.hidden, d_query, g_wq, length, d_h, d_h);
    accumulate_tn(s.hidden, d_key, g_wk, length, d_h, d_h);
    accumulate_tn(s.hidden, d_value, g_wv, length, d_h, d_h);

    matmul_nt(d_query, wq, d_hidden, length, d_h, d_h);
    matmul_nt(d_key, wk, tmp, length, d_h, d_h);
    for (std::size_t i = 0; i < d_hidden.size(); ++i) d_hidden[i] += tmp[i];
    matmul_nt(d_value, wv, tmp, length, d_h, d_h);
    for (std::size_t i = 0; i < d_hidden.size(); ++i) d_hidden[i] += tmp[i];

    for (std::size_t l = 0; l < length; ++l) {
      const bool masked = cache.mask.masked(n, l);
      for (std::size_t j = 0; j < d_h; ++j) {
        const double v = d_hidden[l * d_h + j];
        if (masked) {
          g_tok[j] += v;
          d_embed[l * d_h + j] = 0.0;
        } else {
          d_embed[l * d_h + j] = v;
        }
      }
    }
    accumulate_tn(s.input, d_embed, g_we, length, d_in, d_h);
    add_row_sums(d_embed, g_be, length, d_h);
  }

  TinyMaeParams grads(d_in, d_h);
  store(g_we, grads.embed_w.data());
  store(g_be, grads.embed_b);
  store(g_wq, grads.attn_q.data());
  store(g_wk, grads.attn_k.data());
  store(g_wv, grads.attn_v.data());
  store(g_tok, grads.mask_token);
  store(g_wd, grads.decode_w.data());
  store(g_bd, grads.decode_b);
  return grads;
}

}  // namespace sbam
