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

#include "sbam/masking.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sbam/errors.h"

namespace sbam {

namespace {

void check_ratio(double gamma, const char* who) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) {
    throw ParameterError(std::string(who) + ": masking ratio must lie in [0,1], got " +
                         std::to_string(gamma));
  }
}

void check_amr_bounds(const MaskingConfig& cfg) {
  if (cfg.base_ratio - cfg.delta_r < 0.0 || cfg.base_ratio + cfg.delta_r > 1.0) {
    throw ConfigError("adaptive ratio range [r - delta_r, r + delta_r] = [" +
                      std::to_string(cfg.base_ratio - cfg.delta_r) + ", " +
                      std::to_string(cfg.base_ratio + cfg.delta_r) +
                      "] leaves [0,1] (ratio=" + std::to_string(cfg.base_ratio) +
                      ", delta-r=" + std::to_string(cfg.delta_r) + ")");
  }
}

}  // namespace

std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::kRandom:
      return "random";
    case Strategy::kSbam:
      return "sbam";
    case Strategy::kSbamAmr:
      return "sbam-amr";
    case Strategy::kSalienceOnly:
      return "salience-only";
  }
  return "unknown";
}

Strategy parse_strategy(std::string_view name) {
  std::string key(name);
  std::replace(key.begin(), key.end(), '_', '-');
  if (key == "random") return Strategy::kRandom;
  if (key == "sbam") return Strategy::kSbam;
  if (key == "sbam-amr") return Strategy::kSbamAmr;
  if (key == "salience-only") return Strategy::kSalienceOnly;
  throw ConfigError("unknown strategy '" + std::string(name) +
                    "' (expected random, sbam, sbam-amr or salience-only)");
}

void MaskingConfig::validate() const {
  if (!(base_ratio >= 0.0 && base_ratio <= 1.0)) {
    throw ConfigError("ratio must lie in [0,1], got " + std::to_string(base_ratio));
  }
  if (!(delta_r >= 0.0)) {
    throw ConfigError("delta-r must be >= 0, got " + std::to_string(delta_r));
  }
  if (!(delta >= 0.0 && delta <= 1.0)) {
    throw ConfigError("delta must lie in [0,1], got " + std::to_string(delta));
  }
  if (!(noise_amplitude >= 0.0f) || !std::isfinite(noise_amplitude)) {
    throw ConfigError("noise must be a finite value >= 0, got " +
                      std::to_string(noise_amplitude));
  }
  if (strategy == Strategy::kSbamAmr) check_amr_bounds(*this);
}

std::size_t MaskSet::masked_count(std::size_t n) const {
  const auto r = row(n);
  return static_cast<std::size_t>(std::count(r.begin(), r.end(), 1));
}

std::size_t MaskSet::total_masked() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), 1));
}

double MaskSet::ratio(std::size_t n) const {
  if (length_ == 0) return 0.0;
  return static_cast<double>(masked_count(n)) / static_cast<double>(length_);
}

std::vector<double> MaskSet::ratios() const {
  std::vector<double> out(batch_);
  for (std::size_t n = 0; n < batch_; ++n) out[n] = ratio(n);
  return out;
}

std::size_t visible_count(std::size_t length, double gamma) {
  const double v = static_cast<double>(length) * (1.0 - gamma);
  const double nearest = std::round(v);
  double k = std::ceil(v);
  if (std::abs(v - nearest) <= 1e-9 * std::max(1.0, std::abs(v))) k = nearest;
  k = std::clamp(k, 0.0, static_cast<double>(length));
  return static_cast<std::size_t>(k);
}

MaskSet random_mask(std::size_t batch, std::size_t length, double gamma,
                    Rng& rng) {
  check_ratio(gamma, "random_mask");
  const std::size_t m = masked_count(length, gamma);
  MaskSet out(batch, length);
  std::vector<std::size_t> perm(length);
  for (std::size_t n = 0; n < batch; ++n) {
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    // Partial Fisher-Yates: the first m entries are a uniform m-subset.
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t j = i + rng.below(length - i);
      std::swap(perm[i], perm[j]);
      out.set(n, perm[i], true);
    }
  }
  return out;
}

MaskSet sbam_mask(const SalienceMap& s, std::span<const double> gammas,
                  bool invert_selection) {
  if (!s.adjusted) {
    throw ParameterError("sbam_mask: salience map has no adjusted scores");
  }
  const Mat2& adj = *s.adjusted;
  if (gammas.size() != adj.rows()) {
    throw ShapeError("sbam_mask: " + std::to_string(gammas.size()) +
                     " ratios for " + std::to_string(adj.rows()) + " samples");
  }
  const std::size_t length = adj.cols();
  MaskSet out(adj.rows(), length);
  for (std::size_t n = 0; n < adj.rows(); ++n) {
    check_ratio(gammas[n], "sbam_mask");
    const std::size_t k = visible_count(length, gammas[n]);
    const auto order = argsort_asc(adj.row(n));
    // Ascending order: low-salience tokens first.
    const std::size_t first_masked = invert_selection ? 0 : k;
    const std::size_t last_masked = invert_selection ? length - k : length;
    for (std::size_t i = first_masked; i < last_masked; ++i) {
      out.set(n, order[i], true);
    }
  }
  return out;
}

std::vector<double> amr_ratio(const SalienceMap& s, const MaskingConfig& cfg) {
  check_amr_bounds(cfg);
  const std::size_t length = s.length();
  std::vector<double> out(s.batch());
  for (std::size_t n = 0; n < s.batch(); ++n) {
    const auto row = s.scores.row(n);
    const auto above = std::count_if(row.begin(), row.end(), [&](float v) {
      return static_cast<double>(v) > cfg.delta;
    });
    const double frac =
        length == 0 ? 0.0 : static_cast<double>(above) / static_cast<double>(length);
    const double lo = cfg.base_ratio - cfg.delta_r;
    const double hi = cfg.base_ratio + cfg.delta_r;
    out[n] = std::clamp(lo + 2.0 * cfg.delta_r * frac, lo, hi);
  }
  return out;
}

MaskPlan make_mask(const SalienceMap& salience, const MaskingConfig& cfg,
                   Rng& rng) {
  cfg.validate();
  const std::size_t batch = salience.batch();
  MaskPlan plan;
  switch (cfg.strategy) {
    case Strategy::kRandom:
      plan.ratios.assign(batch, cfg.base_ratio);
      plan.mask = random_mask(batch, salience.length(), cfg.base_ratio, rng);
      plan.salience = salience;
      return plan;
    case Strategy::kSbam:
      plan.ratios.assign(batch, cfg.base_ratio);
      plan.salience = adjust_with_noise(salience, rng, cfg.noise_amplitude);
      break;
    case Strategy::kSalienceOnly:
      plan.ratios.assign(batch, cfg.base_ratio);
      plan.salience = adjust_with_noise(salience, rng, 0.0f);
      break;
    case Strategy::kSbamAmr:
      plan.ratios = amr_ratio(salience, cfg);
      plan.salience = adjust_with_noise(salience, rng, cfg.noise_amplitude);
      break;
  }
  plan.mask = sbam_mask(plan.salience, plan.ratios, cfg.invert_selection);
  return plan;
}

MaskPlan make_mask(const TokenBatch& x, const MaskingConfig& cfg, Rng& rng) {
  return make_mask(token_salience(x), cfg, rng);
}

MaskedTokens apply_mask(const TokenBatch& x, const MaskSet& m) {
  if (m.batch() != x.batch() || m.length() != x.length()) {
    throw ShapeError("apply_mask: mask (" + std::to_string(m.batch()) + "," +
                     std::to_string(m.length()) + ") does not match tokens " +
                     x.tokens.shape_string());
  }
  MaskedTokens out;
  out.length = x.length();
  out.dims = x.dims();
  out.visible.resize(x.batch());
  out.visible_positions.resize(x.batch());
  out.mask_positions.resize(x.batch());
  for (std::size_t n = 0; n < x.batch(); ++n) {
    for (std::size_t l = 0; l < x.length(); ++l) {
      if (m.masked(n, l)) {
        out.mask_positions[n].push_back(l);
      } else {
        out.visible_positions[n].push_back(l);
        const auto tok = x.tokens.row(n, l);
        out.visible[n].insert(out.visible[n].end(), tok.begin(), tok.end());
      }
    }
  }
  return out;
}

Mat3 scatter(const MaskedTokens& masked, std::span<const float> fill) {
  if (fill.size() != masked.dims) {
    throw ShapeError("scatter: fill has " + std::to_string(fill.size()) +
                     " values, tokens have " + std::to_string(masked.dims));
  }
  const std::size_t batch = masked.visible.size();
  Mat3 out(batch, masked.length, masked.dims);
  for (std::size_t n = 0; n < batch; ++n) {
    const auto& pos = masked.visible_positions[n];
    for (std::size_t i = 0; i < pos.size(); ++i) {
      std::copy_n(masked.visible[n].begin() +
                      static_cast<std::ptrdiff_t>(i * masked.dims),
                  masked.dims, out.row(n, pos[i]).begin());
    }
    for (std::size_t l : masked.mask_positions[n]) {
      std::copy(fill.begin(), fill.end(), out.row(n, l).begin());
    }
  }
  return out;
}

}  // namespace sbam
