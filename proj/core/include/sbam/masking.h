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

#ifndef SBAM_MASKING_H_
#define SBAM_MASKING_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sbam/rng.h"
#include "sbam/salience.h"
#include "sbam/tokenize.h"

namespace sbam {

enum class Strategy {
  kRandom,        // uniform masking, fixed ratio
  kSbam,          // mask the highest noise-adjusted salience tokens
  kSbamAmr,       // SBAM with a per-sample adaptive ratio
  kSalienceOnly,  // SBAM with the noise amplitude forced to zero
};

// Canonical names use dashes ("sbam-amr"); underscores are also accepted.
std::string_view to_string(Strategy s);
// Throws ConfigError for unknown names.
Strategy parse_strategy(std::string_view name);

struct MaskingConfig {
  double base_ratio = 0.75;  // r, also the fixed ratio of non-adaptive modes
  double delta_r = 0.15;     // half-width of the adaptive ratio range
  double delta = 0.1;        // salience threshold for the adaptive ratio
  float noise_amplitude = 0.5f;
  std::uint64_t seed = 0;
  Strategy strategy = Strategy::kSbam;
  // Keep the K highest-salience tokens visible instead of the K lowest.
  bool invert_selection = false;

  // Throws ConfigError. The r - delta_r >= 0, r + delta_r <= 1 bounds are
  // enforced only for kSbamAmr, the one strategy that uses them.
  void validate() const;
};

// Binary mask, 1 = masked, 0 = visible. Per-sample ratios are derived from
// the stored bits, so ratio(n) == masked_count(n) / L always holds.
class MaskSet {
 public:
  MaskSet() = default;
  MaskSet(std::size_t batch, std::size_t length)
      : batch_(batch), length_(length), bits_(batch * length, 0) {}

  std::size_t batch() const { return batch_; }
  std::size_t length() const { return length_; }

  bool masked(std::size_t n, std::size_t l) const {
    return bits_[n * length_ + l] != 0;
  }
  void set(std::size_t n, std::size_t l, bool masked) {
    bits_[n * length_ + l] = masked ? 1 : 0;
  }
  std::span<const std::uint8_t> row(std::size_t n) const {
    return {bits_.data() + n * length_, length_};
  }

  std::size_t masked_count(std::size_t n) const;
  std::size_t total_masked() const;
  double ratio(std::size_t n) const;
  std::vector<double> ratios() const;

  friend bool operator==(const MaskSet&, const MaskSet&) = default;

 private:
  std::size_t batch_ = 0;
  std::size_t length_ = 0;
  std::vector<std::uint8_t> bits_;
};

// Visible token count K = ceil(L * (1 - gamma)). The product is snapped to
// the nearest integer when within 1e-9 relative of it, so decimal ratios such
// as 0.1 do not gain a spurious extra visible token from binary rounding.
std::size_t visible_count(std::size_t length, double gamma);
inline std::size_t masked_count(std::size_t length, double gamma) {
  return length - visible_count(length, gamma);
}

// Masks exactly masked_count(L, gamma) tokens per sample, chosen uniformly
// without replacement. Throws ParameterError unless 0 <= gamma <= 1.
MaskSet random_mask(std::size_t batch, std::size_t length, double gamma,
                    Rng& rng);

// For sample n keeps the K_n = visible_count(L, gammas[n]) tokens with the
// lowest adjusted salience visible and masks the rest; ties resolve by
// ascending index. With invert_selection the K_n highest are kept instead.
// Throws ParameterError if s.adjusted is absent or a ratio is outside [0, 1],
// ShapeError if gammas.size() != N.
MaskSet sbam_mask(const SalienceMap& s, std::span<const double> gammas,
                  bool invert_selection = false);

// Adaptive ratio per sample: r - dr + 2 dr * mean(scores > delta).
// Throws ConfigError if r -/+ dr leaves [0, 1].
std::vector<double> amr_ratio(const SalienceMap& s, const MaskingConfig& cfg);

// Result of running a full strategy.
struct MaskPlan {
  MaskSet mask;
  SalienceMap salience;       // scores, plus adjusted when noise was applied
  std::vector<double> ratios; // requested ratio per sample
};

// Runs cfg.strategy on precomputed salience. Random masking draws from rng
// only; SBAM variants draw N*L noise samples (none when the amplitude is 0).
MaskPlan make_mask(const SalienceMap& salience, const MaskingConfig& cfg,
                   Rng& rng);
// Convenience overload computing salience on x first.
MaskPlan make_mask(const TokenBatch& x, const MaskingConfig& cfg, Rng& rng);

// Visible tokens per sample in original order, plus the positions needed to
// scatter them back.
struct MaskedTokens {
  std::size_t length = 0;
  std::size_t dims = 0;
  std::vector<std::vector<float>> visible;  // per sample, rows of length dims
  std::vector<std::vector<std::size_t>> visible_positions;
  std::vector<std::vector<std::size_t>> mask_positions;
};

// Throws ShapeError if the mask and batch shapes differ.
MaskedTokens apply_mask(const TokenBatch& x, const MaskSet& m);

// Rebuilds (N, L, D) with visible tokens at their positions and fill at every
// masked slot. Throws ShapeError if fill.size() != dims.
Mat3 scatter(const MaskedTokens& masked, std::span<const float> fill);

}  // namespace sbam

#endif  // SBAM_MASKING_H_
