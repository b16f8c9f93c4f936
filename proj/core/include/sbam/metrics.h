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

#ifndef SBAM_METRICS_H_
#define SBAM_METRICS_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "sbam/image.h"
#include "sbam/masking.h"
#include "sbam/trainer.h"

namespace sbam {

struct SweepPoint {
  double ratio = 0.0;
  double performance = 0.0;
  friend bool operator==(const SweepPoint&, const SweepPoint&) = default;
};

// Performance of one model over a masking-ratio sweep.
struct SweepRecord {
  std::string model_name;
  std::vector<SweepPoint> points;

  // Throws ParameterError unless there are >= 2 points with strictly
  // increasing ratios.
  void validate() const;
  friend bool operator==(const SweepRecord&, const SweepRecord&) = default;
};

struct PimrPoint {
  double ratio = 0.0;
  double value = 0.0;
};

// Which performance anchors the bottom of the PIMR scale.
enum class PimrBaseline {
  kObservedMin,  // minimum observed performance (values in [0, 1])
  kLowestRatio,  // performance at the lowest ratio (values may be negative)
};

// (P(M) - P_lo) / (P_max - P_lo) with the record's own max as the top.
// Throws DegenerateSweepError when the denominator is zero.
std::vector<PimrPoint> pimr(const SweepRecord& rec,
                            PimrBaseline baseline = PimrBaseline::kObservedMin);

// Same normalisation with min and max pooled over every record.
std::vector<std::vector<PimrPoint>> global_pimr(
    std::span<const SweepRecord> recs);

// One trained cell per (strategy, ratio). Each strategy's base_ratio is
// replaced by the swept ratio. Performance is the negated masked
// reconstruction loss on `holdout`, measured with `eval_masking` drawn from a
// fixed seed so that every cell faces the same evaluation masks.
struct SweepPlan {
  std::vector<MaskingConfig> strategies;
  std::vector<double> ratios;
  TrainConfig train;
  MaskingConfig eval_masking{.base_ratio = 0.5, .strategy = Strategy::kRandom};
  std::size_t threads = 1;  // 0 = hardware concurrency
};

// Throws ParameterError for fewer than two ratios; trainer errors propagate.
// Results do not depend on the thread count.
std::vector<SweepRecord> sweep(const SweepPlan& plan,
                               std::span<const Image> train_data,
                               std::span<const Image> holdout);

// Label used for a strategy in sweep output ("sbam", "random-inv", ...).
std::string model_label(const MaskingConfig& cfg);

// CSV with header comment "# performance=neg_holdout_loss" and columns
// model,ratio,performance,pimr,global_pimr. Numbers use shortest round-trip
// formatting so reading the file back reproduces every double exactly.
struct SweepRow {
  std::string model;
  double ratio = 0.0;
  double performance = 0.0;
  double pimr = 0.0;
  double global_pimr = 0.0;
  friend bool operator==(const SweepRow&, const SweepRow&) = default;
};

// Computes both metric columns; DegenerateSweepError propagates.
std::vector<SweepRow> sweep_rows(std::span<const SweepRecord> recs,
                                 PimrBaseline baseline = PimrBaseline::kObservedMin);
void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows);
// Throws FormatError naming the offending line.
std::vector<SweepRow> read_sweep_csv(std::istream& in);
// Regroups rows into records, preserving first-seen model order.
std::vector<SweepRecord> records_from_rows(std::span<const SweepRow> rows);

// Shortest decimal string that parses back to exactly v.
std::string format_double(double v);

}  // namespace sbam

#endif  // SBAM_METRICS_H_
