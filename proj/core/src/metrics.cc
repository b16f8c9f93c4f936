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

#include "sbam/metrics.h"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <exception>
#include <istream>
#include <ostream>
#include <thread>

#include "sbam/errors.h"

namespace sbam {

namespace {

constexpr std::string_view kPerformanceComment = "# performance=neg_holdout_loss";
constexpr std::string_view kHeader = "model,ratio,performance,pimr,global_pimr";

std::vector<PimrPoint> normalise(const SweepRecord& rec, double lo, double hi,
                                 const std::string& what) {
  if (!(hi > lo)) {
    throw DegenerateSweepError(what + ": performance range is empty (all values " +
                               format_double(hi) + "), PIMR undefined");
  }
  std::vector<PimrPoint> out;
  out.reserve(rec.points.size());
  for (const SweepPoint& p : rec.points) {
    out.push_back({p.ratio, (p.performance - lo) / (hi - lo)});
  }
  return out;
}

double parse_number(std::string_view field, std::size_t line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw FormatError("sweep csv line " + std::to_string(line) + ": bad number '" +
                      std::string(field) + "'");
  }
  return v;
}

}  // namespace

void SweepRecord::validate() const {
  if (points.size() < 2) {
    throw ParameterError("sweep record '" + model_name + "' needs at least 2 points, has " +
                         std::to_string(points.size()));
  }
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (!(points[i].ratio > points[i - 1].ratio)) {
      throw ParameterError("sweep record '" + model_name +
                           "': ratios must be strictly increasing");
    }
  }
}

std::vector<PimrPoint> pimr(const SweepRecord& rec, PimrBaseline baseline) {
  rec.validate();
  const auto [lo_it, hi_it] = std::minmax_element(
      rec.points.begin(), rec.points.end(),
      [](const SweepPoint& a, const SweepPoint& b) {
        return a.performance < b.performance;
      });
  const double lo = baseline == PimrBaseline::kObservedMin
                        ? lo_it->performance
                        : rec.points.front().performance;
  return normalise(rec, lo, hi_it->performance, "pimr('" + rec.model_name + "')");
}

std::vector<std::vector<PimrPoint>> global_pimr(std::span<const SweepRecord> recs) {
  if (recs.empty()) throw ParameterError("global_pimr: no records");
  double lo = 0.0;
  double hi = 0.0;
  bool first = true;
  for (const SweepRecord& rec : recs) {
    rec.validate();
    for (const SweepPoint& p : rec.points) {
      lo = first ? p.performance : std::min(lo, p.performance);
      hi = first ? p.performance : std::max(hi, p.performance);
      first = false;
    }
  }
  std::vector<std::vector<PimrPoint>> out;
  out.reserve(recs.size());
  for (const SweepRecord& rec : recs) {
    out.push_back(normalise(rec, lo, hi, "global_pimr"));
  }
  return out;
}

std::string model_label(const MaskingConfig& cfg) {
  std::string label(to_string(cfg.strategy));
  if (cfg.invert_selection) label += "-inv";
  return label;
}

std::vector<SweepRecord> sweep(const SweepPlan& plan,
                               std::span<const Image> train_data,
                               std::span<const Image> holdout) {
  if (plan.ratios.size() < 2) {
    throw ParameterError("sweep needs at least 2 ratios, got " +
                         std::to_string(plan.ratios.size()));
  }
  if (plan.strategies.empty()) throw ParameterError("sweep: no strategies");
  if (holdout.empty()) throw ParameterError("sweep: held-out split is empty");

  const std::size_t n_ratios = plan.ratios.size();
  const std::size_t cells = plan.strategies.size() * n_ratios;
  std::vector<double> performance(cells, 0.0);
  std::vector<std::exception_ptr> errors(cells);
  const std::uint64_t eval_seed = derive_seed(plan.train.seed, 0xE7A1);

  auto run_cell = [&](std::size_t cell) {
    try {
      TrainConfig cfg = plan.train;
      cfg.masking = plan.strategies[cell / n_ratios];
      cfg.masking.base_ratio = plan.ratios[cell % n_ratios];
      const TrainResult trained = train(train_data, cfg);
      performance[cell] =
          -evaluate(trained.params, holdout, cfg, plan.eval_masking, eval_seed);
    } catch (...) {
      errors[cell] = std::current_exception();
    }
  };

  std::size_t threads = plan.threads == 0
                            ? std::max(1u, std::thread::hardware_concurrency())
                            : plan.threads;
  threads = std::min(threads, cells);
  if (threads <= 1) {
    for (std::size_t c = 0; c < cells; ++c) run_cell(c);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t c = next++; c < cells; c = next++) run_cell(c);
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  std::vector<SweepRecord> records;
  records.reserve(plan.strategies.size());
  for (std::size_t s = 0; s < plan.strategies.size(); ++s) {
    SweepRecord rec{model_label(plan.strategies[s]), {}};
    for (std::size_t r = 0; r < n_ratios; ++r) {
      rec.points.push_back({plan.ratios[r], performance[s * n_ratios + r]});
    }
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<SweepRow> sweep_rows(std::span<const SweepRecord> recs,
                                 PimrBaseline baseline) {
  const auto global = global_pimr(recs);
  std::vector<SweepRow> rows;
  for (std::size_t r = 0; r < recs.size(); ++r) {
    const auto local = pimr(recs[r], baseline);
    for (std::size_t i = 0; i < recs[r].points.size(); ++i) {
      const SweepPoint& p = recs[r].points[i];
      rows.push_back({recs[r].model_name, p.ratio, p.performance, local[i].value,
                      global[r][i].value});
    }
  }
  return rows;
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows) {
  out << kPerformanceComment << '\n' << kHeader << '\n';
  for (const SweepRow& row : rows) {
    out << row.model << ',' << format_double(row.ratio) << ','
        << format_double(row.performance) << ',' << format_double(row.pimr) << ','
        << format_double(row.global_pimr) << '\n';
  }
}

std::vector<SweepRow> read_sweep_csv(std::istream& in) {
  std::vector<SweepRow> rows;
  std::string line;
  std::size_t line_no = 0;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (!saw_header) {
      if (line != kHeader) {
        throw FormatError("sweep csv line " + std::to_string(line_no) +
                          ": expected header '" + std::string(kHeader) + "'");
      }
      saw_header = true;
      continue;
    }
    std::vector<std::string_view> fields;
    std::string_view rest(line);
    for (;;) {
      const auto comma = rest.find(',');
      fields.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (fields.size() != 5) {
      throw FormatError("sweep csv line " + std::to_string(line_no) + ": expected 5 fields, got " +
                        std::to_string(fields.size()));
    }
    rows.push_back({std::string(fields[0]), parse_number(fields[1], line_no),
                    parse_number(fields[2], line_no), parse_number(fields[3], line_no),
                    parse_number(fields[4], line_no)});
  }
  if (!saw_header) throw FormatError("sweep csv: missing header line");
  return rows;
}

std::vector<SweepRecord> records_from_rows(std::span<const SweepRow> rows) {
  std::vector<SweepRecord> out;
  for (const SweepRow& row : rows) {
    auto it = std::find_if(out.begin(), out.end(), [&](const SweepRecord& r) {
      return r.model_name == row.model;
    });
    if (it == out.end()) {
      out.push_back({row.model, {}});
      it = std::prev(out.end());
    }
    it->points.push_back({row.ratio, row.performance});
  }
  return out;
}

}  // namespace sbam
