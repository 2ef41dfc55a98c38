// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "corgi/scheduler.hpp"
#include "corgi/types.hpp"

namespace corgi {

struct BatchStats {
  std::size_t index = 0;
  std::size_t size = 0;
  std::size_t unique_subjects = 0;
  double subject_coverage = 0.0;  // unique_subjects / subjects in the dataset
  std::array<std::size_t, 3> load_histogram{};  // easy, medium, hard
  double mean_cognitive_index = 0.0;
};

struct BatchSummary {
  double fraction_full_coverage = 0.0;
  double mean_unique_subjects = 0.0;
  std::size_t mean_index_monotonicity_violations = 0;  // adjacent batches whose mean index drops
};

struct BatchReport {
  std::size_t batch_size = 0;
  std::size_t item_count = 0;
  std::size_t total_subjects = 0;
  std::vector<BatchStats> per_batch;
  BatchSummary summary;
};

/// Consecutive batches of `batch_size`; the last may be short. Throws
/// std::invalid_argument when batch_size < 1.
BatchReport analyze(std::span<const InstructionInstance> items, std::size_t batch_size);
BatchReport analyze(const OrderedDataset& od, std::size_t batch_size);

Json to_json(const BatchReport& r);
std::string to_csv(const BatchReport& r);  // one row per batch

struct ComparisonRow {
  std::string label;
  std::size_t batches = 0;
  double fraction_full_coverage = 0.0;
  double mean_unique_subjects = 0.0;
  std::size_t mean_index_monotonicity_violations = 0;
};

struct ComparisonTable {
  std::size_t batch_size = 0;
  std::vector<ComparisonRow> rows;

  std::string render_text() const;
  std::string render_csv() const;
  Json to_json() const;
};

/// Throws std::invalid_argument when batch sizes differ.
ComparisonTable compare(const std::vector<std::pair<std::string, BatchReport>>& reports);

}  // namespace corgi
