// SPDX-License-Identifier: Apache-2.0
#pragma once

// Data-parallel inner loops. Each kernel has an OpenMP version in `kernels`
// and a plain loop in `kernels::serial`; the two must agree exactly (tests
// compare them and bench/ times them).

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <utility>
#include <vector>

namespace corgi::kernels {

inline constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

struct MaxSimilarity {
  double similarity = -std::numeric_limits<double>::infinity();
  std::size_t index = npos;  // npos when there are no rows
};

/// Cosine of two unit vectors. Exactly 1.0 only for bitwise-identical
/// vectors; otherwise the dot product clamped to [-1, 1), so a threshold of
/// 1.0 matches exact duplicates alone.
double unit_cosine(std::span<const double> a, std::span<const double> b);

/// Best match of `query` against `rows` (row-major, rows.size() / dim rows).
/// Ties go to the lowest row index.
MaxSimilarity max_cosine(std::span<const double> rows, std::size_t dim, std::span<const double> query);

struct Bm25Params {
  double k1 = 1.2;
  double b = 0.75;
};

/// Per-window sparse term frequencies, each sorted by term id.
struct Bm25Windows {
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> terms;
  std::vector<std::uint32_t> lengths;
  double average_length = 0.0;
};

struct WeightedTerm {
  std::uint32_t id;
  double idf;
};

/// out[w] = sum over query terms of idf * tf (k1 + 1) / (tf + k1 (1 - b + b len / avg)).
/// `query` must be sorted by id with no repeats.
void bm25_scores(const Bm25Windows& windows, std::span<const WeightedTerm> query, Bm25Params params,
                 std::span<double> out);

struct BatchMetrics {
  std::size_t size = 0;
  std::size_t unique_subjects = 0;
  std::array<std::size_t, 3> load_histogram{};  // easy, medium, hard
  double mean_cognitive_index = 0.0;
};

/// Consecutive non-overlapping batches; the last one may be short.
std::vector<BatchMetrics> batch_metrics(std::span<const std::uint32_t> subject_ids,
                                        std::span<const std::uint8_t> cognitive_indices,
                                        std::size_t subject_count, std::size_t batch_size);

namespace serial {

MaxSimilarity max_cosine(std::span<const double> rows, std::size_t dim, std::span<const double> query);
void bm25_scores(const Bm25Windows& windows, std::span<const WeightedTerm> query, Bm25Params params,
                 std::span<double> out);
std::vector<BatchMetrics> batch_metrics(std::span<const std::uint32_t> subject_ids,
                                        std::span<const std::uint8_t> cognitive_indices,
                                        std::size_t subject_count, std::size_t batch_size);

}  // namespace serial

/// Shared per-window BM25 term; both variants call it so scores match bitwise.
inline double bm25_window_score(const std::vector<std::pair<std::uint32_t, std::uint32_t>>& terms,
                                std::uint32_t length, double average_length, std::span<const WeightedTerm> query,
                                Bm25Params params) {
  double norm = params.k1 * (1.0 - params.b + params.b * (average_length > 0.0 ? length / average_length : 0.0));
  double score = 0.0;
  std::size_t i = 0, j = 0;
  while (i < terms.size() && j < query.size()) {
    if (terms[i].first < query[j].id) {
      ++i;
    } else if (query[j].id < terms[i].first) {
      ++j;
    } else {
      double tf = terms[i].second;
      score += query[j].idf * tf * (params.k1 + 1.0) / (tf + norm);
      ++i;
      ++j;
    }
  }
  return score;
}

/// Load tier of a cognitive index: 0 for 1..4, 1 for 5..17, 2 for 18..19.
constexpr int tier_of_index(int index) { return index <= 4 ? 0 : (index <= 17 ? 1 : 2); }

}  // namespace corgi::kernels
