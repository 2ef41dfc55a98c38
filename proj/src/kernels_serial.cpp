// SPDX-License-Identifier: Apache-2.0
// Reference loops for the kernels in kernels.cpp. Kept deliberately plain.
#include <algorithm>

#include "corgi/kernels.hpp"

namespace corgi::kernels::serial {

MaxSimilarity max_cosine(std::span<const double> rows, std::size_t dim, std::span<const double> query) {
  MaxSimilarity best;
  if (dim == 0) return best;
  for (std::size_t r = 0; r < rows.size() / dim; ++r) {
    double s = unit_cosine(rows.subspan(r * dim, dim), query);
    if (s > best.similarity) best = {s, r};
  }
  return best;
}

void bm25_scores(const Bm25Windows& windows, std::span<const WeightedTerm> query, Bm25Params params,
                 std::span<double> out) {
  for (std::size_t w = 0; w < windows.terms.size(); ++w) {
    out[w] = bm25_window_score(windows.terms[w], windows.lengths[w], windows.average_length, query, params);
  }
}

std::vector<BatchMetrics> batch_metrics(std::span<const std::uint32_t> subject_ids,
                                        std::span<const std::uint8_t> cognitive_indices, std::size_t subject_count,
                                        std::size_t batch_size) {
  std::vector<BatchMetrics> out;
  if (batch_size == 0) return out;
  std::vector<unsigned char> seen(subject_count);
  for (std::size_t begin = 0; begin < subject_ids.size(); begin += batch_size) {
    BatchMetrics m;
    std::fill(seen.begin(), seen.end(), 0);
    std::size_t index_sum = 0;
    for (std::size_t i = begin; i < subject_ids.size() && i < begin + batch_size; ++i) {
      if (!seen[subject_ids[i]]) {
        seen[subject_ids[i]] = 1;
        ++m.unique_subjects;
      }
      ++m.load_histogram[static_cast<std::size_t>(tier_of_index(cognitive_indices[i]))];
      index_sum += cognitive_indices[i];
      ++m.size;
    }
    m.mean_cognitive_index = static_cast<double>(index_sum) / static_cast<double>(m.size);
    out.push_back(m);
  }
  return out;
}

}  // namespace corgi::kernels::serial
