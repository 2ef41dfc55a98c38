// SPDX-License-Identifier: Apache-2.0
#include "corgi/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstring>

namespace corgi::kernels {

double unit_cosine(std::span<const double> a, std::span<const double> b) {
  if (a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0) return 1.0;
  double dot = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) dot += a[k] * b[k];
  return std::clamp(dot, -1.0, std::nextafter(1.0, 0.0));
}

MaxSimilarity max_cosine(std::span<const double> rows, std::size_t dim, std::span<const double> query) {
  const auto n = static_cast<std::ptrdiff_t>(dim == 0 ? 0 : rows.size() / dim);
  MaxSimilarity best;
#pragma omp parallel
  {
    MaxSimilarity local;
#pragma omp for schedule(static) nowait
    for (std::ptrdiff_t r = 0; r < n; ++r) {
      double s = unit_cosine(rows.subspan(static_cast<std::size_t>(r) * dim, dim), query);
      if (s > local.similarity) local = {s, static_cast<std::size_t>(r)};
    }
#pragma omp critical
    {
      if (local.index != npos &&
          (local.similarity > best.similarity || (local.similarity == best.similarity && local.index < best.index))) {
        best = local;
      }
    }
  }
  return best;
}

void bm25_scores(const Bm25Windows& windows, std::span<const WeightedTerm> query, Bm25Params params,
                 std::span<double> out) {
  const auto n = static_cast<std::ptrdiff_t>(windows.terms.size());
#pragma omp parallel for schedule(dynamic, 64)
  for (std::ptrdiff_t w = 0; w < n; ++w) {
    auto i = static_cast<std::size_t>(w);
    out[i] = bm25_window_score(windows.terms[i], windows.lengths[i], windows.average_length, query, params);
  }
}

std::vector<BatchMetrics> batch_metrics(std::span<const std::uint32_t> subject_ids,
                                        std::span<const std::uint8_t> cognitive_indices,
                                        std::size_t subject_count, std::size_t batch_size) {
  const std::size_t n = subject_ids.size();
  const std::size_t batches = batch_size == 0 ? 0 : (n + batch_size - 1) / batch_size;
  std::vector<BatchMetrics> out(batches);
#pragma omp parallel
  {
    std::vector<unsigned char> seen(subject_count);
#pragma omp for schedule(static)
    for (std::ptrdiff_t bi = 0; bi < static_cast<std::ptrdiff_t>(batches); ++bi) {
      auto b = static_cast<std::size_t>(bi);
      std::fill(seen.begin(), seen.end(), 0);
      std::size_t begin = b * batch_size, end = std::min(n, begin + batch_size);
      BatchMetrics m;
      m.size = end - begin;
      std::size_t index_sum = 0;
      for (std::size_t i = begin; i < end; ++i) {
        if (!seen[subject_ids[i]]) {
          seen[subject_ids[i]] = 1;
          ++m.unique_subjects;
        }
        ++m.load_histogram[static_cast<std::size_t>(tier_of_index(cognitive_indices[i]))];
        index_sum += cognitive_indices[i];
      }
      m.mean_cognitive_index = m.size ? static_cast<double>(index_sum) / static_cast<double>(m.size) : 0.0;
      out[b] = m;
    }
  }
  return out;
}

}  // namespace corgi::kernels
