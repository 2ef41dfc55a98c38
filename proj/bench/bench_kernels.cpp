// SPDX-License-Identifier: Apache-2.0
// Times the OpenMP kernels against their serial twins on synthetic inputs.
// Usage: corgi_bench [repeats]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "corgi/kernels.hpp"
#include "corgi/rng.hpp"

namespace {

using Clock = std::chrono::steady_clock;

template <typename F>
double best_ms(int repeats, F&& f) {
  double best = 1e300;
  for (int r = 0; r < repeats; ++r) {
    auto t0 = Clock::now();
    f();
    double ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    if (ms < best) best = ms;
  }
  return best;
}

void report(const char* name, double parallel, double serial, bool same) {
  std::printf("%-14s parallel %9.3f ms  serial %9.3f ms  speedup %5.2fx  %s\n", name, parallel, serial,
              parallel > 0 ? serial / parallel : 0.0, same ? "match" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  int repeats = argc > 1 ? std::atoi(argv[1]) : 5;
  corgi::SplitMix64 rng(42);
  namespace k = corgi::kernels;

  // max_cosine: 20k kept rows of dimension 256.
  const std::size_t dim = 256, rows = 20000;
  std::vector<double> matrix(rows * dim), query(dim);
  for (auto& v : matrix) v = rng.uniform() - 0.5;
  for (auto& v : query) v = rng.uniform() - 0.5;
  k::MaxSimilarity mp, ms;
  double tp = best_ms(repeats, [&] { mp = k::max_cosine(matrix, dim, query); });
  double ts = best_ms(repeats, [&] { ms = k::serial::max_cosine(matrix, dim, query); });
  report("max_cosine", tp, ts, mp.index == ms.index && mp.similarity == ms.similarity);

  // bm25_scores: 50k windows, 120 distinct terms each, 12-term query.
  k::Bm25Windows w;
  const std::size_t windows = 50000, vocab = 30000;
  double total = 0;
  for (std::size_t i = 0; i < windows; ++i) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> terms;
    std::uint32_t id = static_cast<std::uint32_t>(rng.below(200));
    std::uint32_t len = 0;
    for (int t = 0; t < 120 && id < vocab; ++t) {
      auto tf = static_cast<std::uint32_t>(1 + rng.below(3));
      terms.emplace_back(id, tf);
      len += tf;
      id += static_cast<std::uint32_t>(1 + rng.below(250));
    }
    w.terms.push_back(std::move(terms));
    w.lengths.push_back(len);
    total += len;
  }
  w.average_length = total / windows;
  std::vector<k::WeightedTerm> q;
  for (std::uint32_t id = 100; q.size() < 12; id += 997) q.push_back({id, 1.0 + rng.uniform()});
  std::vector<double> sp(windows), ss(windows);
  tp = best_ms(repeats, [&] { k::bm25_scores(w, q, {}, sp); });
  ts = best_ms(repeats, [&] { k::serial::bm25_scores(w, q, {}, ss); });
  report("bm25_scores", tp, ts, sp == ss);

  // batch_metrics: 1M items, 45 subjects, batch 256.
  const std::size_t n = 1000000;
  std::vector<std::uint32_t> subj(n);
  std::vector<std::uint8_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) {
    subj[i] = static_cast<std::uint32_t>(rng.below(45));
    idx[i] = static_cast<std::uint8_t>(1 + rng.below(19));
  }
  std::vector<k::BatchMetrics> bp, bs;
  tp = best_ms(repeats, [&] { bp = k::batch_metrics(subj, idx, 45, 256); });
  ts = best_ms(repeats, [&] { bs = k::serial::batch_metrics(subj, idx, 45, 256); });
  bool same = bp.size() == bs.size();
  for (std::size_t i = 0; same && i < bp.size(); ++i) {
    same = bp[i].unique_subjects == bs[i].unique_subjects && bp[i].load_histogram == bs[i].load_histogram &&
           bp[i].mean_cognitive_index == bs[i].mean_cognitive_index && bp[i].size == bs[i].size;
  }
  report("batch_metrics", tp, ts, same);
  return 0;
}
