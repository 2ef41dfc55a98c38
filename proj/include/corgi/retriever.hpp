// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "corgi/kernels.hpp"

namespace corgi {

inline constexpr std::size_t kWindowWords = 256;

struct Passage {
  std::string title;
  std::string text;        // at most kWindowWords whitespace-delimited words
  std::string source_doc;
  double score = 0.0;
  std::size_t window_index = 0;  // position in the retriever's window list
};

class Retriever {
 public:
  virtual ~Retriever() = default;
  /// Top-k distinct windows by score. Throws PipelineError on an empty
  /// corpus and std::invalid_argument when k < 1.
  virtual std::vector<Passage> retrieve(std::string_view question, int k = 3) = 0;
};

struct CorpusDocument {
  std::string title;
  std::string text;
  std::string source;
};

/// A directory of .txt files (title = file stem, underscores read as spaces)
/// or a line-delimited JSON file of {"title", "text"} records.
std::vector<CorpusDocument> load_corpus(const std::filesystem::path& path);

/// Non-overlapping windows of `window_words` words, rejoined with single
/// spaces; the last window of a document may be short.
std::vector<Passage> split_windows(const std::vector<CorpusDocument>& docs, std::size_t window_words = kWindowWords);

class Bm25Retriever : public Retriever {
 public:
  explicit Bm25Retriever(const std::vector<CorpusDocument>& docs, kernels::Bm25Params params = {},
                         std::size_t window_words = kWindowWords);

  std::vector<Passage> retrieve(std::string_view question, int k = 3) override;

  /// BM25 score of every window, indexed like windows().
  std::vector<double> score_all(std::string_view question) const;

  const std::vector<Passage>& windows() const { return windows_; }
  kernels::Bm25Params params() const { return params_; }

  /// ln(1 + (N - df + 0.5) / (df + 0.5)), never negative.
  static double idf(std::size_t window_count, std::size_t df);

 private:
  std::vector<Passage> windows_;
  kernels::Bm25Params params_;
  kernels::Bm25Windows index_;
  std::unordered_map<std::string, std::uint32_t> vocab_;
  std::vector<std::size_t> df_;
};

}  // namespace corgi
