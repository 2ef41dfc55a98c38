// SPDX-License-Identifier: Apache-2.0
#include "corgi/retriever.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "corgi/dataset_io.hpp"
#include "corgi/error.hpp"
#include "corgi/text.hpp"

namespace corgi {

std::vector<CorpusDocument> load_corpus(const std::filesystem::path& path) {
  namespace fs = std::filesystem;
  std::vector<CorpusDocument> docs;
  if (fs::is_directory(path)) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(path)) {
      if (entry.is_regular_file() && entry.path().extension() == ".txt") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      std::ifstream in(f, std::ios::binary);
      if (!in) throw PipelineError("cannot read corpus file " + f.string());
      std::ostringstream buf;
      buf << in.rdbuf();
      std::string title = f.stem().string();
      std::replace(title.begin(), title.end(), '_', ' ');
      docs.push_back({std::move(title), buf.str(), f.filename().string()});
    }
  } else if (fs::is_regular_file(path)) {
    std::string name = path.filename().string();
    for_each_jsonl(path, [&](const Json& j, std::size_t line) {
      if (!j.is_object() || !j.contains("title") || !j.contains("text") || !j["title"].is_string() ||
          !j["text"].is_string()) {
        throw DatasetError("corpus record needs string title and text", line, "title");
      }
      docs.push_back({j["title"].get<std::string>(), j["text"].get<std::string>(), name + ":" + std::to_string(line)});
    });
  } else {
    throw PipelineError("corpus path does not exist: " + path.string());
  }
  return docs;
}

std::vector<Passage> split_windows(const std::vector<CorpusDocument>& docs, std::size_t window_words) {
  if (window_words == 0) throw std::invalid_argument("window size must be positive");
  std::vector<Passage> out;
  for (const auto& doc : docs) {
    auto words = split_whitespace(doc.text);
    for (std::size_t start = 0; start < words.size(); start += window_words) {
      std::size_t end = std::min(words.size(), start + window_words);
      std::string text;
      for (std::size_t i = start; i < end; ++i) {
        if (i > start) text += ' ';
        text += words[i];
      }
      Passage p;
      p.title = doc.title;
      p.text = std::move(text);
      p.source_doc = doc.source;
      p.window_index = out.size();
      out.push_back(std::move(p));
    }
  }
  return out;
}

double Bm25Retriever::idf(std::size_t window_count, std::size_t df) {
  double n = static_cast<double>(window_count);
  double d = static_cast<double>(df);
  return std::log1p((n - d + 0.5) / (d + 0.5));
}

Bm25Retriever::Bm25Retriever(const std::vector<CorpusDocument>& docs, kernels::Bm25Params params,
                             std::size_t window_words)
    : windows_(split_windows(docs, window_words)), params_(params) {
  index_.terms.resize(windows_.size());
  index_.lengths.resize(windows_.size());
  double total = 0.0;
  for (std::size_t w = 0; w < windows_.size(); ++w) {
    std::map<std::uint32_t, std::uint32_t> tf;
    auto tokens = alnum_tokens(windows_[w].text);
    for (auto& t : tokens) {
      auto [it, inserted] = vocab_.try_emplace(std::move(t), static_cast<std::uint32_t>(vocab_.size()));
      if (inserted) df_.push_back(0);
      ++tf[it->second];
    }
    for (const auto& [id, count] : tf) {
      ++df_[id];
      index_.terms[w].emplace_back(id, count);
    }
    index_.lengths[w] = static_cast<std::uint32_t>(tokens.size());
    total += static_cast<double>(tokens.size());
  }
  index_.average_length = windows_.empty() ? 0.0 : total / static_cast<double>(windows_.size());
}

std::vector<double> Bm25Retriever::score_all(std::string_view question) const {
  std::vector<kernels::WeightedTerm> query;
  auto tokens = alnum_tokens(question);
  std::sort(tokens.begin(), tokens.end());
  tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
  for (const auto& t : tokens) {
    auto it = vocab_.find(t);
    if (it != vocab_.end()) query.push_back({it->second, idf(windows_.size(), df_[it->second])});
  }
  std::sort(query.begin(), query.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  std::vector<double> scores(windows_.size(), 0.0);
  kernels::bm25_scores(index_, query, params_, scores);
  return scores;
}

std::vector<Passage> Bm25Retriever::retrieve(std::string_view question, int k) {
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  if (windows_.empty()) throw PipelineError("retrieval corpus is empty");
  auto scores = score_all(question);
  std::vector<std::size_t> order(windows_.size());
  std::iota(order.begin(), order.end(), 0);
  std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(k), order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take), order.end(),
                    [&](std::size_t a, std::size_t b) { return scores[a] != scores[b] ? scores[a] > scores[b] : a < b; });
  std::vector<Passage> out;
  for (std::size_t i = 0; i < take; ++i) {
    Passage p = windows_[order[i]];
    p.score = scores[order[i]];
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace corgi
