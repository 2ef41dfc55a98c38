// SPDX-License-Identifier: Apache-2.0
#include "naive_bm25.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

namespace oracle {
namespace {

std::vector<std::string> tokens(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    auto c = static_cast<unsigned char>(ch);
    if (c < 128 && std::isalnum(c)) {
      cur += static_cast<char>(std::tolower(c));
    } else if (!cur.empty()) {
      out.push_back(cur);
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

}  // namespace

std::vector<NaiveWindow> naive_windows(const std::vector<std::pair<std::string, std::string>>& docs,
                                       std::size_t window_words) {
  std::vector<NaiveWindow> out;
  for (const auto& [title, text] : docs) {
    std::istringstream in(text);
    std::vector<std::string> words;
    std::string w;
    while (in >> w) words.push_back(w);
    for (std::size_t i = 0; i < words.size(); i += window_words) {
      NaiveWindow win{title, ""};
      for (std::size_t j = i; j < words.size() && j < i + window_words; ++j) {
        if (j > i) win.text += " ";
        win.text += words[j];
      }
      out.push_back(win);
    }
  }
  return out;
}

std::vector<double> naive_bm25(const std::vector<NaiveWindow>& windows, const std::string& query, double k1,
                               double b) {
  std::vector<std::vector<std::string>> toks;
  double total = 0;
  for (const auto& w : windows) {
    toks.push_back(tokens(w.text));
    total += static_cast<double>(toks.back().size());
  }
  double avg = windows.empty() ? 0 : total / static_cast<double>(windows.size());
  auto q = tokens(query);
  std::sort(q.begin(), q.end());
  q.erase(std::unique(q.begin(), q.end()), q.end());

  double n = static_cast<double>(windows.size());
  std::vector<double> scores(windows.size(), 0.0);
  for (const auto& term : q) {
    double df = 0;
    for (const auto& t : toks) df += std::count(t.begin(), t.end(), term) > 0 ? 1 : 0;
    if (df == 0) continue;
    double idf = std::log(1.0 + (n - df + 0.5) / (df + 0.5));
    for (std::size_t i = 0; i < toks.size(); ++i) {
      double tf = static_cast<double>(std::count(toks[i].begin(), toks[i].end(), term));
      if (tf == 0) continue;
      double len = static_cast<double>(toks[i].size());
      scores[i] += idf * tf * (k1 + 1) / (tf + k1 * (1 - b + b * len / avg));
    }
  }
  return scores;
}

}  // namespace oracle
