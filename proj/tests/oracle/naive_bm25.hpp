// SPDX-License-Identifier: Apache-2.0
#pragma once

// Exhaustive BM25 straight from raw text: tokenise every window again for
// every query, count term frequencies with plain loops. Slow on purpose.

#include <cstddef>
#include <string>
#include <vector>

namespace oracle {

struct NaiveWindow {
  std::string title;
  std::string text;
};

/// Non-overlapping windows of `window_words` whitespace-delimited words.
std::vector<NaiveWindow> naive_windows(const std::vector<std::pair<std::string, std::string>>& docs,
                                       std::size_t window_words);

std::vector<double> naive_bm25(const std::vector<NaiveWindow>& windows, const std::string& query, double k1 = 1.2,
                               double b = 0.75);

}  // namespace oracle
