// SPDX-License-Identifier: Apache-2.0
#include "corgi/analysis.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>
#include <unordered_map>

#include "corgi/kernels.hpp"

namespace corgi {

BatchReport analyze(std::span<const InstructionInstance> items, std::size_t batch_size) {
  if (batch_size < 1) throw std::invalid_argument("batch_size must be at least 1");
  std::unordered_map<std::string, std::uint32_t> ids;
  std::vector<std::uint32_t> subjects;
  std::vector<std::uint8_t> indices;
  subjects.reserve(items.size());
  indices.reserve(items.size());
  for (const auto& it : items) {
    auto [pos, _] = ids.try_emplace(it.subject, static_cast<std::uint32_t>(ids.size()));
    subjects.push_back(pos->second);
    indices.push_back(static_cast<std::uint8_t>(it.cognitive_index));
  }

  BatchReport r;
  r.batch_size = batch_size;
  r.item_count = items.size();
  r.total_subjects = ids.size();
  auto metrics = kernels::batch_metrics(subjects, indices, ids.size(), batch_size);

  std::size_t full = 0;
  double unique_sum = 0.0;
  for (std::size_t b = 0; b < metrics.size(); ++b) {
    const auto& m = metrics[b];
    BatchStats s;
    s.index = b;
    s.size = m.size;
    s.unique_subjects = m.unique_subjects;
    s.subject_coverage = static_cast<double>(m.unique_subjects) / static_cast<double>(r.total_subjects);
    s.load_histogram = m.load_histogram;
    s.mean_cognitive_index = m.mean_cognitive_index;
    full += m.unique_subjects == r.total_subjects;
    unique_sum += static_cast<double>(m.unique_subjects);
    if (b > 0 && m.mean_cognitive_index < metrics[b - 1].mean_cognitive_index) {
      ++r.summary.mean_index_monotonicity_violations;
    }
    r.per_batch.push_back(s);
  }
  if (!metrics.empty()) {
    r.summary.fraction_full_coverage = static_cast<double>(full) / static_cast<double>(metrics.size());
    r.summary.mean_unique_subjects = unique_sum / static_cast<double>(metrics.size());
  }
  return r;
}

BatchReport analyze(const OrderedDataset& od, std::size_t batch_size) { return analyze(od.items, batch_size); }

Json to_json(const BatchReport& r) {
  Json batches = Json::array();
  for (const auto& b : r.per_batch) {
    batches.push_back({{"index", b.index},
                       {"size", b.size},
                       {"unique_subjects", b.unique_subjects},
                       {"subject_coverage", b.subject_coverage},
                       {"load_histogram", {{"easy", b.load_histogram[0]},
                                           {"medium", b.load_histogram[1]},
                                           {"hard", b.load_histogram[2]}}},
                       {"mean_cognitive_index", b.mean_cognitive_index}});
  }
  return Json{{"batch_size", r.batch_size},
              {"item_count", r.item_count},
              {"total_subjects", r.total_subjects},
              {"summary",
               {{"fraction_full_coverage", r.summary.fraction_full_coverage},
                {"mean_unique_subjects", r.summary.mean_unique_subjects},
                {"mean_index_monotonicity_violations", r.summary.mean_index_monotonicity_violations}}},
              {"per_batch", std::move(batches)}};
}

namespace {

std::string fmt(double v, int precision = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, v);
  return buf;
}

}  // namespace

std::string to_csv(const BatchReport& r) {
  std::string out = "index,size,unique_subjects,subject_coverage,easy,medium,hard,mean_cognitive_index\n";
  for (const auto& b : r.per_batch) {
    out += std::to_string(b.index) + "," + std::to_string(b.size) + "," + std::to_string(b.unique_subjects) + "," +
           fmt(b.subject_coverage) + "," + std::to_string(b.load_histogram[0]) + "," +
           std::to_string(b.load_histogram[1]) + "," + std::to_string(b.load_histogram[2]) + "," +
           fmt(b.mean_cognitive_index) + "\n";
  }
  return out;
}

ComparisonTable compare(const std::vector<std::pair<std::string, BatchReport>>& reports) {
  ComparisonTable t;
  for (const auto& [label, r] : reports) {
    if (t.rows.empty()) {
      t.batch_size = r.batch_size;
    } else if (r.batch_size != t.batch_size) {
      throw std::invalid_argument("cannot compare reports with batch sizes " + std::to_string(t.batch_size) +
                                  " and " + std::to_string(r.batch_size));
    }
    t.rows.push_back({label, r.per_batch.size(), r.summary.fraction_full_coverage, r.summary.mean_unique_subjects,
                      r.summary.mean_index_monotonicity_violations});
  }
  return t;
}

std::string ComparisonTable::render_text() const {
  const std::vector<std::string> head = {"strategy", "batches", "full_coverage", "mean_subjects", "violations"};
  std::vector<std::vector<std::string>> cells;
  for (const auto& r : rows) {
    cells.push_back({r.label, std::to_string(r.batches), fmt(r.fraction_full_coverage), fmt(r.mean_unique_subjects),
                     std::to_string(r.mean_index_monotonicity_violations)});
  }
  std::vector<std::size_t> width(head.size());
  for (std::size_t c = 0; c < head.size(); ++c) {
    width[c] = head[c].size();
    for (const auto& row : cells) width[c] = std::max(width[c], row[c].size());
  }
  auto line = [&](const std::vector<std::string>& row) {
    std::string s;
    for (std::size_t c = 0; c < row.size(); ++c) {
      std::string pad(width[c] - row[c].size(), ' ');
      s += c == 0 ? row[c] + pad : "  " + pad + row[c];
    }
    return s + "\n";
  };
  std::string out = "batch_size " + std::to_string(batch_size) + "\n" + line(head);
  for (const auto& row : cells) out += line(row);
  return out;
}

std::string ComparisonTable::render_csv() const {
  std::string out = "strategy,batch_size,batches,fraction_full_coverage,mean_unique_subjects,"
                    "mean_index_monotonicity_violations\n";
  for (const auto& r : rows) {
    out += r.label + "," + std::to_string(batch_size) + "," + std::to_string(r.batches) + "," +
           fmt(r.fraction_full_coverage) + "," + fmt(r.mean_unique_subjects) + "," +
           std::to_string(r.mean_index_monotonicity_violations) + "\n";
  }
  return out;
}

Json ComparisonTable::to_json() const {
  Json rs = Json::array();
  for (const auto& r : rows) {
    rs.push_back({{"strategy", r.label},
                  {"batches", r.batches},
                  {"fraction_full_coverage", r.fraction_full_coverage},
                  {"mean_unique_subjects", r.mean_unique_subjects},
                  {"mean_index_monotonicity_violations", r.mean_index_monotonicity_violations}});
  }
  return Json{{"batch_size", batch_size}, {"rows", std::move(rs)}};
}

}  // namespace corgi
