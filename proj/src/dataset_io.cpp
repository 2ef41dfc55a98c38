// SPDX-License-Identifier: Apache-2.0
#include "corgi/dataset_io.hpp"

#include <fstream>
#include <sstream>

#include "corgi/error.hpp"
#include "corgi/serialize.hpp"
#include "corgi/text.hpp"

namespace corgi {

fs::path manifest_path(const fs::path& data_path) {
  fs::path p = data_path;
  p += ".manifest";
  return p;
}

void for_each_jsonl(const fs::path& path, const std::function<void(const Json&, std::size_t)>& fn) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DatasetError("cannot open " + path.string());
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    Json j;
    try {
      j = Json::parse(line);
    } catch (const Json::parse_error& e) {
      throw DatasetError(path.string() + ": line " + std::to_string(lineno) + ": malformed JSON: " + e.what(),
                         lineno);
    }
    fn(j, lineno);
  }
}

void write_text_atomic(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw Error("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

void write_jsonl(const fs::path& path, const std::vector<Json>& records) {
  std::string buf;
  for (const auto& r : records) {
    buf += dump_line(r);
    buf += '\n';
  }
  write_text_atomic(path, buf);
}

Json read_json_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return Json::parse(ss.str());
  } catch (const Json::parse_error& e) {
    throw Error(path.string() + ": malformed JSON: " + e.what());
  }
}

void write_json_file(const fs::path& path, const Json& j) {
  write_text_atomic(path, j.dump(2, ' ', false, Json::error_handler_t::replace) + "\n");
}

Dataset load_dataset(const fs::path& path) {
  if (!fs::exists(path)) throw DatasetError("dataset file not found: " + path.string());
  Dataset d;
  for_each_jsonl(path, [&](const Json& j, std::size_t line) {
    try {
      d.items.push_back(instance_from_json(j, line));
    } catch (const DatasetError& e) {
      throw DatasetError(path.string() + ": " + e.what(), e.line(), e.field());
    }
  });
  if (auto mp = manifest_path(path); fs::exists(mp)) d.manifest = manifest_from_json(read_json_file(mp));
  return d;
}

void save_dataset(const Dataset& d, const fs::path& path) {
  std::vector<Json> records;
  records.reserve(d.items.size());
  for (const auto& it : d.items) records.push_back(to_json(it));
  write_jsonl(path, records);
  Manifest m = d.manifest;
  m.counts = stage_counts(d.items);
  write_json_file(manifest_path(path), to_json(m));
}

std::size_t count_lines(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::size_t n = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (!trim(line).empty()) ++n;
  }
  return n;
}

}  // namespace corgi
