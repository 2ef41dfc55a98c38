// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "corgi/types.hpp"

namespace corgi {

namespace fs = std::filesystem;

fs::path manifest_path(const fs::path& data_path);

/// Reads every record in file order. The `<path>.manifest` sidecar is loaded
/// when present. Throws DatasetError with line and field on schema errors.
Dataset load_dataset(const fs::path& path);

/// One canonical record per line, then the manifest sidecar with counts
/// recomputed from the items.
void save_dataset(const Dataset& d, const fs::path& path);

// Generic line-delimited JSON helpers shared by the stage files.
void for_each_jsonl(const fs::path& path, const std::function<void(const Json&, std::size_t line)>& fn);
void write_jsonl(const fs::path& path, const std::vector<Json>& records);
Json read_json_file(const fs::path& path);
void write_json_file(const fs::path& path, const Json& j);

/// Writes via a temporary file in the same directory and renames it into
/// place, so readers never see a half-written file.
void write_text_atomic(const fs::path& path, const std::string& content);

std::size_t count_lines(const fs::path& path);

}  // namespace corgi
