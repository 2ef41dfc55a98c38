// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "corgi/text.hpp"
#include "corgi/types.hpp"

namespace corgi {

struct CatalogRecord {
  std::string subject;
  std::string course_title;
  std::string course_description;
  std::string source;
  std::optional<std::string> stage_hint;
  std::size_t line = 0;
};

enum class CatalogFormat { csv, jsonl };

struct CatalogReject {
  std::string key;  // course id that collided
  std::size_t line = 0;
  std::size_t first_line = 0;
  std::string reason;
};

struct CatalogParseResult {
  std::vector<Course> courses;
  std::vector<CatalogReject> rejects;
  std::size_t record_count = 0;
};

struct ReferenceSubject {
  std::string_view name;
  std::string_view source;
};

/// The 45 subject categories with their catalog sources, in table order.
std::span<const ReferenceSubject> reference_subjects();

/// "Secondary Education - ..." -> secondary, "Higher Education - ..." ->
/// higher; anything else needs a hint (secondary, higher, undergraduate,
/// graduate). Throws CatalogError when unresolvable or contradictory.
EducationalStage assign_stage(std::string_view subject, std::optional<std::string_view> stage_hint);

CatalogFormat catalog_format_from_path(const std::filesystem::path& path);

/// Raw records with required-field checks; no id or stage assignment.
std::vector<CatalogRecord> read_catalog_records(const std::filesystem::path& path, CatalogFormat format);

/// Builds courses; duplicates (same subject + title slug) are collected as
/// rejects and skipped.
CatalogParseResult build_courses(const std::vector<CatalogRecord>& records);

/// Strict form: throws CatalogError listing every duplicate key.
std::vector<Course> parse_catalog(const std::filesystem::path& path, CatalogFormat format);

/// Subjects in order of first appearance.
std::vector<std::string> subject_order(std::span<const Course> courses);

}  // namespace corgi
