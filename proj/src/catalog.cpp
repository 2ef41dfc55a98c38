// SPDX-License-Identifier: Apache-2.0
#include "corgi/catalog.hpp"

#include <array>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "corgi/dataset_io.hpp"
#include "corgi/error.hpp"

namespace corgi {
namespace {

constexpr std::string_view kIgcse =
    "cambridgeinternational.org/programmes-and-qualifications/cambridge-upper-secondary/cambridge-igcse/subjects/";

constexpr std::array<ReferenceSubject, 45> kSubjects{{
    {"Higher Education - Accounting", "catalog.upenn.edu/courses/acct/"},
    {"Higher Education - Anatomy", "catalog.upenn.edu/courses/anat/"},
    {"Higher Education - Ancient History", "catalog.upenn.edu/courses/anch/"},
    {"Higher Education - Astronomy", "catalog.upenn.edu/courses/astr/"},
    {"Higher Education - Biology", "catalog.upenn.edu/courses/biol/"},
    {"Higher Education - Chemistry", "catalog.upenn.edu/courses/chem/"},
    {"Higher Education - Computer and Info Science", "catalog.upenn.edu/courses/cis/"},
    {"Higher Education - Earth and Environmental Science", "catalog.upenn.edu/courses/eesc/"},
    {"Higher Education - Economics", "catalog.upenn.edu/courses/econ/"},
    {"Higher Education - Ethics", "catalog.upenn.edu/courses/ethc/"},
    {"Higher Education - Gender, Sexuality, Women's Study", "catalog.upenn.edu/courses/gsws/"},
    {"Higher Education - Global Studies", "catalog.upenn.edu/courses/glbs/"},
    {"Higher Education - Health & Societies", "catalog.upenn.edu/courses/hsoc/"},
    {"Higher Education - History", "catalog.upenn.edu/courses/hist/"},
    {"Higher Education - Law", "catalog.upenn.edu/courses/law/"},
    {"Higher Education - Legal & Business Ethics", "catalog.upenn.edu/courses/lgst/"},
    {"Higher Education - Management", "catalog.upenn.edu/courses/mgmt/"},
    {"Higher Education - Marketing", "catalog.upenn.edu/courses/mktg/"},
    {"Higher Education - Mathematics", "catalog.upenn.edu/courses/math/"},
    {"Higher Education - Philosophy", "catalog.upenn.edu/courses/phil/"},
    {"Higher Education - Physics", "catalog.upenn.edu/courses/phys/"},
    {"Higher Education - Political Science", "catalog.upenn.edu/courses/psci/"},
    {"Higher Education - Psychology", "catalog.upenn.edu/courses/psyc/"},
    {"Higher Education - Religious Studies", "catalog.upenn.edu/courses/rels/"},
    {"Higher Education - Sociology", "catalog.upenn.edu/courses/soci/"},
    {"Secondary Education - Accounting", kIgcse},
    {"Secondary Education - Agriculture", kIgcse},
    {"Secondary Education - American History (US)", kIgcse},
    {"Secondary Education - Biology", kIgcse},
    {"Secondary Education - Business Studies", kIgcse},
    {"Secondary Education - Chemistry", kIgcse},
    {"Secondary Education - Co-ordinated Sciences", kIgcse},
    {"Secondary Education - Computer Science", kIgcse},
    {"Secondary Education - Economics", kIgcse},
    {"Secondary Education - Enterprise", kIgcse},
    {"Secondary Education - Environmental Management", kIgcse},
    {"Secondary Education - Food & Nutrition", kIgcse},
    {"Secondary Education - Maldives Marine Science", kIgcse},
    {"Secondary Education - Geography", kIgcse},
    {"Secondary Education - History", kIgcse},
    {"Secondary Education - Info and Communication Tech", kIgcse},
    {"Secondary Education - Physical Science", kIgcse},
    {"Secondary Education - Physics", kIgcse},
    {"Secondary Education - Religious Studies", kIgcse},
    {"Secondary Education - Sociology", kIgcse},
}};

constexpr std::string_view kSecondaryPrefix = "Secondary Education";
constexpr std::string_view kHigherPrefix = "Higher Education";

// RFC 4180 reader: quoted fields may hold commas, doubled quotes and newlines.
class CsvReader {
 public:
  explicit CsvReader(std::string text) : text_(std::move(text)) {}

  /// Returns false at end of input. `line` is the 1-based line the row starts on.
  bool next(std::vector<std::string>& row, std::size_t& line) {
    row.clear();
    if (pos_ >= text_.size()) return false;
    line = line_;
    std::string field;
    bool quoted = false;
    while (pos_ < text_.size()) {
      char c = text_[pos_++];
      if (quoted) {
        if (c == '"') {
          if (pos_ < text_.size() && text_[pos_] == '"') {
            field.push_back('"');
            ++pos_;
          } else {
            quoted = false;
          }
        } else {
          if (c == '\n') ++line_;
          field.push_back(c);
        }
        continue;
      }
      if (c == '"') {
        quoted = true;
      } else if (c == ',') {
        row.push_back(std::move(field));
        field.clear();
      } else if (c == '\r') {
        // tolerated before \n
      } else if (c == '\n') {
        ++line_;
        break;
      } else {
        field.push_back(c);
      }
    }
    if (quoted) throw CatalogError("unterminated quoted field starting on line " + std::to_string(line));
    row.push_back(std::move(field));
    return true;
  }

 private:
  std::string text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
};

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CatalogError("cannot open catalog " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  std::string s = ss.str();
  if (s.rfind("\xEF\xBB\xBF", 0) == 0) s.erase(0, 3);
  return s;
}

void check_record(const CatalogRecord& r, const std::filesystem::path& path) {
  auto need = [&](const std::string& v, const char* field) {
    if (trim(v).empty()) {
      throw CatalogError(path.string() + ": line " + std::to_string(r.line) + ": empty `" + field + "`");
    }
  };
  need(r.subject, "subject");
  need(r.course_title, "course_title");
  need(r.course_description, "course_description");
}

std::vector<CatalogRecord> read_csv(const std::filesystem::path& path) {
  CsvReader reader(slurp(path));
  std::vector<std::string> row;
  std::size_t line = 0;
  std::vector<CatalogRecord> out;
  if (!reader.next(row, line)) return out;

  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < row.size(); ++i) col[std::string(trim(row[i]))] = i;
  for (const char* required : {"subject", "course_title", "course_description"}) {
    if (!col.count(required)) {
      throw CatalogError(path.string() + ": missing required column `" + required + "`");
    }
  }
  auto cell = [&](const std::vector<std::string>& r, const char* name) -> std::optional<std::string> {
    auto it = col.find(name);
    if (it == col.end() || it->second >= r.size()) return std::nullopt;
    return r[it->second];
  };

  while (reader.next(row, line)) {
    if (row.size() == 1 && trim(row[0]).empty()) continue;
    CatalogRecord rec;
    rec.line = line;
    rec.subject = std::string(trim(cell(row, "subject").value_or("")));
    rec.course_title = std::string(trim(cell(row, "course_title").value_or("")));
    rec.course_description = std::string(trim(cell(row, "course_description").value_or("")));
    rec.source = std::string(trim(cell(row, "source").value_or("")));
    if (auto hint = cell(row, "stage_hint"); hint && !trim(*hint).empty()) rec.stage_hint = std::string(trim(*hint));
    check_record(rec, path);
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<CatalogRecord> read_jsonl(const std::filesystem::path& path) {
  std::vector<CatalogRecord> out;
  try {
    for_each_jsonl(path, [&](const Json& j, std::size_t line) {
      auto get = [&](const char* field, bool required) -> std::string {
        auto it = j.find(field);
        if (it == j.end() || it->is_null()) {
          if (required) {
            throw CatalogError(path.string() + ": line " + std::to_string(line) + ": missing required field `" +
                               field + "`");
          }
          return {};
        }
        if (!it->is_string()) {
          throw CatalogError(path.string() + ": line " + std::to_string(line) + ": `" + field +
                             "` must be a string");
        }
        return std::string(trim(it->get<std::string>()));
      };
      if (!j.is_object()) throw CatalogError(path.string() + ": line " + std::to_string(line) + ": not an object");
      CatalogRecord rec;
      rec.line = line;
      rec.subject = get("subject", true);
      rec.course_title = get("course_title", true);
      rec.course_description = get("course_description", true);
      rec.source = get("source", false);
      if (auto hint = get("stage_hint", false); !hint.empty()) rec.stage_hint = hint;
      check_record(rec, path);
      out.push_back(std::move(rec));
    });
  } catch (const DatasetError& e) {
    throw CatalogError(e.what());
  }
  return out;
}

}  // namespace

std::span<const ReferenceSubject> reference_subjects() { return kSubjects; }

EducationalStage assign_stage(std::string_view subject, std::optional<std::string_view> stage_hint) {
  subject = trim(subject);
  if (subject.empty()) throw CatalogError("subject is empty");

  std::optional<StageLevel> from_prefix;
  if (istarts_with(subject, kSecondaryPrefix)) from_prefix = StageLevel::secondary;
  if (istarts_with(subject, kHigherPrefix)) from_prefix = StageLevel::higher;

  std::optional<StageLevel> from_hint;
  std::optional<std::string> sublevel;
  if (stage_hint && !trim(*stage_hint).empty()) {
    std::string h = to_lower(trim(*stage_hint));
    if (h == "secondary") {
      from_hint = StageLevel::secondary;
    } else if (h == "higher") {
      from_hint = StageLevel::higher;
    } else if (h == "undergraduate" || h == "graduate") {
      from_hint = StageLevel::higher;
      sublevel = h;
    } else {
      throw CatalogError("unrecognised stage hint \"" + std::string(*stage_hint) + "\" for subject \"" +
                         std::string(subject) + "\"");
    }
  }

  if (from_prefix && from_hint && *from_prefix != *from_hint) {
    throw CatalogError("stage hint contradicts subject prefix for \"" + std::string(subject) + "\"");
  }
  auto value = from_prefix ? from_prefix : from_hint;
  if (!value) throw CatalogError("cannot resolve educational stage for subject \"" + std::string(subject) + "\"");
  return EducationalStage{*value, sublevel};
}

CatalogFormat catalog_format_from_path(const std::filesystem::path& path) {
  auto ext = to_lower(path.extension().string());
  if (ext == ".csv") return CatalogFormat::csv;
  if (ext == ".jsonl" || ext == ".ndjson") return CatalogFormat::jsonl;
  throw CatalogError("cannot infer catalog format from extension of " + path.string());
}

std::vector<CatalogRecord> read_catalog_records(const std::filesystem::path& path, CatalogFormat format) {
  if (!std::filesystem::exists(path)) throw CatalogError("catalog file not found: " + path.string());
  return format == CatalogFormat::csv ? read_csv(path) : read_jsonl(path);
}

CatalogParseResult build_courses(const std::vector<CatalogRecord>& records) {
  CatalogParseResult result;
  result.record_count = records.size();
  std::unordered_map<std::string, std::size_t> first_line;
  for (const auto& rec : records) {
    std::string id = slugify(rec.subject) + "/" + slugify(rec.course_title);
    if (auto it = first_line.find(id); it != first_line.end()) {
      result.rejects.push_back({id, rec.line, it->second, "duplicate course key (subject + title)"});
      continue;
    }
    first_line.emplace(id, rec.line);
    Course c;
    c.id = std::move(id);
    c.subject = rec.subject;
    c.stage = assign_stage(rec.subject, rec.stage_hint);
    c.title = rec.course_title;
    c.description = rec.course_description;
    c.source = rec.source;
    result.courses.push_back(std::move(c));
  }
  return result;
}

std::vector<Course> parse_catalog(const std::filesystem::path& path, CatalogFormat format) {
  auto result = build_courses(read_catalog_records(path, format));
  if (!result.rejects.empty()) {
    std::string msg = path.string() + ": duplicate course keys:";
    for (const auto& r : result.rejects) {
      msg += " " + r.key + " (lines " + std::to_string(r.first_line) + " and " + std::to_string(r.line) + ")";
    }
    throw CatalogError(msg);
  }
  return std::move(result.courses);
}

std::vector<std::string> subject_order(std::span<const Course> courses) {
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  for (const auto& c : courses) {
    if (seen.insert(c.subject).second) out.push_back(c.subject);
  }
  return out;
}

}  // namespace corgi
