// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace corgi {

using Json = nlohmann::ordered_json;

enum class StageLevel { secondary, higher };

/// Secondary or higher education; higher may carry a free-text sub-level
/// such as "undergraduate" or "graduate".
struct EducationalStage {
  StageLevel value = StageLevel::secondary;
  std::optional<std::string> sublevel;

  friend bool operator==(const EducationalStage&, const EducationalStage&) = default;
};

enum class CognitiveProcess { remembering, understanding, applying };
enum class CognitiveLoad { easy, medium, hard };

std::string_view to_string(StageLevel s);
std::string_view to_string(CognitiveProcess p);
std::string_view to_string(CognitiveLoad l);
std::optional<StageLevel> parse_stage_level(std::string_view s);
std::optional<CognitiveProcess> parse_process(std::string_view s);
std::optional<CognitiveLoad> parse_load(std::string_view s);

struct Course {
  std::string id;
  std::string subject;
  EducationalStage stage;
  std::string title;
  std::string description;
  std::optional<std::string> refined_description;
  std::string source;

  friend bool operator==(const Course&, const Course&) = default;
};

enum class DedupStatus { kept, dropped };

struct Concept {
  std::string id;
  std::string course_id;
  std::string subject;
  EducationalStage stage;
  std::string name;
  std::string explanation;
  std::optional<std::vector<double>> embedding;
  DedupStatus dedup_status = DedupStatus::kept;
  std::string duplicate_of;  // set only when dropped

  friend bool operator==(const Concept&, const Concept&) = default;
};

struct CognitiveTemplate {
  int index;
  CognitiveProcess process;
  std::string_view subprocess;
  CognitiveLoad load;
  std::string_view definition;
  std::string_view format_type;
  std::string_view format_text;
};

enum class FilterState { unfiltered, kept, dropped_rule, dropped_retrieval };
enum class Vote { yes, no };

std::string_view to_string(FilterState s);
std::optional<FilterState> parse_filter_state(std::string_view s);

struct FilterStatus {
  FilterState state = FilterState::unfiltered;
  std::string reason;        // dropped_rule only
  std::vector<Vote> votes;   // recorded by the retrieval filter

  friend bool operator==(const FilterStatus&, const FilterStatus&) = default;
};

struct Provenance {
  std::string teacher_model;
  std::string created_at;  // ISO-8601 UTC, e.g. 2026-01-31T12:00:00Z
  std::string run_id;

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct InstructionInstance {
  std::string id;
  EducationalStage stage;
  std::string subject;
  std::string course_id;
  std::string concept_id;
  int cognitive_index = 1;
  std::string cognitive_process;
  std::string cognitive_subprocess;
  CognitiveLoad cognitive_load = CognitiveLoad::easy;
  std::string system_message;
  std::string question;
  std::string answer;
  FilterStatus filter;
  Provenance provenance;

  friend bool operator==(const InstructionInstance&, const InstructionInstance&) = default;
};

/// Sidecar metadata written next to every dataset file as `<file>.manifest`.
struct Manifest {
  std::string run_id;
  std::map<std::string, std::size_t> counts;  // per stage value, plus "total"
  std::optional<std::string> strategy;
  std::optional<std::uint64_t> seed;
  Json extra = Json::object();

  friend bool operator==(const Manifest&, const Manifest&) = default;
};

struct Dataset {
  std::vector<InstructionInstance> items;
  Manifest manifest;
};

/// Deterministic instance id: `<concept_id>/<index>`, which expands to
/// subject-slug/course-slug/concept-slug/index.
std::string instance_id(std::string_view concept_id, int cognitive_index);

/// Counts per stage value plus "total".
std::map<std::string, std::size_t> stage_counts(const std::vector<InstructionInstance>& items);

}  // namespace corgi
