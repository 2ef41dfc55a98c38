// SPDX-License-Identifier: Apache-2.0
#include "corgi/types.hpp"

namespace corgi {

std::string_view to_string(StageLevel s) { return s == StageLevel::secondary ? "secondary" : "higher"; }

std::string_view to_string(CognitiveProcess p) {
  switch (p) {
    case CognitiveProcess::remembering: return "remembering";
    case CognitiveProcess::understanding: return "understanding";
    case CognitiveProcess::applying: return "applying";
  }
  return "";
}

std::string_view to_string(CognitiveLoad l) {
  switch (l) {
    case CognitiveLoad::easy: return "easy";
    case CognitiveLoad::medium: return "medium";
    case CognitiveLoad::hard: return "hard";
  }
  return "";
}

std::string_view to_string(FilterState s) {
  switch (s) {
    case FilterState::unfiltered: return "unfiltered";
    case FilterState::kept: return "kept";
    case FilterState::dropped_rule: return "dropped_rule";
    case FilterState::dropped_retrieval: return "dropped_retrieval";
  }
  return "";
}

std::optional<StageLevel> parse_stage_level(std::string_view s) {
  if (s == "secondary") return StageLevel::secondary;
  if (s == "higher") return StageLevel::higher;
  return std::nullopt;
}

std::optional<CognitiveProcess> parse_process(std::string_view s) {
  if (s == "remembering") return CognitiveProcess::remembering;
  if (s == "understanding") return CognitiveProcess::understanding;
  if (s == "applying") return CognitiveProcess::applying;
  return std::nullopt;
}

std::optional<CognitiveLoad> parse_load(std::string_view s) {
  if (s == "easy") return CognitiveLoad::easy;
  if (s == "medium") return CognitiveLoad::medium;
  if (s == "hard") return CognitiveLoad::hard;
  return std::nullopt;
}

std::optional<FilterState> parse_filter_state(std::string_view s) {
  for (auto st : {FilterState::unfiltered, FilterState::kept, FilterState::dropped_rule,
                  FilterState::dropped_retrieval}) {
    if (s == to_string(st)) return st;
  }
  return std::nullopt;
}

std::string instance_id(std::string_view concept_id, int cognitive_index) {
  return std::string(concept_id) + "/" + std::to_string(cognitive_index);
}

std::map<std::string, std::size_t> stage_counts(const std::vector<InstructionInstance>& items) {
  std::map<std::string, std::size_t> counts{{"higher", 0}, {"secondary", 0}, {"total", items.size()}};
  for (const auto& it : items) ++counts[std::string(to_string(it.stage.value))];
  return counts;
}

}  // namespace corgi
