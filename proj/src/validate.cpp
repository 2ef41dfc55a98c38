// SPDX-License-Identifier: Apache-2.0
#include "corgi/validate.hpp"

#include <algorithm>
#include <unordered_map>

#include "corgi/cognitive.hpp"
#include "corgi/text.hpp"

namespace corgi {
namespace {

void add(ValidationReport& r, const InstructionInstance& inst, std::size_t pos, std::string kind,
         std::string field, std::string message) {
  r.violations.push_back({std::move(kind), inst.id, {pos}, std::move(field), std::move(message)});
}

bool slug_prefix_ok(std::string_view id, std::string_view prefix) {
  return id.size() > prefix.size() + 1 && id.substr(0, prefix.size()) == prefix && id[prefix.size()] == '/';
}

std::string safe_slug(std::string_view s) {
  try {
    return slugify(s);
  } catch (const std::exception&) {
    return {};
  }
}

// YYYY-MM-DDTHH:MM:SS[.fff](Z|+HH:MM|-HH:MM), checked by shape only.
bool is_timestamp(std::string_view s) {
  auto digits = [&](std::size_t at, std::size_t n) {
    if (at + n > s.size()) return false;
    for (std::size_t i = at; i < at + n; ++i) {
      if (s[i] < '0' || s[i] > '9') return false;
    }
    return true;
  };
  auto at = [&](std::size_t i, char c) { return i < s.size() && s[i] == c; };
  if (!(digits(0, 4) && at(4, '-') && digits(5, 2) && at(7, '-') && digits(8, 2) && at(10, 'T') && digits(11, 2) &&
        at(13, ':') && digits(14, 2) && at(16, ':') && digits(17, 2))) {
    return false;
  }
  std::size_t i = 19;
  if (at(i, '.')) {
    std::size_t start = ++i;
    while (digits(i, 1)) ++i;
    if (i == start) return false;
  }
  if (at(i, 'Z')) return i + 1 == s.size();
  if (at(i, '+') || at(i, '-')) return digits(i + 1, 2) && at(i + 3, ':') && digits(i + 4, 2) && i + 6 == s.size();
  return false;
}

}  // namespace

std::string ValidationReport::summary() const {
  std::string out;
  for (const auto& v : violations) {
    out += v.kind + " [" + v.instance_id + "]";
    if (!v.field.empty()) out += " field=" + v.field;
    out += ": " + v.message + "\n";
  }
  return out;
}

void validate_instance(const InstructionInstance& inst, std::size_t pos, ValidationReport& r) {
  auto require = [&](const std::string& value, const char* field) {
    if (trim(value).empty()) add(r, inst, pos, "empty_field", field, std::string(field) + " is empty");
  };
  require(inst.id, "id");
  require(inst.subject, "subject");
  require(inst.course_id, "course_id");
  require(inst.concept_id, "concept_id");
  require(inst.provenance.teacher_model, "provenance.teacher_model");
  require(inst.provenance.run_id, "provenance.run_id");
  if (!is_timestamp(inst.provenance.created_at)) {
    add(r, inst, pos, "bad_timestamp", "provenance.created_at", "not an ISO-8601 timestamp");
  }

  bool dropped = inst.filter.state == FilterState::dropped_rule || inst.filter.state == FilterState::dropped_retrieval;
  if (!dropped) {
    require(inst.question, "question");
    require(inst.answer, "answer");
  }
  if (inst.filter.state == FilterState::dropped_rule && inst.filter.reason.empty()) {
    add(r, inst, pos, "filter_inconsistent", "filter_reason", "rule drop without a reason");
  }
  if (inst.filter.state == FilterState::dropped_retrieval && inst.filter.votes.empty()) {
    add(r, inst, pos, "filter_inconsistent", "votes", "retrieval drop without votes");
  }
  if (inst.filter.votes.size() > 3) {
    add(r, inst, pos, "filter_inconsistent", "votes", "more than three relevance votes");
  }

  if (inst.stage.sublevel && inst.stage.value != StageLevel::higher) {
    add(r, inst, pos, "stage_inconsistent", "stage_level", "sub-level tag only allowed for higher education");
  }
  if (istarts_with(inst.subject, "Secondary Education") && inst.stage.value != StageLevel::secondary) {
    add(r, inst, pos, "stage_inconsistent", "stage", "subject is secondary education");
  }
  if (istarts_with(inst.subject, "Higher Education") && inst.stage.value != StageLevel::higher) {
    add(r, inst, pos, "stage_inconsistent", "stage", "subject is higher education");
  }

  if (inst.cognitive_index < 1 || inst.cognitive_index > kTemplateCount) {
    add(r, inst, pos, "index_out_of_range", "cognitive_index", "cognitive_index must be in 1..19");
  } else {
    const auto& t = cognitive_template(inst.cognitive_index);
    if (inst.cognitive_process != to_string(t.process)) {
      add(r, inst, pos, "template_mismatch", "cognitive_process",
          "expected " + std::string(to_string(t.process)) + " for index " + std::to_string(t.index));
    }
    if (inst.cognitive_subprocess != t.subprocess) {
      add(r, inst, pos, "template_mismatch", "cognitive_subprocess",
          "expected " + std::string(t.subprocess) + " for index " + std::to_string(t.index));
    }
    if (inst.cognitive_load != t.load) {
      add(r, inst, pos, "template_mismatch", "cognitive_load",
          "expected " + std::string(to_string(t.load)) + " for index " + std::to_string(t.index));
    }
  }

  auto messages = system_messages_for(inst.cognitive_load);
  if (std::find(messages.begin(), messages.end(), inst.system_message) == messages.end()) {
    add(r, inst, pos, "unknown_system_message", "system_message",
        "not one of the system messages for load " + std::string(to_string(inst.cognitive_load)));
  }

  // Id structure: <subject-slug>/<course-slug>/<concept-slug>/<index>.
  std::string subject_slug = safe_slug(inst.subject);
  if (!inst.course_id.empty() && (subject_slug.empty() || !slug_prefix_ok(inst.course_id, subject_slug))) {
    add(r, inst, pos, "id_mismatch", "course_id", "course_id does not start with the subject slug");
  }
  if (!inst.concept_id.empty() && !slug_prefix_ok(inst.concept_id, inst.course_id)) {
    add(r, inst, pos, "id_mismatch", "concept_id", "concept_id does not start with course_id");
  }
  if (!inst.id.empty() && inst.id != instance_id(inst.concept_id, inst.cognitive_index)) {
    add(r, inst, pos, "id_mismatch", "id", "id is not <concept_id>/<cognitive_index>");
  }
}

ValidationReport validate(const Dataset& d) {
  ValidationReport report;
  std::unordered_map<std::string, std::vector<std::size_t>> seen;
  std::vector<std::string> order;
  for (std::size_t i = 0; i < d.items.size(); ++i) {
    validate_instance(d.items[i], i, report);
    auto& positions = seen[d.items[i].id];
    if (positions.empty()) order.push_back(d.items[i].id);
    positions.push_back(i);
  }
  for (const auto& id : order) {
    const auto& positions = seen[id];
    if (positions.size() > 1) {
      report.violations.push_back(
          {"id_collision", id, positions, "id", std::to_string(positions.size()) + " items share this id"});
    }
  }
  if (!d.manifest.counts.empty()) {
    auto observed = stage_counts(d.items);
    for (const auto& [key, count] : d.manifest.counts) {
      auto it = observed.find(key);
      std::size_t actual = it == observed.end() ? 0 : it->second;
      if (actual != count) {
        report.violations.push_back({"manifest_count_mismatch", "", {}, "counts." + key,
                                     "manifest says " + std::to_string(count) + ", observed " +
                                         std::to_string(actual)});
      }
    }
  }
  return report;
}

}  // namespace corgi
