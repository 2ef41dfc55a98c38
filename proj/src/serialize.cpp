// SPDX-License-Identifier: Apache-2.0
#include "corgi/serialize.hpp"

#include <string>

#include "corgi/error.hpp"

namespace corgi {
namespace {

class Reader {
 public:
  Reader(const Json& j, std::size_t line) : j_(j), line_(line) {
    if (!j_.is_object()) throw DatasetError(where() + "record is not a JSON object", line_, "");
  }

  const Json* find(const char* field) const {
    auto it = j_.find(field);
    return it == j_.end() ? nullptr : &*it;
  }

  std::string str(const char* field) const {
    const Json* v = find(field);
    if (!v) fail(field, "missing field");
    if (!v->is_string()) fail(field, "expected a string");
    return v->get<std::string>();
  }

  std::optional<std::string> opt_str(const char* field) const {
    const Json* v = find(field);
    if (!v || v->is_null()) return std::nullopt;
    if (!v->is_string()) fail(field, "expected a string");
    return v->get<std::string>();
  }

  long long integer(const char* field) const {
    const Json* v = find(field);
    if (!v) fail(field, "missing field");
    if (!v->is_number_integer()) fail(field, "expected an integer");
    return v->get<long long>();
  }

  [[noreturn]] void fail(const char* field, const std::string& what) const {
    throw DatasetError(where() + "field `" + field + "`: " + what, line_, field);
  }

 private:
  std::string where() const { return line_ ? "line " + std::to_string(line_) + ": " : std::string(); }

  const Json& j_;
  std::size_t line_;
};

EducationalStage read_stage(const Reader& r) {
  auto value = parse_stage_level(r.str("stage"));
  if (!value) r.fail("stage", "expected \"secondary\" or \"higher\"");
  return EducationalStage{*value, r.opt_str("stage_level")};
}

}  // namespace

void write_stage(const EducationalStage& stage, Json& into) {
  into["stage"] = to_string(stage.value);
  if (stage.sublevel) into["stage_level"] = *stage.sublevel;
}

Json to_json(const Course& c) {
  Json j = Json::object();
  j["id"] = c.id;
  j["subject"] = c.subject;
  write_stage(c.stage, j);
  j["title"] = c.title;
  j["description"] = c.description;
  if (c.refined_description) j["refined_description"] = *c.refined_description;
  j["source"] = c.source;
  return j;
}

Json to_json(const Concept& c) {
  Json j = Json::object();
  j["id"] = c.id;
  j["course_id"] = c.course_id;
  j["subject"] = c.subject;
  write_stage(c.stage, j);
  j["name"] = c.name;
  j["explanation"] = c.explanation;
  if (c.embedding) j["embedding"] = *c.embedding;
  j["dedup_status"] = c.dedup_status == DedupStatus::kept ? "kept" : "dropped";
  if (c.dedup_status == DedupStatus::dropped) j["duplicate_of"] = c.duplicate_of;
  return j;
}

Json to_json(const InstructionInstance& inst) {
  Json j = Json::object();
  j["id"] = inst.id;
  write_stage(inst.stage, j);
  j["subject"] = inst.subject;
  j["course_id"] = inst.course_id;
  j["concept_id"] = inst.concept_id;
  j["cognitive_index"] = inst.cognitive_index;
  j["cognitive_process"] = inst.cognitive_process;
  j["cognitive_subprocess"] = inst.cognitive_subprocess;
  j["cognitive_load"] = to_string(inst.cognitive_load);
  j["system_message"] = inst.system_message;
  j["question"] = inst.question;
  j["answer"] = inst.answer;
  j["filter_status"] = to_string(inst.filter.state);
  if (!inst.filter.reason.empty()) j["filter_reason"] = inst.filter.reason;
  if (!inst.filter.votes.empty()) {
    Json votes = Json::array();
    for (Vote v : inst.filter.votes) votes.push_back(v == Vote::yes ? "yes" : "no");
    j["votes"] = std::move(votes);
  }
  j["provenance"] = Json{{"teacher_model", inst.provenance.teacher_model},
                         {"created_at", inst.provenance.created_at},
                         {"run_id", inst.provenance.run_id}};
  return j;
}

Json to_json(const Manifest& m) {
  Json j = Json::object();
  j["run_id"] = m.run_id;
  Json counts = Json::object();
  for (const auto& [k, v] : m.counts) counts[k] = v;
  j["counts"] = std::move(counts);
  if (m.strategy) j["strategy"] = *m.strategy;
  if (m.seed) j["seed"] = *m.seed;
  for (const auto& [k, v] : m.extra.items()) j[k] = v;
  return j;
}

Course course_from_json(const Json& j, std::size_t line) {
  Reader r(j, line);
  Course c;
  c.id = r.str("id");
  c.subject = r.str("subject");
  c.stage = read_stage(r);
  c.title = r.str("title");
  c.description = r.str("description");
  c.refined_description = r.opt_str("refined_description");
  c.source = r.str("source");
  return c;
}

Concept concept_from_json(const Json& j, std::size_t line) {
  Reader r(j, line);
  Concept c;
  c.id = r.str("id");
  c.course_id = r.str("course_id");
  c.subject = r.str("subject");
  c.stage = read_stage(r);
  c.name = r.str("name");
  c.explanation = r.str("explanation");
  if (const Json* e = r.find("embedding"); e && !e->is_null()) {
    if (!e->is_array()) r.fail("embedding", "expected an array of numbers");
    std::vector<double> v;
    v.reserve(e->size());
    for (const auto& x : *e) {
      if (!x.is_number()) r.fail("embedding", "expected an array of numbers");
      v.push_back(x.get<double>());
    }
    c.embedding = std::move(v);
  }
  std::string status = r.str("dedup_status");
  if (status == "kept") {
    c.dedup_status = DedupStatus::kept;
  } else if (status == "dropped") {
    c.dedup_status = DedupStatus::dropped;
    c.duplicate_of = r.str("duplicate_of");
  } else {
    r.fail("dedup_status", "expected \"kept\" or \"dropped\"");
  }
  return c;
}

InstructionInstance instance_from_json(const Json& j, std::size_t line) {
  Reader r(j, line);
  InstructionInstance inst;
  inst.id = r.str("id");
  inst.stage = read_stage(r);
  inst.subject = r.str("subject");
  inst.course_id = r.str("course_id");
  inst.concept_id = r.str("concept_id");
  inst.cognitive_index = static_cast<int>(r.integer("cognitive_index"));
  inst.cognitive_process = r.str("cognitive_process");
  inst.cognitive_subprocess = r.str("cognitive_subprocess");
  auto load = parse_load(r.str("cognitive_load"));
  if (!load) r.fail("cognitive_load", "expected easy, medium or hard");
  inst.cognitive_load = *load;
  inst.system_message = r.str("system_message");
  inst.question = r.str("question");
  inst.answer = r.str("answer");
  auto state = parse_filter_state(r.str("filter_status"));
  if (!state) r.fail("filter_status", "unknown filter status");
  inst.filter.state = *state;
  inst.filter.reason = r.opt_str("filter_reason").value_or("");
  if (const Json* votes = r.find("votes"); votes && !votes->is_null()) {
    if (!votes->is_array()) r.fail("votes", "expected an array");
    for (const auto& v : *votes) {
      if (v == "yes") {
        inst.filter.votes.push_back(Vote::yes);
      } else if (v == "no") {
        inst.filter.votes.push_back(Vote::no);
      } else {
        r.fail("votes", "expected \"yes\" or \"no\" entries");
      }
    }
  }
  const Json* prov = r.find("provenance");
  if (!prov) r.fail("provenance", "missing field");
  if (!prov->is_object()) r.fail("provenance", "expected an object");
  Reader p(*prov, line);
  inst.provenance.teacher_model = p.str("teacher_model");
  inst.provenance.created_at = p.str("created_at");
  inst.provenance.run_id = p.str("run_id");
  return inst;
}

Manifest manifest_from_json(const Json& j) {
  if (!j.is_object()) throw DatasetError("manifest is not a JSON object");
  Manifest m;
  for (const auto& [key, value] : j.items()) {
    if (key == "run_id") {
      m.run_id = value.get<std::string>();
    } else if (key == "counts") {
      for (const auto& [k, v] : value.items()) m.counts[k] = v.get<std::size_t>();
    } else if (key == "strategy") {
      m.strategy = value.get<std::string>();
    } else if (key == "seed") {
      m.seed = value.get<std::uint64_t>();
    } else {
      m.extra[key] = value;
    }
  }
  return m;
}

std::string dump_line(const Json& j) { return j.dump(-1, ' ', false, Json::error_handler_t::replace); }

}  // namespace corgi
