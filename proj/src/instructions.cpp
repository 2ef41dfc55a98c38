// SPDX-License-Identifier: Apache-2.0
#include "corgi/instructions.hpp"

#include "corgi/cognitive.hpp"
#include "corgi/digest.hpp"
#include "corgi/error.hpp"
#include "corgi/executor.hpp"
#include "corgi/prompts.hpp"
#include "corgi/text.hpp"

namespace corgi {

std::string strip_question_label(std::string_view reply) {
  auto s = trim(reply);
  constexpr std::string_view label = "question:";
  if (istarts_with(s, label)) s = trim(s.substr(label.size()));
  return std::string(s);
}

std::string generate_question(const Concept& cpt, std::string_view course_title, const CognitiveTemplate& tmpl,
                              const std::optional<std::string>& previous_question, TeacherClient& client,
                              const GenerationOptions& opts) {
  CompletionRequest req;
  req.prompt = build_question_prompt(cpt.subject, course_title, cpt, tmpl, previous_question);
  req.temperature = opts.temperature;
  req.max_tokens = opts.max_tokens;
  req.model = opts.model;
  std::string q = strip_question_label(client.complete(req));
  if (q.empty()) throw PipelineError("empty question reply for " + cpt.id + " template " + std::to_string(tmpl.index));
  return q;
}

Answer generate_answer(std::string_view question, CognitiveLoad load, SplitMix64& rng, TeacherClient& client,
                       const GenerationOptions& opts) {
  if (trim(question).empty()) throw PipelineError("cannot answer an empty question");
  Answer out;
  out.system_message = pick_system_message(load, rng);
  CompletionRequest req;
  req.system_message = out.system_message;
  req.prompt = std::string(question);
  req.temperature = opts.temperature;
  req.max_tokens = opts.max_tokens;
  req.model = opts.model;
  out.answer = std::string(trim(client.complete(req)));
  if (out.answer.empty()) throw PipelineError("empty answer reply");
  return out;
}

Json to_json(const GenerationFailure& f) {
  return Json{{"concept_id", f.concept_id},
              {"failed_index", f.failed_index},
              {"error", f.error},
              {"generated", f.generated},
              {"ungenerated", f.ungenerated}};
}

ConceptInstances generate_instances(const Concept& cpt, std::string_view course_title, TeacherClient& client,
                                    SplitMix64& rng, const Provenance& provenance, const GenerationOptions& opts) {
  ConceptInstances out;
  std::optional<std::string> previous;
  for (const auto& tmpl : cognitive_templates()) {
    try {
      std::string question = generate_question(cpt, course_title, tmpl, previous, client, opts);
      Answer ans = generate_answer(question, tmpl.load, rng, client, opts);

      InstructionInstance inst;
      inst.id = instance_id(cpt.id, tmpl.index);
      inst.stage = cpt.stage;
      inst.subject = cpt.subject;
      inst.course_id = cpt.course_id;
      inst.concept_id = cpt.id;
      inst.cognitive_index = tmpl.index;
      inst.cognitive_process = std::string(to_string(tmpl.process));
      inst.cognitive_subprocess = std::string(tmpl.subprocess);
      inst.cognitive_load = tmpl.load;
      inst.system_message = std::move(ans.system_message);
      inst.question = question;
      inst.answer = std::move(ans.answer);
      inst.provenance = provenance;
      out.instances.push_back(std::move(inst));
      previous = std::move(question);
    } catch (const std::exception& e) {
      GenerationFailure f;
      f.concept_id = cpt.id;
      f.failed_index = tmpl.index;
      f.error = e.what();
      for (int i = 1; i < tmpl.index; ++i) f.generated.push_back(i);
      for (int i = tmpl.index; i <= kTemplateCount; ++i) f.ungenerated.push_back(i);
      out.instances.clear();
      out.failure = std::move(f);
      return out;
    }
  }
  return out;
}

std::uint64_t concept_seed(std::uint64_t seed, std::string_view concept_id) {
  SplitMix64 mix(seed ^ fnv1a64(concept_id));
  return mix.next();
}

GenerationRun generate_all(const std::vector<Concept>& concepts,
                           const std::map<std::string, std::string>& course_titles, TeacherClient& client,
                           std::uint64_t seed, const Provenance& provenance, const GenerationOptions& opts,
                           std::size_t max_concurrency) {
  auto results = bounded_map(concepts.size(), max_concurrency, [&](std::size_t i) {
    const Concept& c = concepts[i];
    auto title = course_titles.find(c.course_id);
    if (title == course_titles.end()) throw PipelineError("no course title for " + c.course_id);
    SplitMix64 rng(concept_seed(seed, c.id));
    return generate_instances(c, title->second, client, rng, provenance, opts);
  });
  GenerationRun run;
  for (auto& r : results) {
    if (r.error) std::rethrow_exception(r.error);
    auto& ci = *r.value;
    for (auto& inst : ci.instances) run.instances.push_back(std::move(inst));
    if (ci.failure) run.failures.push_back(std::move(*ci.failure));
  }
  return run;
}

}  // namespace corgi
