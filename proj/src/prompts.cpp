// SPDX-License-Identifier: Apache-2.0
#include "corgi/prompts.hpp"

#include <algorithm>
#include <cctype>

#include "corgi/cognitive.hpp"
#include "corgi/error.hpp"
#include "corgi/prompt_resources.hpp"
#include "corgi/text.hpp"

namespace corgi {
namespace {

bool is_slot_char(char c) { return c == '_' || (std::islower(static_cast<unsigned char>(c)) != 0); }

/// Calls on_text/on_slot for each literal run and each `{slot}` marker.
template <typename Text, typename Slot>
void scan(std::string_view tmpl, Text on_text, Slot on_slot) {
  std::size_t i = 0;
  std::size_t literal_start = 0;
  while (i < tmpl.size()) {
    if (tmpl[i] == '{') {
      std::size_t j = i + 1;
      while (j < tmpl.size() && is_slot_char(tmpl[j])) ++j;
      if (j < tmpl.size() && tmpl[j] == '}' && j > i + 1) {
        on_text(tmpl.substr(literal_start, i - literal_start));
        on_slot(tmpl.substr(i + 1, j - i - 1));
        i = j + 1;
        literal_start = i;
        continue;
      }
    }
    ++i;
  }
  on_text(tmpl.substr(literal_start));
}

}  // namespace

std::string_view template_name(PromptTemplate t) {
  switch (t) {
    case PromptTemplate::refinement: return "refinement";
    case PromptTemplate::concept_generation: return "concept_generation";
    case PromptTemplate::question_generation: return "question_generation";
    case PromptTemplate::retrieval_check: return "retrieval_check";
  }
  return "";
}

std::string_view template_text(PromptTemplate t) {
  switch (t) {
    case PromptTemplate::refinement: return resources::refinement;
    case PromptTemplate::concept_generation: return resources::concept_generation;
    case PromptTemplate::question_generation: return resources::question_generation;
    case PromptTemplate::retrieval_check: return resources::retrieval_check;
  }
  return "";
}

std::vector<std::string> template_slots(PromptTemplate t) {
  std::vector<std::string> slots;
  scan(template_text(t), [](std::string_view) {}, [&](std::string_view s) {
    if (std::find(slots.begin(), slots.end(), s) == slots.end()) slots.emplace_back(s);
  });
  return slots;
}

std::string fill(const PromptFill& f) {
  std::string out;
  scan(template_text(f.template_name), [&](std::string_view text) { out += text; },
       [&](std::string_view slot) {
         auto it = f.slots.find(std::string(slot));
         if (it == f.slots.end() || trim(it->second).empty()) {
           throw PromptError(std::string(template_name(f.template_name)) + " prompt: slot {" + std::string(slot) +
                             "} is missing or empty");
         }
         out += it->second;
       });
  return out;
}

std::string build_refinement_prompt(const Course& course) {
  return fill({PromptTemplate::refinement,
               {{"subject", course.subject},
                {"course_title", course.title},
                {"course_description", course.description}}});
}

std::string build_concept_prompt(const Course& course) {
  if (!course.refined_description) {
    throw PromptError("course " + course.id + " has no refined description; run refinement first");
  }
  return fill({PromptTemplate::concept_generation,
               {{"subject", course.subject},
                {"course_title", course.title},
                {"course_description", *course.refined_description}}});
}

std::string build_question_prompt(std::string_view subject, std::string_view course_title, const Concept& cpt,
                                  const CognitiveTemplate& tmpl,
                                  const std::optional<std::string>& previous_question) {
  if (tmpl.index < 1 || tmpl.index > kTemplateCount) throw PromptError("template index out of range");
  std::string previous = previous_question && !trim(*previous_question).empty() ? *previous_question : "None";
  return fill({PromptTemplate::question_generation,
               {{"subject", std::string(subject)},
                {"course_title", std::string(course_title)},
                {"concept", cpt.name + ": " + cpt.explanation},
                {"cognitive_process", std::string(to_string(tmpl.process))},
                {"cognitive_load", std::string(to_string(tmpl.load))},
                {"cognitive_process_definition", std::string(tmpl.definition)},
                {"question_format", std::string(tmpl.format_text)},
                {"previous_question", previous}}});
}

std::string build_retrieval_check_prompt(std::string_view question, std::string_view passage_title,
                                         std::string_view passage) {
  return fill({PromptTemplate::retrieval_check,
               {{"question", std::string(question)},
                {"retrieved_passage_title", std::string(passage_title)},
                {"retrieved_passage", std::string(passage)}}});
}

std::string pick_system_message(CognitiveLoad load, SplitMix64& rng) {
  auto messages = system_messages_for(load);
  return std::string(messages[rng.below(messages.size())]);
}

}  // namespace corgi
