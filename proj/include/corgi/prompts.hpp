// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "corgi/rng.hpp"
#include "corgi/types.hpp"

namespace corgi {

enum class PromptTemplate { refinement, concept_generation, question_generation, retrieval_check };

std::string_view template_name(PromptTemplate t);
std::string_view template_text(PromptTemplate t);

/// Slot names in order of first occurrence.
std::vector<std::string> template_slots(PromptTemplate t);

struct PromptFill {
  PromptTemplate template_name;
  std::map<std::string, std::string> slots;
};

/// Substitutes every `{slot}` in one pass (values are never rescanned).
/// Throws PromptError when a required slot is missing or blank.
std::string fill(const PromptFill& fill);

std::string build_refinement_prompt(const Course& course);
std::string build_concept_prompt(const Course& course);

/// A missing or empty previous question renders as "None".
std::string build_question_prompt(std::string_view subject, std::string_view course_title, const Concept& cpt,
                                  const CognitiveTemplate& tmpl,
                                  const std::optional<std::string>& previous_question);

std::string build_retrieval_check_prompt(std::string_view question, std::string_view passage_title,
                                         std::string_view passage);

/// Uniform draw from the load's system-message set.
std::string pick_system_message(CognitiveLoad load, SplitMix64& rng);

}  // namespace corgi
