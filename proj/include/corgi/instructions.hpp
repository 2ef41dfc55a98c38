// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "corgi/concepts.hpp"
#include "corgi/rng.hpp"
#include "corgi/teacher.hpp"
#include "corgi/types.hpp"

namespace corgi {

/// Drops a leading "Question:" label (any case) and surrounding whitespace.
std::string strip_question_label(std::string_view reply);

/// Sends the question prompt with an empty system message.
std::string generate_question(const Concept& cpt, std::string_view course_title, const CognitiveTemplate& tmpl,
                              const std::optional<std::string>& previous_question, TeacherClient& client,
                              const GenerationOptions& opts = {});

struct Answer {
  std::string system_message;
  std::string answer;
};

/// Draws the system message for `load`, then asks the question.
Answer generate_answer(std::string_view question, CognitiveLoad load, SplitMix64& rng, TeacherClient& client,
                       const GenerationOptions& opts = {});

/// A concept that failed part-way. None of its instances are emitted, so a
/// rerun regenerates the whole chain.
struct GenerationFailure {
  std::string concept_id;
  int failed_index = 0;
  std::string error;
  std::vector<int> generated;    // indices that completed before the failure
  std::vector<int> ungenerated;  // failed_index .. 19
};

Json to_json(const GenerationFailure& f);

struct ConceptInstances {
  std::vector<InstructionInstance> instances;
  std::optional<GenerationFailure> failure;
};

/// Templates 1..19 in order; template i sees template i-1's question.
ConceptInstances generate_instances(const Concept& cpt, std::string_view course_title, TeacherClient& client,
                                    SplitMix64& rng, const Provenance& provenance,
                                    const GenerationOptions& opts = {});

/// Per-concept RNG seed, so results do not depend on scheduling.
std::uint64_t concept_seed(std::uint64_t seed, std::string_view concept_id);

struct GenerationRun {
  std::vector<InstructionInstance> instances;  // (concept order, template index)
  std::vector<GenerationFailure> failures;
};

/// `course_titles` maps course id to title; concepts run concurrently.
GenerationRun generate_all(const std::vector<Concept>& concepts,
                           const std::map<std::string, std::string>& course_titles, TeacherClient& client,
                           std::uint64_t seed, const Provenance& provenance, const GenerationOptions& opts = {},
                           std::size_t max_concurrency = 8);

}  // namespace corgi
