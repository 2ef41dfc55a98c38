// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "corgi/teacher.hpp"
#include "corgi/types.hpp"

namespace corgi {

struct GenerationOptions {
  std::string model;
  double temperature = 0.7;
  int max_tokens = 1024;
};

/// Replaces refined_description with the teacher's reply to the refinement
/// prompt. Throws PipelineError on an empty reply.
Course refine_description(const Course& course, TeacherClient& client, const GenerationOptions& opts = {});

struct SkippedEntry {
  std::size_t line = 0;  // 1-based line within the reply
  std::string text;
};

struct ConceptExtraction {
  std::vector<Concept> concepts;
  std::vector<SkippedEntry> skipped;
};

/// Parses "N. name: explanation" and "Concept N -> name: explanation" (also
/// with a unicode arrow) entries; continuation lines join the current entry.
/// Entries lacking a name/explanation separator are skipped and reported.
ConceptExtraction parse_concept_list(const Course& course, std::string_view reply);

/// Throws PipelineError when the reply has no parseable entry.
ConceptExtraction extract_concepts(const Course& course, TeacherClient& client, const GenerationOptions& opts = {});

enum class DedupScope { global, per_subject };

struct DedupDrop {
  std::string id;
  std::string duplicate_of;
  double similarity = 0.0;
};

struct DedupReport {
  double threshold = 0.67;
  std::vector<std::string> kept;
  std::vector<DedupDrop> dropped;
};

struct DedupResult {
  std::vector<Concept> kept;  // input order, embeddings attached
  DedupReport report;
};

/// "name: explanation", the text that gets embedded.
std::string embedding_text(const Concept& c);

/// Greedy keep-first over concepts that already carry embeddings: a concept
/// is dropped iff its cosine to some already-kept concept (in scope) is at
/// least `threshold`. Throws std::invalid_argument unless 0 < threshold <= 1.
DedupResult dedup_embedded(std::vector<Concept> concepts, double threshold = 0.67,
                           DedupScope scope = DedupScope::global);

/// Embeds concepts lacking an embedding (bounded concurrency, order kept),
/// then runs dedup_embedded.
DedupResult dedup_concepts(std::vector<Concept> concepts, Embedder& embedder, double threshold = 0.67,
                           DedupScope scope = DedupScope::global, std::size_t max_concurrency = 8,
                           const std::string& embedding_model = {});

Json to_json(const DedupReport& report);

}  // namespace corgi
