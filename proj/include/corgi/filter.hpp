// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "corgi/retriever.hpp"
#include "corgi/teacher.hpp"
#include "corgi/types.hpp"

namespace corgi {

/// Lowercase substrings; trailing spaces are part of the keyword.
std::span<const std::string_view> exclusion_keywords();

struct RuleDecision {
  bool keep = true;
  std::string reason;  // `keyword:<kw>` or `too_short`, with a question/answer prefix
};

/// Checks, in order: question keywords, question length, answer keywords,
/// answer length. Text with two or fewer words is too short.
RuleDecision rule_filter(std::string_view question, std::string_view answer);
RuleDecision rule_filter(const InstructionInstance& inst);

enum class RetrievalOutcome { keep, drop, error };

struct RetrievalDecision {
  RetrievalOutcome outcome = RetrievalOutcome::error;
  std::vector<Vote> votes;
  std::string error;

  std::size_t yes_count() const;
};

/// Judges the top 3 passages; keep iff at least `required_yes` say yes.
/// Failures come back as RetrievalOutcome::error rather than throwing.
RetrievalDecision retrieval_filter(const InstructionInstance& inst, Retriever& retriever, TeacherClient& client,
                                   int required_yes = 1, const JudgeOptions& judge = {});

struct FilterConfig {
  int required_yes = 1;
  std::size_t max_concurrency = 8;
  double max_failure_fraction = 0.2;
  JudgeOptions judge;
};

struct FilterStats {
  std::size_t input_count = 0;
  std::size_t rule_dropped = 0;
  std::size_t retrieval_dropped = 0;
  std::size_t kept = 0;     // includes errored instances, which stay unfiltered
  std::size_t errored = 0;
  std::map<std::string, std::size_t> rule_drop_reasons;

  bool balanced() const { return input_count == rule_dropped + retrieval_dropped + kept; }
};

Json to_json(const FilterStats& s);

struct FilterResult {
  Dataset kept;                               // input order; status kept or unfiltered
  std::vector<InstructionInstance> dropped;   // input order; status and votes set
  FilterStats stats;
};

/// Rule filter on everything, then the retrieval filter on survivors.
/// Throws PipelineError when more than max_failure_fraction of the
/// retrieval checks fail.
FilterResult run_filters(const Dataset& d, Retriever& retriever, TeacherClient& client, const FilterConfig& cfg = {});

}  // namespace corgi
