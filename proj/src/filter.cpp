// SPDX-License-Identifier: Apache-2.0
#include "corgi/filter.hpp"

#include <array>
#include <stdexcept>

#include "corgi/error.hpp"
#include "corgi/executor.hpp"
#include "corgi/text.hpp"

namespace corgi {
namespace {

constexpr std::array<std::string_view, 9> kKeywords = {
    "ai assistant", "ai language model", "sorry, ",     "sorry but ", "sorry for the confusion ",
    "i'm unable to ", "without further ", "apologize", "i cannot"};

std::string check_text(std::string_view text) {
  std::string lower = to_lower(text);
  for (auto kw : kKeywords) {
    if (lower.find(kw) != std::string::npos) return "keyword:" + std::string(kw);
  }
  if (word_count(text) <= 2) return "too_short";
  return {};
}

}  // namespace

std::span<const std::string_view> exclusion_keywords() { return kKeywords; }

RuleDecision rule_filter(std::string_view question, std::string_view answer) {
  if (auto r = check_text(question); !r.empty()) return {false, "question " + r};
  if (auto r = check_text(answer); !r.empty()) return {false, "answer " + r};
  return {};
}

RuleDecision rule_filter(const InstructionInstance& inst) { return rule_filter(inst.question, inst.answer); }

std::size_t RetrievalDecision::yes_count() const {
  std::size_t n = 0;
  for (auto v : votes) n += v == Vote::yes;
  return n;
}

RetrievalDecision retrieval_filter(const InstructionInstance& inst, Retriever& retriever, TeacherClient& client,
                                   int required_yes, const JudgeOptions& judge) {
  if (required_yes < 1 || required_yes > 3) throw std::invalid_argument("required_yes must be in 1..3");
  RetrievalDecision d;
  try {
    auto passages = retriever.retrieve(inst.question, 3);
    for (const auto& p : passages) d.votes.push_back(judge_relevance(client, inst.question, p.title, p.text, judge));
  } catch (const std::exception& e) {
    d.outcome = RetrievalOutcome::error;
    d.votes.clear();
    d.error = e.what();
    return d;
  }
  d.outcome = d.yes_count() >= static_cast<std::size_t>(required_yes) ? RetrievalOutcome::keep : RetrievalOutcome::drop;
  return d;
}

Json to_json(const FilterStats& s) {
  Json reasons = Json::object();
  for (const auto& [k, v] : s.rule_drop_reasons) reasons[k] = v;
  return Json{{"input_count", s.input_count},   {"rule_dropped", s.rule_dropped},
              {"retrieval_dropped", s.retrieval_dropped}, {"kept", s.kept},
              {"errored", s.errored},           {"rule_drop_reasons", std::move(reasons)}};
}

FilterResult run_filters(const Dataset& d, Retriever& retriever, TeacherClient& client, const FilterConfig& cfg) {
  if (cfg.required_yes < 1 || cfg.required_yes > 3) throw std::invalid_argument("required_yes must be in 1..3");
  FilterResult result;
  result.kept.manifest = d.manifest;
  FilterStats& stats = result.stats;
  stats.input_count = d.items.size();

  std::vector<RuleDecision> rules;
  std::vector<std::size_t> survivors;
  rules.reserve(d.items.size());
  for (std::size_t i = 0; i < d.items.size(); ++i) {
    rules.push_back(rule_filter(d.items[i]));
    if (rules.back().keep) survivors.push_back(i);
  }

  auto decisions = bounded_map(survivors.size(), cfg.max_concurrency, [&](std::size_t s) {
    return retrieval_filter(d.items[survivors[s]], retriever, client, cfg.required_yes, cfg.judge);
  });

  for (const auto& dec : decisions) {
    if (dec.error) std::rethrow_exception(dec.error);
    stats.errored += dec.value->outcome == RetrievalOutcome::error;
  }
  if (!survivors.empty() &&
      static_cast<double>(stats.errored) > cfg.max_failure_fraction * static_cast<double>(survivors.size())) {
    std::string first;
    for (const auto& dec : decisions) {
      if (dec.value->outcome == RetrievalOutcome::error) {
        first = dec.value->error;
        break;
      }
    }
    throw PipelineError(std::to_string(stats.errored) + " of " + std::to_string(survivors.size()) +
                        " retrieval checks failed; first error: " + first);
  }

  std::size_t next = 0;
  for (std::size_t i = 0; i < d.items.size(); ++i) {
    InstructionInstance inst = d.items[i];
    if (!rules[i].keep) {
      inst.filter = {FilterState::dropped_rule, rules[i].reason, {}};
      ++stats.rule_dropped;
      ++stats.rule_drop_reasons[rules[i].reason];
      result.dropped.push_back(std::move(inst));
      continue;
    }
    const RetrievalDecision& dec = *decisions[next++].value;
    switch (dec.outcome) {
      case RetrievalOutcome::keep:
        inst.filter = {FilterState::kept, {}, dec.votes};
        ++stats.kept;
        result.kept.items.push_back(std::move(inst));
        break;
      case RetrievalOutcome::drop:
        inst.filter = {FilterState::dropped_retrieval, {}, dec.votes};
        ++stats.retrieval_dropped;
        result.dropped.push_back(std::move(inst));
        break;
      case RetrievalOutcome::error:
        inst.filter = {FilterState::unfiltered, {}, {}};
        ++stats.kept;
        result.kept.items.push_back(std::move(inst));
        break;
    }
  }
  result.kept.manifest.counts = stage_counts(result.kept.items);
  return result;
}

}  // namespace corgi
