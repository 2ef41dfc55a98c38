// SPDX-License-Identifier: Apache-2.0
#include "corgi/concepts.hpp"

#include <map>
#include <regex>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "corgi/error.hpp"
#include "corgi/executor.hpp"
#include "corgi/kernels.hpp"
#include "corgi/prompts.hpp"
#include "corgi/text.hpp"

namespace corgi {
namespace {

std::string ask(TeacherClient& client, std::string prompt, const GenerationOptions& opts) {
  CompletionRequest req;
  req.prompt = std::move(prompt);
  req.temperature = opts.temperature;
  req.max_tokens = opts.max_tokens;
  req.model = opts.model;
  return client.complete(req);
}

std::string clean_name(std::string_view s) {
  s = trim(s);
  while (!s.empty() && (s.front() == '*' || s.front() == '"' || s.front() == '#')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == '*' || s.back() == '"')) s.remove_suffix(1);
  return std::string(trim(s));
}

}  // namespace

Course refine_description(const Course& course, TeacherClient& client, const GenerationOptions& opts) {
  std::string reply = ask(client, build_refinement_prompt(course), opts);
  if (trim(reply).empty()) throw PipelineError("empty refinement reply for course " + course.id);
  Course out = course;
  out.refined_description = std::string(trim(reply));
  return out;
}

ConceptExtraction parse_concept_list(const Course& course, std::string_view reply) {
  static const std::regex numbered(R"(^\s*(\d+)\s*[.)]\s+(.*)$)");
  static const std::regex labelled(R"(^\s*Concept\s+(\d+)\s*(?:→|->|\$\\rightarrow\$|:|-)\s*(.*)$)", std::regex::icase);

  struct Entry {
    std::size_t line;
    std::string body;
  };
  std::vector<Entry> entries;
  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos <= reply.size()) {
    auto nl = reply.find('\n', pos);
    std::string line(reply.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos));
    pos = nl == std::string_view::npos ? reply.size() + 1 : nl + 1;
    ++lineno;
    std::smatch m;
    if (std::regex_match(line, m, labelled) || std::regex_match(line, m, numbered)) {
      entries.push_back({lineno, m[2].str()});
    } else if (!entries.empty() && !trim(line).empty()) {
      entries.back().body += " ";
      entries.back().body += trim(line);
    }
  }

  ConceptExtraction out;
  std::unordered_map<std::string, int> slug_uses;
  for (const auto& e : entries) {
    auto colon = e.body.find(':');
    std::string name = colon == std::string::npos ? std::string() : clean_name(e.body.substr(0, colon));
    std::string explanation = colon == std::string::npos ? std::string() : std::string(trim(e.body.substr(colon + 1)));
    std::string slug;
    if (!name.empty()) {
      try {
        slug = slugify(name);
      } catch (const std::invalid_argument&) {
      }
    }
    if (name.empty() || explanation.empty() || slug.empty()) {
      out.skipped.push_back({e.line, e.body});
      continue;
    }
    int uses = ++slug_uses[slug];
    if (uses > 1) slug += "-" + std::to_string(uses);
    Concept c;
    c.id = course.id + "/" + slug;
    c.course_id = course.id;
    c.subject = course.subject;
    c.stage = course.stage;
    c.name = std::move(name);
    c.explanation = std::move(explanation);
    out.concepts.push_back(std::move(c));
  }
  return out;
}

ConceptExtraction extract_concepts(const Course& course, TeacherClient& client, const GenerationOptions& opts) {
  std::string reply = ask(client, build_concept_prompt(course), opts);
  auto out = parse_concept_list(course, reply);
  if (out.concepts.empty()) throw PipelineError("no parseable concepts in reply for course " + course.id);
  return out;
}

std::string embedding_text(const Concept& c) { return c.name + ": " + c.explanation; }

DedupResult dedup_embedded(std::vector<Concept> concepts, double threshold, DedupScope scope) {
  if (!(threshold > 0.0 && threshold <= 1.0)) throw std::invalid_argument("dedup threshold must be in (0, 1]");
  DedupResult result;
  result.report.threshold = threshold;

  struct Pool {
    std::vector<double> rows;
    std::vector<std::size_t> members;  // indices into result.kept
  };
  std::map<std::string, Pool> pools;
  std::size_t dim = 0;

  for (auto& c : concepts) {
    if (!c.embedding) throw std::invalid_argument("concept " + c.id + " has no embedding");
    const auto& e = *c.embedding;
    if (dim == 0) dim = e.size();
    if (e.size() != dim || dim == 0) throw std::invalid_argument("embedding dimension mismatch at concept " + c.id);

    Pool& pool = pools[scope == DedupScope::global ? std::string() : c.subject];
    auto best = kernels::max_cosine(pool.rows, dim, e);
    if (best.index != kernels::npos && best.similarity >= threshold) {
      const Concept& keeper = result.kept[pool.members[best.index]];
      result.report.dropped.push_back({c.id, keeper.id, best.similarity});
      continue;
    }
    pool.rows.insert(pool.rows.end(), e.begin(), e.end());
    pool.members.push_back(result.kept.size());
    c.dedup_status = DedupStatus::kept;
    c.duplicate_of.clear();
    result.report.kept.push_back(c.id);
    result.kept.push_back(std::move(c));
  }
  return result;
}

DedupResult dedup_concepts(std::vector<Concept> concepts, Embedder& embedder, double threshold, DedupScope scope,
                           std::size_t max_concurrency, const std::string& embedding_model) {
  if (!(threshold > 0.0 && threshold <= 1.0)) throw std::invalid_argument("dedup threshold must be in (0, 1]");
  auto outcomes = bounded_map(concepts.size(), max_concurrency, [&](std::size_t i) {
    if (concepts[i].embedding) return *concepts[i].embedding;
    return embedder.embed({embedding_text(concepts[i]), embedding_model});
  });
  for (std::size_t i = 0; i < concepts.size(); ++i) {
    if (outcomes[i].error) std::rethrow_exception(outcomes[i].error);
    concepts[i].embedding = std::move(*outcomes[i].value);
  }
  return dedup_embedded(std::move(concepts), threshold, scope);
}

Json to_json(const DedupReport& report) {
  Json dropped = Json::array();
  for (const auto& d : report.dropped) {
    dropped.push_back({{"id", d.id}, {"duplicate_of", d.duplicate_of}, {"similarity", d.similarity}});
  }
  return Json{{"threshold", report.threshold}, {"kept", report.kept}, {"dropped", std::move(dropped)}};
}

}  // namespace corgi
