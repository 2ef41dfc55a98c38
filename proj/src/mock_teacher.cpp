// SPDX-License-Identifier: Apache-2.0
#include "corgi/mock_teacher.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <unordered_set>

#include "corgi/cognitive.hpp"
#include "corgi/dataset_io.hpp"
#include "corgi/digest.hpp"
#include "corgi/error.hpp"
#include "corgi/text.hpp"

namespace corgi {
namespace {

constexpr std::string_view kRelevanceMarker = "\nIs the PASSAGE relevant to the QUESTION?";
constexpr std::string_view kQuestionMarker = "\n### Question ###\nQuestion: ...";
constexpr std::string_view kConceptMarker = "\n### List ###\n";
constexpr std::string_view kRefineMarker = "\nExtended Course Description: ...";

// {c} = concept name, {s} = subject.
constexpr std::array<std::string_view, 19> kStems{
    "Is the following statement correct or incorrect: \"{c} is a foundational idea in {s}.\" Justify your decision.",
    "Match each term related to {c} in List A with its description in List B, and explain every pairing.",
    "What is {c}, and what role does it play in {s}?",
    "Fill in the blank: within {s}, {c} is primarily concerned with ________.",
    "Restate the core principle of {c} as a short written rule, then express the same idea as a formula or diagram description.",
    "Give an original example that illustrates {c} and explain why it qualifies.",
    "A situation is described in which {c} is at work. Name the underlying principle of {s} it demonstrates.",
    "Sort a given set of phenomena into those that are instances of {c} and those that are not, explaining each placement.",
    "Summarize the main theme of {c} in a few sentences and propose a fitting title for a passage about it.",
    "Describe what comes next in a progression of ideas that builds toward {c}, and state the pattern you used.",
    "Complete the analogy: a first definition is to {c} as a simple case is to ________. Explain your answer.",
    "Of three described ideas, two rely on {c}. Identify the one that does not belong and explain why.",
    "Map each component of {c} onto a corresponding component of an everyday system and explain each correspondence.",
    "Why does {c} matter for understanding {s}? Give the reasoning behind your answer.",
    "A model built on {c} produces an unexpected result. Diagnose what could have gone wrong.",
    "How could you redesign an approach based on {c} so that it becomes more effective?",
    "Predict how a change in one part of {c} would affect another part, and explain the mechanism.",
    "Apply the standard procedure associated with {c} to a familiar worked problem and show every step.",
    "Design a step-by-step procedure that uses {c} to solve an unfamiliar problem, then carry it out.",
};

constexpr std::array<std::string_view, 8> kAspects{
    "core definitions", "historical development", "measurable quantities", "standard models",
    "typical applications", "limiting cases", "key experiments", "common misconceptions",
};

std::string between(std::string_view s, std::string_view start, std::string_view end) {
  auto a = s.find(start);
  if (a == std::string_view::npos) return {};
  a += start.size();
  auto b = end.empty() ? std::string_view::npos : s.find(end, a);
  return std::string(trim(s.substr(a, b == std::string_view::npos ? std::string_view::npos : b - a)));
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

std::string replace_all(std::string s, std::string_view from, std::string_view to) {
  for (auto pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size())) {
    s.replace(pos, from.size(), to);
  }
  return s;
}

std::string subject_tail(const std::string& subject) {
  auto dash = subject.find(" - ");
  return dash == std::string::npos ? subject : subject.substr(dash + 3);
}

bool phrase_ok(std::string_view phrase) {
  auto words = split_whitespace(phrase);
  if (words.empty() || words.size() > 5) return false;
  static const std::unordered_set<std::string> kSkip{
      "this", "the", "a", "an", "students", "it", "they", "we", "topics", "each", "throughout", "by", "course",
      "include", "includes", "learners", "will", "also", "is", "are", "be", "used", "not", "no", "engineering"};
  if (kSkip.count(to_lower(words.front()))) return false;
  for (char c : phrase) {
    if (!(std::isalpha(static_cast<unsigned char>(c)) || c == ' ' || c == '-' || c == '\'')) return false;
  }
  return true;
}

std::string capitalize(std::string s) {
  if (!s.empty()) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  return s;
}

}  // namespace

double unit_hash(std::string_view s) {
  std::string hex = sha256_hex(s).substr(0, 16);
  std::uint64_t v = std::stoull(hex, nullptr, 16);
  return static_cast<double>(v >> 11) * 0x1.0p-53;
}

MockTeacher::MockTeacher(std::vector<MockScriptEntry> script, MockOptions opts)
    : script_(std::move(script)), opts_(std::move(opts)) {}

std::vector<MockScriptEntry> MockTeacher::load_script(const std::filesystem::path& path) {
  std::vector<MockScriptEntry> out;
  for_each_jsonl(path, [&](const Json& j, std::size_t line) {
    MockScriptEntry e;
    auto where = path.string() + ": line " + std::to_string(line);
    if (j.contains("digest")) {
      e.digest = j.at("digest").get<std::string>();
    } else if (j.contains("prompt")) {
      e.digest = request_digest(j.value("system_message", std::string()), j.at("prompt").get<std::string>());
    } else if (j.contains("contains")) {
      const Json& c = j.at("contains");
      if (c.is_string()) {
        e.contains.push_back(c.get<std::string>());
      } else {
        for (const auto& s : c) e.contains.push_back(s.get<std::string>());
      }
    } else {
      throw ConfigError(where + ": script entry needs `digest`, `prompt` or `contains`");
    }
    if (j.contains("error")) {
      e.error = j.at("error").get<std::string>();
    } else if (j.contains("response")) {
      e.response = j.at("response").get<std::string>();
    } else {
      throw ConfigError(where + ": script entry needs `response` or `error`");
    }
    out.push_back(std::move(e));
  });
  return out;
}

std::string MockTeacher::complete(const CompletionRequest& req) {
  req.check();
  ++requests_;
  std::string digest = request_digest(req.system_message, req.prompt);
  const MockScriptEntry* hit = nullptr;
  for (const auto& e : script_) {
    if (!e.digest.empty() && e.digest == digest) {
      hit = &e;
      break;
    }
  }
  if (!hit) {
    for (const auto& e : script_) {
      if (e.digest.empty() && !e.contains.empty() &&
          std::all_of(e.contains.begin(), e.contains.end(),
                      [&](const std::string& s) { return req.prompt.find(s) != std::string::npos; })) {
        hit = &e;
        break;
      }
    }
  }
  if (hit) {
    if (hit->error) throw TeacherError(TeacherError::Kind::transport, "scripted failure: " + *hit->error);
    return hit->response;
  }
  if (opts_.strict) {
    throw TeacherError(TeacherError::Kind::unscripted, "no scripted response for prompt digest " + digest);
  }
  return synthesize(req);
}

std::string MockTeacher::synthesize(const CompletionRequest& req) const {
  const std::string& p = req.prompt;

  if (p.find(kRelevanceMarker) != std::string::npos) {
    std::string question = between(p, "QUESTION: ", "\nPASSAGE: ");
    return unit_hash("relevance\n" + question) < opts_.reject_rate ? "B) No" : "A) Yes";
  }

  if (ends_with(p, kQuestionMarker)) {
    std::string subject = between(p, "You are a ", " professor teaching \"");
    std::string first_line = p.substr(0, p.find('\n'));
    std::string triple = between(first_line, "professor teaching \"" + subject + ", ", "");
    std::string head = triple.substr(0, triple.find(": "));
    auto comma = head.rfind(", ");
    std::string concept_name = comma == std::string::npos ? head : head.substr(comma + 2);
    std::string format = between(p, "Question Format:\n- ", "\nTest Constraints:");
    std::size_t index = 0;
    for (const auto& t : cognitive_templates()) {
      if (t.format_text == format) index = static_cast<std::size_t>(t.index - 1);
    }
    std::string q = replace_all(std::string(kStems[index]), "{c}", concept_name);
    q = replace_all(std::move(q), "{s}", subject_tail(subject));
    return "Question: " + q;
  }

  if (p.find(kConceptMarker) != std::string::npos) {
    std::string subject = between(p, "teaching the following course with a ", " professor:");
    std::string title = between(p, "Course Title: ", "\n");
    std::string description = between(p, "Course Description: ", "\n### Instruction ###");
    std::vector<std::string> names;
    std::unordered_set<std::string> seen;
    std::string piece;
    auto flush = [&] {
      std::string phrase(trim(piece));
      piece.clear();
      for (std::string_view lead : {"the ", "a ", "an ", "and ", "including ", "such as "}) {
        if (istarts_with(phrase, lead)) phrase = phrase.substr(lead.size());
      }
      if (names.size() >= opts_.concepts_per_course || !phrase_ok(phrase)) return;
      if (seen.insert(to_lower(phrase)).second) names.push_back(capitalize(phrase));
    };
    for (std::size_t i = 0; i < description.size(); ++i) {
      char c = description[i];
      if (c == ',' || c == '.' || c == ';' || c == ':' || c == '(' || c == ')' || c == '\n') {
        flush();
      } else if (description.compare(i, 5, " and ") == 0) {
        flush();
        i += 4;
      } else {
        piece.push_back(c);
      }
    }
    flush();
    if (names.empty()) return "No concepts could be identified in this description.";
    std::string out;
    for (std::size_t i = 0; i < names.size(); ++i) {
      std::string lower = to_lower(names[i]);
      auto a = kAspects[static_cast<std::size_t>(unit_hash(names[i] + "a") * kAspects.size())];
      auto b = kAspects[static_cast<std::size_t>(unit_hash(names[i] + "b") * kAspects.size())];
      if (i) out += "\n\n";
      out += std::to_string(i + 1) + ". " + names[i] + ": " + capitalize(lower) + " in " + title + ", covering " +
             std::string(a) + " of " + lower + " and the " + std::string(b) + " of " + lower + ".";
    }
    return out;
  }

  if (ends_with(p, kRefineMarker)) {
    std::string title = between(p, "Course Title: ", "\n");
    std::string description = between(p, "Course Description: ", "\nExtend the course description");
    return "This course, \"" + title + "\", develops its subject in technical depth. " + description +
           " Each topic is examined through precise definitions, worked examples, and applications.";
  }

  // Anything else is an answer request.
  std::string key = req.system_message + "\n" + p;
  if (unit_hash("refusal\n" + key) < opts_.refusal_rate) {
    return "I'm sorry, but as an AI language model I cannot answer that question.";
  }
  std::string_view question = trim(p);
  return "Let us work through this carefully. The question asks: " + std::string(question) +
         " First, recall the relevant definitions and state the governing principle. Next, apply it step by step "
         "to the situation described, checking each intermediate result. Finally, summarise the conclusion and "
         "explain why it follows from the principle. (reference " +
         request_digest(req.system_message, p).substr(0, 8) + ")";
}

}  // namespace corgi
