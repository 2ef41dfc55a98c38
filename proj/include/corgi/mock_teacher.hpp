// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <atomic>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "corgi/teacher.hpp"

namespace corgi {

/// One scripted reply. Matched by exact request digest when `digest` is set,
/// otherwise when every string in `contains` occurs in the prompt. An entry
/// with `error` set makes the call fail instead.
struct MockScriptEntry {
  std::string digest;
  std::vector<std::string> contains;
  std::string response;
  std::optional<std::string> error;
};

struct MockOptions {
  bool strict = false;              // unscripted prompts fail instead of being synthesised
  double reject_rate = 0.0;         // share of questions whose passages are all judged irrelevant
  double refusal_rate = 0.0;        // share of answers replaced by a canned refusal
  std::size_t concepts_per_course = 4;
  std::string model = "mock-teacher";
};

/// Deterministic offline teacher. Replies depend only on the request, so the
/// client is referentially transparent and safe to share across threads.
class MockTeacher : public TeacherClient {
 public:
  explicit MockTeacher(std::vector<MockScriptEntry> script = {}, MockOptions opts = {});

  /// Line-delimited JSON: {"digest"|"prompt"[,"system_message"]|"contains", "response"|"error"}.
  static std::vector<MockScriptEntry> load_script(const std::filesystem::path& path);

  std::string complete(const CompletionRequest& req) override;
  std::string model_name() const override { return opts_.model; }

  std::size_t request_count() const { return requests_.load(); }

  /// The synthetic reply used for unscripted prompts.
  std::string synthesize(const CompletionRequest& req) const;

 private:
  std::vector<MockScriptEntry> script_;
  MockOptions opts_;
  std::atomic<std::size_t> requests_{0};
};

/// Deterministic value in [0, 1) derived from a string.
double unit_hash(std::string_view s);

}  // namespace corgi
