// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "corgi/concepts.hpp"
#include "corgi/filter.hpp"
#include "corgi/scheduler.hpp"
#include "corgi/teacher.hpp"

namespace corgi {

namespace fs = std::filesystem;

enum class Stage { ingest, refine, concepts, dedup, generate, filter, order, analyze, export_ };

std::string_view to_string(Stage s);
std::optional<Stage> parse_stage(std::string_view s);
std::span<const Stage> all_stages();  // DAG order

struct TeacherConfig {
  std::string backend = "mock";  // mock | http
  std::string base_url;
  std::string api_key;
  std::string model;
  double temperature = 0.7;
  int max_tokens = 1024;
  std::size_t max_concurrency = 8;
  fs::path mock_script;
  bool mock_strict = false;
  double mock_reject_rate = 0.0;
  double mock_refusal_rate = 0.0;
  std::size_t mock_concepts_per_course = 4;
};

struct EmbedderConfig {
  std::string backend = "reference";  // reference | http
  std::string base_url;
  std::string api_key;
  std::string model;
  std::size_t dimension = 256;
};

struct RunConfig {
  std::string run_id;
  std::string created_at;  // optional; stamped at first stage when empty
  std::uint64_t seed = 0;
  fs::path catalog;
  fs::path workdir;
  fs::path corpus;
  TeacherConfig teacher;
  EmbedderConfig embedder;
  double dedup_threshold = 0.67;
  DedupScope dedup_scope = DedupScope::global;
  FilterConfig filter;
  OrderingConfig ordering;
  std::size_t batch_size = 256;
};

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;
EnvLookup process_env();

/// Reads the JSON config; relative paths resolve against the config file's
/// directory. TEACHER_API_KEY, TEACHER_API_BASE, EMBED_API_BASE and
/// EMBED_API_KEY override the matching fields. Throws ConfigError.
RunConfig load_config(const fs::path& path, const EnvLookup& env = process_env());
RunConfig config_from_json(const Json& j, const fs::path& base_dir, const EnvLookup& env = process_env());
void check_config(const RunConfig& cfg);

/// Backends selected by the config. Tests may inject their own.
struct Backends {
  std::shared_ptr<TeacherClient> teacher;
  std::shared_ptr<Embedder> embedder;
  std::shared_ptr<Retriever> retriever;  // built lazily from cfg.corpus when null
};
Backends make_backends(const RunConfig& cfg);

struct StageResult {
  Stage stage;
  std::vector<fs::path> outputs;
  std::map<std::string, std::size_t> counts;
};

Json to_json(const StageResult& r);

/// Holds `<workdir>/.lock` for its lifetime; throws StageError if another
/// process holds it.
class WorkdirLock {
 public:
  explicit WorkdirLock(const fs::path& workdir);
  ~WorkdirLock();
  WorkdirLock(const WorkdirLock&) = delete;
  WorkdirLock& operator=(const WorkdirLock&) = delete;

 private:
  fs::path path_;
};

fs::path run_manifest_path(const RunConfig& cfg);
std::vector<fs::path> stage_inputs(const RunConfig& cfg, Stage s);
std::vector<fs::path> stage_outputs(const RunConfig& cfg, Stage s);

/// Runs one stage. Throws StageError(kind "missing_artifact") when a
/// predecessor output is absent.
StageResult run_stage(const RunConfig& cfg, Stage s, Backends& backends);

/// First stage whose outputs are missing or whose inputs or parameters
/// changed since it ran; nullopt when everything is current.
std::optional<Stage> resume(const RunConfig& cfg);

/// Runs every pending stage from resume() onwards.
std::vector<StageResult> run_pending(const RunConfig& cfg, Backends& backends);

}  // namespace corgi
