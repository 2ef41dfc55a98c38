// SPDX-License-Identifier: Apache-2.0
#include "corgi/orchestrator.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <array>
#include <cerrno>
#include <cstdlib>
#include <cstring>
#include <ctime>
#include <set>

#include "corgi/analysis.hpp"
#include "corgi/catalog.hpp"
#include "corgi/dataset_io.hpp"
#include "corgi/digest.hpp"
#include "corgi/error.hpp"
#include "corgi/executor.hpp"
#include "corgi/instructions.hpp"
#include "corgi/mock_teacher.hpp"
#include "corgi/serialize.hpp"

namespace corgi {

namespace {

constexpr std::array<Stage, 9> kStages = {Stage::ingest,   Stage::refine, Stage::concepts,
                                          Stage::dedup,    Stage::generate, Stage::filter,
                                          Stage::order,    Stage::analyze, Stage::export_};

constexpr std::string_view kCourses = "courses.jsonl";
constexpr std::string_view kRefined = "refined.jsonl";
constexpr std::string_view kConcepts = "concepts.jsonl";
constexpr std::string_view kConceptsSkipped = "concepts_skipped.jsonl";
constexpr std::string_view kDeduped = "concepts_dedup.jsonl";
constexpr std::string_view kDedupReport = "dedup_report.json";
constexpr std::string_view kInstances = "instances.jsonl";
constexpr std::string_view kFiltered = "filtered.jsonl";
constexpr std::string_view kFilterDropped = "filter_dropped.jsonl";
constexpr std::string_view kFilterStats = "filter_stats.json";
constexpr std::string_view kOrdered = "ordered.jsonl";
constexpr std::string_view kBatchJson = "batch_report.json";
constexpr std::string_view kBatchCsv = "batch_report.csv";
constexpr std::string_view kComparison = "strategy_comparison.txt";
constexpr std::string_view kComparisonJson = "strategy_comparison.json";
constexpr std::string_view kTrain = "train.jsonl";

fs::path in_work(const RunConfig& cfg, std::string_view name) { return cfg.workdir / std::string(name); }

std::string now_utc() {
  std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Files hash directly; directories hash their sorted (relative name, digest) list.
std::string path_digest(const fs::path& p) {
  if (fs::is_directory(p)) {
    std::vector<std::pair<std::string, std::string>> entries;
    for (const auto& e : fs::recursive_directory_iterator(p)) {
      if (e.is_regular_file()) entries.emplace_back(fs::relative(e.path(), p).generic_string(), sha256_file(e.path()));
    }
    std::sort(entries.begin(), entries.end());
    std::string buf;
    for (const auto& [name, digest] : entries) buf += name + '\0' + digest + '\n';
    return sha256_hex(buf);
  }
  return sha256_file(p);
}

template <typename T, typename F>
std::vector<T> read_records(const fs::path& path, F&& parse) {
  std::vector<T> out;
  for_each_jsonl(path, [&](const Json& j, std::size_t line) { out.push_back(parse(j, line)); });
  return out;
}

template <typename T>
void write_records(const fs::path& path, const std::vector<T>& items) {
  std::vector<Json> lines;
  lines.reserve(items.size());
  for (const auto& it : items) lines.push_back(to_json(it));
  write_jsonl(path, lines);
}

Json read_run_manifest(const RunConfig& cfg) {
  auto path = run_manifest_path(cfg);
  if (!fs::exists(path)) return Json::object();
  Json m;
  try {
    m = read_json_file(path);
  } catch (const std::exception& e) {
    throw ConfigError("corrupted run manifest " + path.string() + ": " + e.what());
  }
  if (!m.is_object() || (m.contains("stages") && !m["stages"].is_object())) {
    throw ConfigError("corrupted run manifest " + path.string() + ": unexpected structure");
  }
  return m;
}

std::string resolved_created_at(const RunConfig& cfg, const Json& manifest) {
  if (!cfg.created_at.empty()) return cfg.created_at;
  if (manifest.contains("created_at") && manifest["created_at"].is_string()) {
    return manifest["created_at"].get<std::string>();
  }
  return {};
}

Json teacher_params(const RunConfig& cfg) {
  const auto& t = cfg.teacher;
  Json j{{"backend", t.backend},
         {"base_url", t.base_url},
         {"model", t.model},
         {"temperature", t.temperature},
         {"max_tokens", t.max_tokens}};
  if (t.backend == "mock") {
    j["mock"] = {{"script", t.mock_script.empty() ? std::string() : path_digest(t.mock_script)},
                 {"strict", t.mock_strict},
                 {"reject_rate", t.mock_reject_rate},
                 {"refusal_rate", t.mock_refusal_rate},
                 {"concepts_per_course", t.mock_concepts_per_course}};
  }
  return j;
}

Json ordering_params(const OrderingConfig& o) {
  Json j{{"strategy", to_string(o.strategy)},
         {"seed", o.seed},
         {"granularity", to_string(o.granularity)},
         {"stage_outermost", o.stage_outermost}};
  if (o.subject_order) j["subject_order"] = *o.subject_order;
  return j;
}

std::string params_digest(const RunConfig& cfg, Stage s, const Json& manifest) {
  Json p = Json::object();
  switch (s) {
    case Stage::ingest:
    case Stage::export_:
      break;
    case Stage::refine:
    case Stage::concepts:
      p = teacher_params(cfg);
      break;
    case Stage::dedup:
      p = {{"threshold", cfg.dedup_threshold},
           {"scope", cfg.dedup_scope == DedupScope::global ? "global" : "per_subject"},
           {"embedder", cfg.embedder.backend},
           {"model", cfg.embedder.model},
           {"dimension", cfg.embedder.dimension}};
      break;
    case Stage::generate:
      p = {{"teacher", teacher_params(cfg)},
           {"seed", cfg.seed},
           {"run_id", cfg.run_id},
           {"created_at", resolved_created_at(cfg, manifest)}};
      break;
    case Stage::filter:
      p = {{"teacher", teacher_params(cfg)},
           {"required_yes", cfg.filter.required_yes},
           {"max_failure_fraction", cfg.filter.max_failure_fraction}};
      break;
    case Stage::order:
      p = ordering_params(cfg.ordering);
      break;
    case Stage::analyze:
      p = {{"batch_size", cfg.batch_size}};
      break;
  }
  return sha256_hex(p.dump());
}

std::string producer_of(const RunConfig& cfg, const fs::path& input) {
  for (Stage s : kStages) {
    for (const auto& out : stage_outputs(cfg, s)) {
      if (out == input) return std::string(to_string(s));
    }
  }
  return {};
}

std::size_t lines_of(const fs::path& p) { return count_lines(p); }

// --- stage bodies ----------------------------------------------------------

StageResult do_ingest(const RunConfig& cfg) {
  auto courses = parse_catalog(cfg.catalog, catalog_format_from_path(cfg.catalog));
  write_records(in_work(cfg, kCourses), courses);
  return {Stage::ingest, {in_work(cfg, kCourses)}, {{"courses", courses.size()}}};
}

StageResult do_refine(const RunConfig& cfg, Backends& b) {
  auto courses = read_records<Course>(in_work(cfg, kCourses), course_from_json);
  GenerationOptions opts{cfg.teacher.model, cfg.teacher.temperature, cfg.teacher.max_tokens};
  auto refined = bounded_map(courses.size(), cfg.teacher.max_concurrency,
                             [&](std::size_t i) { return refine_description(courses[i], *b.teacher, opts); });
  std::vector<Course> out;
  for (auto& r : refined) {
    if (r.error) std::rethrow_exception(r.error);
    out.push_back(std::move(*r.value));
  }
  write_records(in_work(cfg, kRefined), out);
  return {Stage::refine, {in_work(cfg, kRefined)}, {{"refined_courses", out.size()}}};
}

StageResult do_concepts(const RunConfig& cfg, Backends& b) {
  auto courses = read_records<Course>(in_work(cfg, kRefined), course_from_json);
  GenerationOptions opts{cfg.teacher.model, cfg.teacher.temperature, cfg.teacher.max_tokens};
  auto results = bounded_map(courses.size(), cfg.teacher.max_concurrency,
                             [&](std::size_t i) { return extract_concepts(courses[i], *b.teacher, opts); });
  std::vector<Concept> concepts;
  std::vector<Json> skipped;
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (results[i].error) std::rethrow_exception(results[i].error);
    for (auto& c : results[i].value->concepts) concepts.push_back(std::move(c));
    for (const auto& s : results[i].value->skipped) {
      skipped.push_back({{"course_id", courses[i].id}, {"line", s.line}, {"text", s.text}});
    }
  }
  write_records(in_work(cfg, kConcepts), concepts);
  write_jsonl(in_work(cfg, kConceptsSkipped), skipped);
  return {Stage::concepts,
          {in_work(cfg, kConcepts), in_work(cfg, kConceptsSkipped)},
          {{"concepts", concepts.size()}, {"concepts_skipped", skipped.size()}}};
}

StageResult do_dedup(const RunConfig& cfg, Backends& b) {
  auto concepts = read_records<Concept>(in_work(cfg, kConcepts), concept_from_json);
  auto result = dedup_concepts(std::move(concepts), *b.embedder, cfg.dedup_threshold, cfg.dedup_scope,
                               cfg.teacher.max_concurrency, cfg.embedder.model);
  write_records(in_work(cfg, kDeduped), result.kept);
  write_json_file(in_work(cfg, kDedupReport), to_json(result.report));
  return {Stage::dedup,
          {in_work(cfg, kDeduped), in_work(cfg, kDedupReport)},
          {{"concepts_kept", result.kept.size()}, {"concepts_dropped", result.report.dropped.size()}}};
}

StageResult do_generate(const RunConfig& cfg, Backends& b, const std::string& created_at) {
  auto concepts = read_records<Concept>(in_work(cfg, kDeduped), concept_from_json);
  auto courses = read_records<Course>(in_work(cfg, kRefined), course_from_json);
  std::map<std::string, std::string> titles;
  for (const auto& c : courses) titles[c.id] = c.title;
  Provenance prov{b.teacher->model_name().empty() ? cfg.teacher.model : b.teacher->model_name(), created_at,
                  cfg.run_id};
  GenerationOptions opts{cfg.teacher.model, cfg.teacher.temperature, cfg.teacher.max_tokens};
  auto run = generate_all(concepts, titles, *b.teacher, cfg.seed, prov, opts, cfg.teacher.max_concurrency);

  Dataset d;
  d.items = std::move(run.instances);
  d.manifest.run_id = cfg.run_id;
  d.manifest.seed = cfg.seed;
  save_dataset(d, in_work(cfg, kInstances));
  std::vector<Json> failures;
  for (const auto& f : run.failures) failures.push_back(to_json(f));
  fs::path failures_path = in_work(cfg, std::string(kInstances) + ".failures");
  write_jsonl(failures_path, failures);
  return {Stage::generate,
          {in_work(cfg, kInstances), manifest_path(in_work(cfg, kInstances)), failures_path},
          {{"instances", d.items.size()}, {"generation_failures", failures.size()}}};
}

StageResult do_filter(const RunConfig& cfg, Backends& b) {
  if (!b.retriever) b.retriever = std::make_shared<Bm25Retriever>(load_corpus(cfg.corpus));
  Dataset d = load_dataset(in_work(cfg, kInstances));
  auto result = run_filters(d, *b.retriever, *b.teacher, cfg.filter);
  result.kept.manifest.extra["filter_stats"] = to_json(result.stats);
  save_dataset(result.kept, in_work(cfg, kFiltered));
  write_records(in_work(cfg, kFilterDropped), result.dropped);
  write_json_file(in_work(cfg, kFilterStats), to_json(result.stats));
  return {Stage::filter,
          {in_work(cfg, kFiltered), manifest_path(in_work(cfg, kFiltered)), in_work(cfg, kFilterDropped),
           in_work(cfg, kFilterStats)},
          {{"filtered", result.kept.items.size()},
           {"filter_dropped", result.dropped.size()},
           {"filter_errored", result.stats.errored}}};
}

StageResult do_order(const RunConfig& cfg) {
  Dataset d = load_dataset(in_work(cfg, kFiltered));
  auto od = order(d, cfg.ordering);
  Dataset out;
  out.items = od.items;
  out.manifest.run_id = cfg.run_id;
  out.manifest.strategy = std::string(to_string(cfg.ordering.strategy));
  out.manifest.seed = cfg.ordering.seed;
  out.manifest.extra = ordering_manifest(od);
  out.manifest.extra.erase("run_id");
  out.manifest.extra.erase("strategy");
  out.manifest.extra.erase("seed");
  out.manifest.extra.erase("count");
  save_dataset(out, in_work(cfg, kOrdered));
  return {Stage::order, {in_work(cfg, kOrdered), manifest_path(in_work(cfg, kOrdered))}, {{"ordered", od.items.size()}}};
}

StageResult do_analyze(const RunConfig& cfg) {
  Dataset ordered = load_dataset(in_work(cfg, kOrdered));
  auto report = analyze(ordered.items, cfg.batch_size);
  write_json_file(in_work(cfg, kBatchJson), to_json(report));
  write_text_atomic(in_work(cfg, kBatchCsv), to_csv(report));

  Dataset filtered = load_dataset(in_work(cfg, kFiltered));
  std::vector<std::pair<std::string, BatchReport>> reports;
  for (Strategy s : kAllStrategies) {
    OrderingConfig oc = cfg.ordering;
    oc.strategy = s;
    auto od = order(filtered, oc);
    reports.emplace_back(std::string(to_string(s)), analyze(od, cfg.batch_size));
  }
  auto table = compare(reports);
  write_text_atomic(in_work(cfg, kComparison), table.render_text());
  write_json_file(in_work(cfg, kComparisonJson), table.to_json());
  return {Stage::analyze,
          {in_work(cfg, kBatchJson), in_work(cfg, kBatchCsv), in_work(cfg, kComparison), in_work(cfg, kComparisonJson)},
          {{"batches", report.per_batch.size()}}};
}

StageResult do_export(const RunConfig& cfg) {
  Dataset d = load_dataset(in_work(cfg, kOrdered));
  OrderedDataset od;
  od.items = std::move(d.items);
  od.run_id = d.manifest.run_id;
  od.config = cfg.ordering;
  if (d.manifest.strategy) {
    if (auto s = parse_strategy(*d.manifest.strategy)) od.config.strategy = *s;
  }
  if (d.manifest.seed) od.config.seed = *d.manifest.seed;
  const Json& extra = d.manifest.extra;
  if (extra.contains("granularity")) {
    if (auto g = parse_granularity(extra["granularity"].get<std::string>())) od.config.granularity = *g;
  }
  if (extra.contains("input_digest")) od.input_digest = extra["input_digest"].get<std::string>();
  export_training_order(od, in_work(cfg, kTrain));
  return {Stage::export_, {in_work(cfg, kTrain), manifest_path(in_work(cfg, kTrain))}, {{"train", od.items.size()}}};
}

// Config helpers.

const Json& section(const Json& j, const char* key) {
  static const Json empty = Json::object();
  if (!j.contains(key)) return empty;
  if (!j[key].is_object()) throw ConfigError(std::string("config: `") + key + "` must be an object");
  return j[key];
}

template <typename T>
T get_or(const Json& j, const char* key, T fallback) {
  if (!j.contains(key) || j[key].is_null()) return fallback;
  try {
    return j[key].get<T>();
  } catch (const std::exception&) {
    throw ConfigError(std::string("config: `") + key + "` has the wrong type");
  }
}

void reject_unknown(const Json& j, std::initializer_list<std::string_view> known, const std::string& where) {
  for (const auto& [k, _] : j.items()) {
    bool ok = false;
    for (auto n : known) ok = ok || n == k;
    if (!ok) throw ConfigError("config: unknown key `" + k + "` in " + where);
  }
}

fs::path resolve(const fs::path& base, const std::string& p) {
  if (p.empty()) return {};
  fs::path path(p);
  return path.is_absolute() ? path : base / path;
}

}  // namespace

std::string_view to_string(Stage s) {
  switch (s) {
    case Stage::ingest: return "ingest";
    case Stage::refine: return "refine";
    case Stage::concepts: return "concepts";
    case Stage::dedup: return "dedup";
    case Stage::generate: return "generate";
    case Stage::filter: return "filter";
    case Stage::order: return "order";
    case Stage::analyze: return "analyze";
    case Stage::export_: return "export";
  }
  return "?";
}

std::optional<Stage> parse_stage(std::string_view s) {
  for (Stage st : kStages) {
    if (to_string(st) == s) return st;
  }
  return std::nullopt;
}

std::span<const Stage> all_stages() { return kStages; }

EnvLookup process_env() {
  return [](const std::string& name) -> std::optional<std::string> {
    const char* v = std::getenv(name.c_str());
    if (!v) return std::nullopt;
    return std::string(v);
  };
}

RunConfig config_from_json(const Json& j, const fs::path& base_dir, const EnvLookup& env) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  reject_unknown(j,
                 {"run_id", "created_at", "seed", "paths", "teacher", "embedder", "dedup_threshold", "dedup_scope",
                  "filter", "ordering", "batch_size"},
                 "config");
  RunConfig cfg;
  cfg.run_id = get_or<std::string>(j, "run_id", "");
  cfg.created_at = get_or<std::string>(j, "created_at", "");
  cfg.seed = get_or<std::uint64_t>(j, "seed", 0);

  const Json& paths = section(j, "paths");
  reject_unknown(paths, {"catalog", "workdir", "corpus"}, "paths");
  cfg.catalog = resolve(base_dir, get_or<std::string>(paths, "catalog", ""));
  cfg.workdir = resolve(base_dir, get_or<std::string>(paths, "workdir", ""));
  cfg.corpus = resolve(base_dir, get_or<std::string>(paths, "corpus", ""));

  const Json& t = section(j, "teacher");
  reject_unknown(t, {"backend", "base_url", "api_key", "model", "temperature", "max_tokens", "max_concurrency", "mock"},
                 "teacher");
  cfg.teacher.backend = get_or<std::string>(t, "backend", "mock");
  cfg.teacher.base_url = get_or<std::string>(t, "base_url", "");
  cfg.teacher.api_key = get_or<std::string>(t, "api_key", "");
  cfg.teacher.model = get_or<std::string>(t, "model", "");
  cfg.teacher.temperature = get_or<double>(t, "temperature", 0.7);
  cfg.teacher.max_tokens = get_or<int>(t, "max_tokens", 1024);
  cfg.teacher.max_concurrency = get_or<std::size_t>(t, "max_concurrency", 8);
  const Json& mock = section(t, "mock");
  reject_unknown(mock, {"script", "strict", "reject_rate", "refusal_rate", "concepts_per_course"}, "teacher.mock");
  cfg.teacher.mock_script = resolve(base_dir, get_or<std::string>(mock, "script", ""));
  cfg.teacher.mock_strict = get_or<bool>(mock, "strict", false);
  cfg.teacher.mock_reject_rate = get_or<double>(mock, "reject_rate", 0.0);
  cfg.teacher.mock_refusal_rate = get_or<double>(mock, "refusal_rate", 0.0);
  cfg.teacher.mock_concepts_per_course = get_or<std::size_t>(mock, "concepts_per_course", 4);

  const Json& e = section(j, "embedder");
  reject_unknown(e, {"backend", "base_url", "api_key", "model", "dimension"}, "embedder");
  cfg.embedder.backend = get_or<std::string>(e, "backend", "reference");
  cfg.embedder.base_url = get_or<std::string>(e, "base_url", "");
  cfg.embedder.api_key = get_or<std::string>(e, "api_key", "");
  cfg.embedder.model = get_or<std::string>(e, "model", "");
  cfg.embedder.dimension = get_or<std::size_t>(e, "dimension", 256);

  cfg.dedup_threshold = get_or<double>(j, "dedup_threshold", 0.67);
  std::string scope = get_or<std::string>(j, "dedup_scope", "global");
  if (scope == "global") {
    cfg.dedup_scope = DedupScope::global;
  } else if (scope == "per_subject") {
    cfg.dedup_scope = DedupScope::per_subject;
  } else {
    throw ConfigError("config: dedup_scope must be global or per_subject");
  }

  const Json& f = section(j, "filter");
  reject_unknown(f, {"required_yes", "max_failure_fraction", "max_concurrency"}, "filter");
  cfg.filter.required_yes = get_or<int>(f, "required_yes", 1);
  cfg.filter.max_failure_fraction = get_or<double>(f, "max_failure_fraction", 0.2);
  cfg.filter.max_concurrency = get_or<std::size_t>(f, "max_concurrency", cfg.teacher.max_concurrency);
  cfg.filter.judge.model = cfg.teacher.model;

  const Json& o = section(j, "ordering");
  reject_unknown(o, {"strategy", "seed", "subject_order", "granularity", "stage_outermost"}, "ordering");
  std::string strategy = get_or<std::string>(o, "strategy", "interleave");
  auto st = parse_strategy(strategy);
  if (!st) throw ConfigError("config: unknown ordering strategy `" + strategy + "`");
  cfg.ordering.strategy = *st;
  cfg.ordering.seed = get_or<std::uint64_t>(o, "seed", cfg.seed);
  if (o.contains("subject_order")) cfg.ordering.subject_order = get_or<std::vector<std::string>>(o, "subject_order", {});
  std::string gran = get_or<std::string>(o, "granularity", "per_index");
  auto g = parse_granularity(gran);
  if (!g) throw ConfigError("config: unknown granularity `" + gran + "`");
  cfg.ordering.granularity = *g;
  cfg.ordering.stage_outermost = get_or<bool>(o, "stage_outermost", false);

  cfg.batch_size = get_or<std::size_t>(j, "batch_size", 256);

  if (auto v = env("TEACHER_API_KEY")) cfg.teacher.api_key = *v;
  if (auto v = env("TEACHER_API_BASE")) cfg.teacher.base_url = *v;
  if (auto v = env("EMBED_API_BASE")) cfg.embedder.base_url = *v;
  if (auto v = env("EMBED_API_KEY")) cfg.embedder.api_key = *v;
  check_config(cfg);
  return cfg;
}

RunConfig load_config(const fs::path& path, const EnvLookup& env) {
  Json j;
  try {
    j = read_json_file(path);
  } catch (const std::exception& e) {
    throw ConfigError("cannot read config " + path.string() + ": " + e.what());
  }
  return config_from_json(j, path.parent_path(), env);
}

void check_config(const RunConfig& cfg) {
  if (cfg.run_id.empty()) throw ConfigError("config: run_id is required");
  if (cfg.workdir.empty()) throw ConfigError("config: paths.workdir is required");
  if (!(cfg.dedup_threshold > 0.0 && cfg.dedup_threshold <= 1.0)) {
    throw ConfigError("config: dedup_threshold must be in (0, 1]");
  }
  if (cfg.filter.required_yes < 1 || cfg.filter.required_yes > 3) {
    throw ConfigError("config: filter.required_yes must be in 1..3");
  }
  if (cfg.batch_size < 1) throw ConfigError("config: batch_size must be at least 1");
  if (cfg.teacher.max_concurrency < 1) throw ConfigError("config: teacher.max_concurrency must be at least 1");
  if (cfg.teacher.backend != "mock" && cfg.teacher.backend != "http") {
    throw ConfigError("config: teacher.backend must be mock or http");
  }
  if (cfg.teacher.backend == "http" && cfg.teacher.base_url.empty()) {
    throw ConfigError("config: teacher.base_url (or TEACHER_API_BASE) is required for the http backend");
  }
  if (cfg.embedder.backend != "reference" && cfg.embedder.backend != "http") {
    throw ConfigError("config: embedder.backend must be reference or http");
  }
  if (cfg.embedder.backend == "http" && cfg.embedder.base_url.empty()) {
    throw ConfigError("config: embedder.base_url (or EMBED_API_BASE) is required for the http backend");
  }
}

Backends make_backends(const RunConfig& cfg) {
  Backends b;
  if (cfg.teacher.backend == "mock") {
    MockOptions mo;
    mo.strict = cfg.teacher.mock_strict;
    mo.reject_rate = cfg.teacher.mock_reject_rate;
    mo.refusal_rate = cfg.teacher.mock_refusal_rate;
    mo.concepts_per_course = cfg.teacher.mock_concepts_per_course;
    if (!cfg.teacher.model.empty()) mo.model = cfg.teacher.model;
    auto script = cfg.teacher.mock_script.empty() ? std::vector<MockScriptEntry>{}
                                                  : MockTeacher::load_script(cfg.teacher.mock_script);
    b.teacher = std::make_shared<MockTeacher>(std::move(script), mo);
  } else {
    b.teacher = std::make_shared<HttpTeacher>(
        HttpEndpoint{cfg.teacher.base_url, cfg.teacher.api_key, cfg.teacher.model},
        std::make_shared<HttplibTransport>());
  }
  if (cfg.embedder.backend == "reference") {
    b.embedder = std::make_shared<ReferenceEmbedder>(cfg.embedder.dimension);
  } else {
    b.embedder = std::make_shared<HttpEmbedder>(
        HttpEndpoint{cfg.embedder.base_url, cfg.embedder.api_key, cfg.embedder.model},
        std::make_shared<HttplibTransport>());
  }
  return b;
}

Json to_json(const StageResult& r) {
  Json outputs = Json::array();
  for (const auto& p : r.outputs) outputs.push_back(p.string());
  Json counts = Json::object();
  for (const auto& [k, v] : r.counts) counts[k] = v;
  return Json{{"stage", to_string(r.stage)}, {"outputs", std::move(outputs)}, {"counts", std::move(counts)}};
}

WorkdirLock::WorkdirLock(const fs::path& workdir) : path_(workdir / ".lock") {
  int fd = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
  if (fd < 0) {
    if (errno == EEXIST) {
      throw StageError("", "locked", "workdir is locked by another run (remove " + path_.string() + " if stale)");
    }
    throw StageError("", "io", "cannot create " + path_.string() + ": " + std::strerror(errno));
  }
  std::string pid = std::to_string(::getpid()) + "\n";
  [[maybe_unused]] auto n = ::write(fd, pid.data(), pid.size());
  ::close(fd);
}

WorkdirLock::~WorkdirLock() {
  std::error_code ec;
  fs::remove(path_, ec);
}

fs::path run_manifest_path(const RunConfig& cfg) { return cfg.workdir / "run_manifest.json"; }

std::vector<fs::path> stage_inputs(const RunConfig& cfg, Stage s) {
  switch (s) {
    case Stage::ingest: return {cfg.catalog};
    case Stage::refine: return {in_work(cfg, kCourses)};
    case Stage::concepts: return {in_work(cfg, kRefined)};
    case Stage::dedup: return {in_work(cfg, kConcepts)};
    case Stage::generate: return {in_work(cfg, kDeduped), in_work(cfg, kRefined)};
    case Stage::filter: return {in_work(cfg, kInstances), cfg.corpus};
    case Stage::order: return {in_work(cfg, kFiltered)};
    case Stage::analyze: return {in_work(cfg, kOrdered), in_work(cfg, kFiltered)};
    case Stage::export_: return {in_work(cfg, kOrdered)};
  }
  return {};
}

std::vector<fs::path> stage_outputs(const RunConfig& cfg, Stage s) {
  switch (s) {
    case Stage::ingest: return {in_work(cfg, kCourses)};
    case Stage::refine: return {in_work(cfg, kRefined)};
    case Stage::concepts: return {in_work(cfg, kConcepts), in_work(cfg, kConceptsSkipped)};
    case Stage::dedup: return {in_work(cfg, kDeduped), in_work(cfg, kDedupReport)};
    case Stage::generate:
      return {in_work(cfg, kInstances), manifest_path(in_work(cfg, kInstances)),
              in_work(cfg, std::string(kInstances) + ".failures")};
    case Stage::filter:
      return {in_work(cfg, kFiltered), manifest_path(in_work(cfg, kFiltered)), in_work(cfg, kFilterDropped),
              in_work(cfg, kFilterStats)};
    case Stage::order: return {in_work(cfg, kOrdered), manifest_path(in_work(cfg, kOrdered))};
    case Stage::analyze:
      return {in_work(cfg, kBatchJson), in_work(cfg, kBatchCsv), in_work(cfg, kComparison),
              in_work(cfg, kComparisonJson)};
    case Stage::export_: return {in_work(cfg, kTrain), manifest_path(in_work(cfg, kTrain))};
  }
  return {};
}

StageResult run_stage(const RunConfig& cfg, Stage s, Backends& backends) {
  check_config(cfg);
  std::string name(to_string(s));
  for (const auto& in : stage_inputs(cfg, s)) {
    if (in.empty() || !fs::exists(in)) {
      std::string producer = producer_of(cfg, in);
      throw StageError(name, "missing_artifact",
                       "missing input " + (in.empty() ? std::string("(unset path)") : in.string()) +
                           (producer.empty() ? std::string() : "; run `" + producer + "` first"));
    }
  }
  fs::create_directories(cfg.workdir);
  WorkdirLock lock(cfg.workdir);

  Json manifest = read_run_manifest(cfg);
  std::string created_at = resolved_created_at(cfg, manifest);
  if (created_at.empty()) created_at = now_utc();

  if (!backends.teacher || !backends.embedder) {
    Backends made = make_backends(cfg);
    if (!backends.teacher) backends.teacher = made.teacher;
    if (!backends.embedder) backends.embedder = made.embedder;
  }

  Json inputs = Json::object();
  for (const auto& in : stage_inputs(cfg, s)) inputs[in.string()] = path_digest(in);

  StageResult result;
  try {
    switch (s) {
      case Stage::ingest: result = do_ingest(cfg); break;
      case Stage::refine: result = do_refine(cfg, backends); break;
      case Stage::concepts: result = do_concepts(cfg, backends); break;
      case Stage::dedup: result = do_dedup(cfg, backends); break;
      case Stage::generate: result = do_generate(cfg, backends, created_at); break;
      case Stage::filter: result = do_filter(cfg, backends); break;
      case Stage::order: result = do_order(cfg); break;
      case Stage::analyze: result = do_analyze(cfg); break;
      case Stage::export_: result = do_export(cfg); break;
    }
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(name, "stage_failed", e.what());
  }

  manifest["run_id"] = cfg.run_id;
  manifest["created_at"] = created_at;
  if (!manifest.contains("stages")) manifest["stages"] = Json::object();
  if (!manifest.contains("counts")) manifest["counts"] = Json::object();
  Json outputs = Json::object();
  for (const auto& out : result.outputs) {
    outputs[fs::relative(out, cfg.workdir).generic_string()] = path_digest(out);
  }
  Json lines = Json::object();
  for (const auto& out : result.outputs) {
    if (out.extension() == ".jsonl") lines[fs::relative(out, cfg.workdir).generic_string()] = lines_of(out);
  }
  Json counts = Json::object();
  for (const auto& [k, v] : result.counts) {
    counts[k] = v;
    manifest["counts"][k] = v;
  }
  manifest["stages"][name] = {{"inputs", std::move(inputs)},
                              {"params_digest", params_digest(cfg, s, manifest)},
                              {"outputs", std::move(outputs)},
                              {"line_counts", std::move(lines)},
                              {"counts", std::move(counts)}};
  write_json_file(run_manifest_path(cfg), manifest);
  return result;
}

std::optional<Stage> resume(const RunConfig& cfg) {
  if (!fs::exists(run_manifest_path(cfg))) return Stage::ingest;
  Json manifest = read_run_manifest(cfg);
  const Json& stages = manifest.contains("stages") ? manifest["stages"] : Json::object();
  for (Stage s : kStages) {
    std::string name(to_string(s));
    if (!stages.contains(name)) return s;
    const Json& entry = stages[name];
    if (!entry.is_object() || !entry.contains("inputs") || !entry.contains("outputs") ||
        !entry.contains("params_digest")) {
      throw ConfigError("corrupted run manifest: stage `" + name + "` entry is incomplete");
    }
    for (const auto& out : stage_outputs(cfg, s)) {
      std::string key = fs::relative(out, cfg.workdir).generic_string();
      if (!fs::exists(out) || !entry["outputs"].contains(key) || entry["outputs"][key] != path_digest(out)) return s;
    }
    for (const auto& in : stage_inputs(cfg, s)) {
      if (!fs::exists(in) || !entry["inputs"].contains(in.string()) ||
          entry["inputs"][in.string()] != path_digest(in)) {
        return s;
      }
    }
    if (entry["params_digest"] != params_digest(cfg, s, manifest)) return s;
  }
  return std::nullopt;
}

std::vector<StageResult> run_pending(const RunConfig& cfg, Backends& backends) {
  std::vector<StageResult> results;
  std::optional<Stage> last;
  while (auto next = resume(cfg)) {
    if (last && *next == *last) {
      throw StageError(std::string(to_string(*next)), "not_converging", "stage is still pending after running it");
    }
    results.push_back(run_stage(cfg, *next, backends));
    last = next;
  }
  return results;
}

}  // namespace corgi
