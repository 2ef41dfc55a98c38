// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <fstream>
#include <map>

#include "corgi/dataset_io.hpp"
#include "corgi/error.hpp"
#include "corgi/orchestrator.hpp"
#include "corgi/serialize.hpp"
#include "datasets.hpp"

using namespace corgi;
using corgi::testing::fixture_dir;
using corgi::testing::read_file;
using corgi::testing::temp_dir;

namespace {

const EnvLookup kNoEnv = [](const std::string&) -> std::optional<std::string> { return std::nullopt; };

/// Copies the fixture tree into a fresh directory and loads its config.
RunConfig fixture_config(std::string_view name) {
  auto dir = temp_dir(name);
  fs::copy(fixture_dir(), dir, fs::copy_options::recursive);
  return load_config(dir / "run_config.json", kNoEnv);
}

Json manifest_of(const RunConfig& cfg) { return Json::parse(read_file(run_manifest_path(cfg))); }

}  // namespace

TEST_SUITE("orchestrator") {
  TEST_CASE("full fixture run") {
    auto cfg = fixture_config("orch-full");
    Backends b = make_backends(cfg);
    auto results = run_pending(cfg, b);
    REQUIRE(results.size() == all_stages().size());
    CHECK_FALSE(resume(cfg));

    auto m = manifest_of(cfg);
    const auto& counts = m["counts"];
    CHECK(counts["courses"] == 4);
    CHECK(counts["refined_courses"] == 4);
    CHECK(counts["concepts"] == 13);
    CHECK(counts["concepts_kept"] == 12);
    CHECK(counts["concepts_dropped"] == 1);
    CHECK(counts["instances"] == 19 * 12);
    CHECK(counts["generation_failures"] == 0);
    CHECK(counts["filtered"].get<std::size_t>() + counts["filter_dropped"].get<std::size_t>() == 19 * 12);
    CHECK(counts["ordered"] == counts["filtered"]);
    CHECK(counts["train"] == counts["filtered"]);

    const std::map<std::string, std::string> file_for{{"courses", "courses.jsonl"},
                                                      {"refined_courses", "refined.jsonl"},
                                                      {"concepts", "concepts.jsonl"},
                                                      {"concepts_kept", "concepts_dedup.jsonl"},
                                                      {"instances", "instances.jsonl"},
                                                      {"filtered", "filtered.jsonl"},
                                                      {"filter_dropped", "filter_dropped.jsonl"},
                                                      {"ordered", "ordered.jsonl"},
                                                      {"train", "train.jsonl"}};
    for (const auto& [key, file] : file_for) {
      CAPTURE(key);
      CHECK(count_lines(cfg.workdir / file) == counts[key].get<std::size_t>());
    }
    CHECK(fs::exists(cfg.workdir / "strategy_comparison.txt"));
    CHECK(fs::exists(cfg.workdir / "batch_report.csv"));
    CHECK_FALSE(fs::exists(cfg.workdir / ".lock"));
    CHECK(m["created_at"] == "2026-01-15T09:00:00Z");
  }

  TEST_CASE("missing predecessor output") {
    auto cfg = fixture_config("orch-missing");
    Backends b = make_backends(cfg);
    try {
      run_stage(cfg, Stage::generate, b);
      FAIL("expected StageError");
    } catch (const StageError& e) {
      CHECK(e.kind() == "missing_artifact");
      CHECK(e.stage() == "generate");
      CHECK(std::string(e.what()).find("concepts_dedup.jsonl") != std::string::npos);
      CHECK(std::string(e.what()).find("dedup") != std::string::npos);
    }
  }

  TEST_CASE("resume tracks outputs, inputs and parameters") {
    auto cfg = fixture_config("orch-resume");
    CHECK(resume(cfg) == Stage::ingest);
    Backends b = make_backends(cfg);
    for (Stage s : {Stage::ingest, Stage::refine, Stage::concepts, Stage::dedup}) run_stage(cfg, s, b);
    CHECK(resume(cfg) == Stage::generate);

    auto changed = cfg;
    changed.dedup_threshold = 0.9;
    CHECK(resume(changed) == Stage::dedup);

    fs::remove(cfg.workdir / "concepts.jsonl");
    CHECK(resume(cfg) == Stage::concepts);

    {
      std::ofstream out(cfg.catalog, std::ios::app);
      out << "Higher Education - Law,Contracts,\"Offer, acceptance and consideration.\",Example\n";
    }
    CHECK(resume(cfg) == Stage::ingest);
  }

  TEST_CASE("locked workdir") {
    auto cfg = fixture_config("orch-lock");
    fs::create_directories(cfg.workdir);
    WorkdirLock held(cfg.workdir);
    Backends b = make_backends(cfg);
    try {
      run_stage(cfg, Stage::ingest, b);
      FAIL("expected StageError");
    } catch (const StageError& e) {
      CHECK(e.kind() == "locked");
    }
  }

  TEST_CASE("environment overrides and unknown keys") {
    auto base = Json::parse(read_file(fixture_dir() / "run_config.json"));
    std::map<std::string, std::string> env{{"TEACHER_API_KEY", "sk-test"},
                                           {"TEACHER_API_BASE", "http://teacher.local"},
                                           {"EMBED_API_BASE", "http://embed.local"},
                                           {"EMBED_API_KEY", "ek"}};
    EnvLookup lookup = [&](const std::string& k) -> std::optional<std::string> {
      auto it = env.find(k);
      if (it == env.end()) return std::nullopt;
      return it->second;
    };
    auto cfg = config_from_json(base, "/base", lookup);
    CHECK(cfg.teacher.api_key == "sk-test");
    CHECK(cfg.teacher.base_url == "http://teacher.local");
    CHECK(cfg.embedder.base_url == "http://embed.local");
    CHECK(cfg.embedder.api_key == "ek");
    CHECK(cfg.catalog == fs::path("/base/catalog.csv"));
    CHECK(cfg.ordering.strategy == Strategy::interleave);
    CHECK(cfg.ordering.seed == cfg.seed);

    auto bad = base;
    bad["teacher"]["temprature"] = 0.1;
    CHECK_THROWS_AS(config_from_json(bad, "/base", kNoEnv), ConfigError);
    bad = base;
    bad["ordering"]["strategy"] = "zigzag";
    CHECK_THROWS_AS(config_from_json(bad, "/base", kNoEnv), ConfigError);
    bad = base;
    bad["filter"]["required_yes"] = 4;
    CHECK_THROWS_AS(config_from_json(bad, "/base", kNoEnv), ConfigError);
    bad = base;
    bad.erase("run_id");
    CHECK_THROWS_AS(config_from_json(bad, "/base", kNoEnv), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/run_config.json", kNoEnv), ConfigError);
  }

  TEST_CASE("order stage records strategy and seed") {
    auto cfg = fixture_config("orch-order");
    cfg.ordering.strategy = Strategy::random;
    cfg.ordering.seed = 99;
    Backends b = make_backends(cfg);
    for (Stage s : {Stage::ingest, Stage::refine, Stage::concepts, Stage::dedup, Stage::generate, Stage::filter,
                    Stage::order}) {
      run_stage(cfg, s, b);
    }
    auto d = load_dataset(cfg.workdir / "ordered.jsonl");
    REQUIRE(d.manifest.strategy);
    CHECK(*d.manifest.strategy == "random");
    REQUIRE(d.manifest.seed);
    CHECK(*d.manifest.seed == 99);
    CHECK(resume(cfg) == Stage::analyze);
    auto other = cfg;
    other.ordering.seed = 100;
    CHECK(resume(other) == Stage::order);
  }
}
