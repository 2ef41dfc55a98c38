// SPDX-License-Identifier: Apache-2.0
// Command-line driver: one subcommand per pipeline stage, plus `run`,
// `resume` and `validate`.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "corgi/dataset_io.hpp"
#include "corgi/error.hpp"
#include "corgi/orchestrator.hpp"
#include "corgi/validate.hpp"

namespace {

struct Overrides {
  std::string config;
  std::optional<std::string> strategy;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> batch_size;
  std::optional<double> threshold;
  std::optional<int> required_yes;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "Run configuration (JSON)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--strategy", o.strategy, "interleave, block, cluster, spiral or random");
  cmd->add_option("--seed", o.seed, "Seed for generation and random ordering");
  cmd->add_option("--batch-size", o.batch_size, "Global batch size for analysis");
  cmd->add_option("--threshold", o.threshold, "Dedup cosine threshold in (0, 1]");
  cmd->add_option("--required-yes", o.required_yes, "Relevance votes needed to keep an instance (1..3)");
}

corgi::RunConfig build_config(const Overrides& o) {
  corgi::RunConfig cfg = corgi::load_config(o.config);
  if (o.strategy) {
    auto s = corgi::parse_strategy(*o.strategy);
    if (!s) throw corgi::ConfigError("unknown strategy `" + *o.strategy + "`");
    cfg.ordering.strategy = *s;
  }
  if (o.seed) {
    cfg.seed = *o.seed;
    cfg.ordering.seed = *o.seed;
  }
  if (o.batch_size) cfg.batch_size = *o.batch_size;
  if (o.threshold) cfg.dedup_threshold = *o.threshold;
  if (o.required_yes) cfg.filter.required_yes = *o.required_yes;
  corgi::check_config(cfg);
  return cfg;
}

int fail(std::string_view kind, std::string_view stage, std::string_view message, int code) {
  corgi::Json err{{"error", {{"kind", kind}, {"stage", stage}, {"message", message}}}};
  std::cerr << err.dump(-1, ' ', false, corgi::Json::error_handler_t::replace) << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Curriculum instruction-data pipeline"};
  app.require_subcommand(1);
  Overrides o;

  std::vector<std::pair<CLI::App*, corgi::Stage>> stage_cmds;
  for (corgi::Stage s : corgi::all_stages()) {
    auto* cmd = app.add_subcommand(std::string(corgi::to_string(s)), "Run the " + std::string(corgi::to_string(s)) + " stage");
    add_common(cmd, o);
    stage_cmds.emplace_back(cmd, s);
  }
  auto* run = app.add_subcommand("run", "Run every pending stage through export");
  add_common(run, o);
  auto* res = app.add_subcommand("resume", "Print the next pending stage");
  add_common(res, o);
  std::string input;
  auto* val = app.add_subcommand("validate", "Validate an instance dataset file");
  val->add_option("input", input, "Dataset file (line-delimited JSON)")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    return fail("usage", "", e.what(), 2);
  }

  std::string stage_name;
  try {
    if (val->parsed()) {
      auto report = corgi::validate(corgi::load_dataset(input));
      if (!report.ok()) return fail("invalid_dataset", "", report.summary(), 1);
      std::cout << corgi::Json{{"valid", true}}.dump() << "\n";
      return 0;
    }
    corgi::RunConfig cfg = build_config(o);
    if (res->parsed()) {
      auto next = corgi::resume(cfg);
      std::cout << corgi::Json{{"next_stage", next ? corgi::Json(corgi::to_string(*next)) : corgi::Json(nullptr)}}.dump()
                << "\n";
      return 0;
    }
    corgi::Backends backends = corgi::make_backends(cfg);
    if (run->parsed()) {
      for (const auto& r : corgi::run_pending(cfg, backends)) {
        std::cout << corgi::to_json(r).dump(-1, ' ', false, corgi::Json::error_handler_t::replace) << "\n";
      }
      return 0;
    }
    for (const auto& [cmd, stage] : stage_cmds) {
      if (!cmd->parsed()) continue;
      stage_name = corgi::to_string(stage);
      auto r = corgi::run_stage(cfg, stage, backends);
      std::cout << corgi::to_json(r).dump(-1, ' ', false, corgi::Json::error_handler_t::replace) << "\n";
    }
    return 0;
  } catch (const corgi::StageError& e) {
    return fail(e.kind(), e.stage(), e.what(), 1);
  } catch (const corgi::ConfigError& e) {
    return fail("config", stage_name, e.what(), 2);
  } catch (const corgi::DatasetError& e) {
    return fail("dataset", stage_name, e.what(), 1);
  } catch (const std::exception& e) {
    return fail("error", stage_name, e.what(), 1);
  }
}
