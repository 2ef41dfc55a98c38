// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "corgi/cognitive.hpp"
#include "corgi/dataset_io.hpp"
#include "corgi/digest.hpp"
#include "corgi/error.hpp"
#include "corgi/scheduler.hpp"
#include "datasets.hpp"

using namespace corgi;
using corgi::testing::fixture9;
using corgi::testing::labels;
using corgi::testing::make_instance;
using corgi::testing::read_file;
using corgi::testing::temp_dir;

namespace {

using Seq = std::vector<std::string>;

Seq ordered(const Dataset& d, Strategy s, Granularity g = Granularity::per_index) {
  OrderingConfig cfg;
  cfg.strategy = s;
  cfg.granularity = g;
  return labels(order(d, cfg).items);
}

int level_of(const InstructionInstance& it, Granularity g) {
  if (g == Granularity::per_index) return it.cognitive_index;
  return it.cognitive_index <= 4 ? 0 : (it.cognitive_index <= 17 ? 1 : 2);
}

/// Values of `key` form contiguous runs.
template <typename F>
bool contiguous(const std::vector<InstructionInstance>& items, F key) {
  std::set<std::string> closed;
  for (std::size_t i = 0; i < items.size(); ++i) {
    auto k = key(items[i]);
    if (closed.count(k)) return false;
    if (i + 1 < items.size() && key(items[i + 1]) != k) closed.insert(k);
  }
  return true;
}

template <typename F>
bool nondecreasing_within(const std::vector<InstructionInstance>& items, F key) {
  std::map<std::string, int> last;
  for (const auto& it : items) {
    auto k = key(it);
    auto found = last.find(k);
    if (found != last.end() && it.cognitive_index < found->second) return false;
    last[k] = it.cognitive_index;
  }
  return true;
}

std::multiset<std::string> ids(const std::vector<InstructionInstance>& items) {
  std::multiset<std::string> out;
  for (const auto& it : items) out.insert(it.id);
  return out;
}

}  // namespace

TEST_SUITE("scheduler") {
  TEST_CASE("fixture sequences") {
    auto d = fixture9();
    CHECK(ordered(d, Strategy::block) ==
          Seq{"(A,a1,1)", "(A,a2,1)", "(A,a1,5)", "(A,a2,5)", "(A,a1,18)", "(A,a2,18)", "(B,b1,1)", "(B,b1,5)",
              "(B,b1,18)"});
    CHECK(ordered(d, Strategy::cluster) ==
          Seq{"(A,a1,1)", "(A,a1,5)", "(A,a1,18)", "(A,a2,1)", "(A,a2,5)", "(A,a2,18)", "(B,b1,1)", "(B,b1,5)",
              "(B,b1,18)"});
    CHECK(ordered(d, Strategy::interleave) ==
          Seq{"(A,a1,1)", "(B,b1,1)", "(A,a2,1)", "(A,a1,5)", "(B,b1,5)", "(A,a2,5)", "(A,a1,18)", "(B,b1,18)",
              "(A,a2,18)"});
    CHECK(ordered(d, Strategy::spiral) ==
          Seq{"(A,a1,1)", "(B,b1,1)", "(A,a2,1)", "(B,b1,5)", "(A,a1,5)", "(B,b1,18)", "(A,a2,5)", "(A,a1,18)",
              "(A,a2,18)"});
  }

  TEST_CASE("per-load-tier interleave on the fixture") {
    // Tiers: {1} easy, {5} medium, {18} hard; same as per-index here.
    CHECK(ordered(fixture9(), Strategy::interleave, Granularity::per_load_tier) ==
          ordered(fixture9(), Strategy::interleave, Granularity::per_index));
    // Two easy indices in one tier are visited as one level.
    Dataset d;
    for (auto [s, c, i] : std::vector<std::tuple<const char*, const char*, int>>{
             {"A", "a", 2}, {"A", "a", 1}, {"B", "b", 3}, {"B", "b", 1}, {"A", "a", 6}}) {
      d.items.push_back(make_instance(s, c, i));
    }
    CHECK(ordered(d, Strategy::interleave, Granularity::per_load_tier) ==
          Seq{"(A,a,1)", "(B,b,1)", "(A,a,2)", "(B,b,3)", "(A,a,6)"});
  }

  TEST_CASE("random is a seeded permutation") {
    auto d = fixture9();
    OrderingConfig cfg;
    cfg.strategy = Strategy::random;
    cfg.seed = 2024;
    auto a = order(d, cfg).items;
    auto b = order(d, cfg).items;
    CHECK(a == b);
    CHECK(ids(a) == ids(d.items));
    int differing = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      cfg.seed = seed;
      differing += labels(order(d, cfg).items) != labels(a);
    }
    CHECK(differing >= 15);
  }

  TEST_CASE("random permutation matches a hand-rolled Fisher-Yates") {
    auto d = fixture9();
    OrderingConfig cfg;
    cfg.strategy = Strategy::random;
    cfg.seed = 7;
    std::vector<std::size_t> perm(d.items.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    std::uint64_t state = 7;
    auto next = [&] {
      std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
      z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
      z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
      return z ^ (z >> 31);
    };
    for (std::size_t i = perm.size() - 1; i > 0; --i) std::swap(perm[i], perm[next() % (i + 1)]);
    CHECK(order_indices(d.items, cfg) == perm);
  }

  TEST_CASE("single subject and concept: block, cluster and interleave coincide") {
    Dataset d;
    for (int i : {7, 1, 19, 3}) d.items.push_back(make_instance("Solo", "only", i));
    auto block = ordered(d, Strategy::block);
    CHECK(block == Seq{"(Solo,only,1)", "(Solo,only,3)", "(Solo,only,7)", "(Solo,only,19)"});
    CHECK(ordered(d, Strategy::cluster) == block);
    CHECK(ordered(d, Strategy::interleave) == block);
    CHECK(ordered(d, Strategy::spiral) == block);
  }

  TEST_CASE("canonical orders") {
    Dataset d;
    d.items = {make_instance("B", "x", 1), make_instance("A", "y", 1), make_instance("B", "z", 2),
               make_instance("C", "w", 1), make_instance("B", "x", 3)};
    OrderingConfig cfg;
    auto c = canonical_orders(d.items, cfg);
    CHECK(c.subjects == std::vector<std::string>{"Higher Education - B", "Higher Education - A", "Higher Education - C"});
    CHECK(c.concepts.at("Higher Education - B") ==
          std::vector<std::string>{d.items[0].concept_id, d.items[2].concept_id});

    cfg.subject_order = std::vector<std::string>{"Higher Education - A", "Higher Education - B"};
    CHECK_THROWS_AS(canonical_orders(d.items, cfg), PipelineError);
    cfg.subject_order->push_back("Higher Education - C");
    CHECK(canonical_orders(d.items, cfg).subjects == *cfg.subject_order);
    cfg.strategy = Strategy::block;
    CHECK(labels(order(d, cfg).items) == Seq{"(A,y,1)", "(B,x,1)", "(B,z,2)", "(B,x,3)", "(C,w,1)"});

    CHECK(canonical_orders({}, OrderingConfig{}) == CanonicalOrders{});
  }

  TEST_CASE("order rejects invalid datasets") {
    auto d = fixture9();
    d.items.push_back(d.items[0]);
    CHECK_THROWS_AS(order(d, OrderingConfig{}), PipelineError);
  }

  TEST_CASE("strategy invariants on random datasets") {
    std::mt19937_64 gen(31337);
    for (int trial = 0; trial < 300; ++trial) {
      auto d = corgi::testing::random_dataset(gen);
      auto subject = [](const InstructionInstance& it) { return it.subject; };
      auto concept_key = [](const InstructionInstance& it) { return it.concept_id; };
      for (auto s : kAllStrategies) {
        OrderingConfig cfg;
        cfg.strategy = s;
        cfg.seed = static_cast<std::uint64_t>(trial);
        auto out = order(d, cfg).items;
        CAPTURE(trial);
        CAPTURE(to_string(s));
        REQUIRE(ids(out) == ids(d.items));
        switch (s) {
          case Strategy::block:
            CHECK(contiguous(out, subject));
            CHECK(nondecreasing_within(out, subject));
            break;
          case Strategy::cluster:
            CHECK(contiguous(out, subject));
            CHECK(contiguous(out, concept_key));
            CHECK(nondecreasing_within(out, concept_key));
            break;
          case Strategy::interleave:
            for (auto g : {Granularity::per_index, Granularity::per_load_tier}) {
              cfg.granularity = g;
              auto seq = order(d, cfg).items;
              for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
                int l0 = level_of(seq[i], g), l1 = level_of(seq[i + 1], g);
                CHECK(l0 <= l1);
                if (l0 == l1 && seq[i].subject == seq[i + 1].subject) {
                  std::set<std::string> remaining;
                  for (std::size_t j = i + 1; j < seq.size(); ++j) {
                    if (level_of(seq[j], g) == l0) remaining.insert(seq[j].subject);
                  }
                  CHECK(remaining.size() == 1);
                }
              }
            }
            break;
          case Strategy::spiral:
            CHECK(nondecreasing_within(out, concept_key));
            for (std::size_t i = 0; i + 1 < out.size(); ++i) {
              if (out[i].concept_id != out[i + 1].concept_id) continue;
              std::set<std::string> remaining;
              for (std::size_t j = i + 1; j < out.size(); ++j) remaining.insert(out[j].concept_id);
              CHECK(remaining.size() == 1);
            }
            break;
          case Strategy::random:
            break;
        }
      }
    }
  }

  TEST_CASE("stage outermost groups stages by first appearance") {
    Dataset d;
    d.items = {make_instance("Law", "l", 5), make_instance("Physics", "p", 1, true), make_instance("Law", "l", 1),
               make_instance("Physics", "p", 5, true), make_instance("Chem", "c", 1, true)};
    OrderingConfig cfg;
    cfg.strategy = Strategy::interleave;
    CHECK(labels(order(d, cfg).items) == Seq{"(Law,l,1)", "(Physics,p,1)", "(Chem,c,1)", "(Law,l,5)", "(Physics,p,5)"});
    cfg.stage_outermost = true;
    CHECK(labels(order(d, cfg).items) == Seq{"(Law,l,1)", "(Law,l,5)", "(Physics,p,1)", "(Chem,c,1)", "(Physics,p,5)"});
  }

  TEST_CASE("export: conversation records, manifest, byte-identical re-export") {
    auto dir = temp_dir("scheduler-export");
    auto d = fixture9();
    d.items[0].system_message = std::string(system_messages_for(CognitiveLoad::hard)[4]);
    OrderingConfig cfg;
    cfg.strategy = Strategy::interleave;
    cfg.seed = 5;
    auto od = order(d, cfg);
    od.run_id = "test-run";
    CHECK(od.input_digest == dataset_digest(d.items));
    export_training_order(od, dir / "train.jsonl");
    auto first = read_file(dir / "train.jsonl");
    export_training_order(order(d, cfg), dir / "again.jsonl");
    CHECK(read_file(dir / "again.jsonl") == first);

    std::vector<Json> records;
    for_each_jsonl(dir / "train.jsonl", [&](const Json& j, std::size_t) { records.push_back(j); });
    REQUIRE(records.size() == 9);
    for (std::size_t i = 0; i < 9; ++i) CHECK(records[i]["id"] == od.items[i].id);
    for (const auto& r : records) {
      bool has_system = r["messages"][0]["role"] == "system";
      CHECK(r["messages"].size() == (has_system ? 3u : 2u));
      CHECK(r["messages"][has_system ? 1 : 0]["role"] == "user");
    }
    CHECK(od.items[6].id == d.items[0].id);
    CHECK(records[6]["messages"][0]["role"] == "system");
    CHECK(records[0]["messages"].size() == 2);

    auto m = read_json_file(dir / "train.jsonl.manifest");
    CHECK(m["strategy"] == "interleave");
    CHECK(m["seed"] == 5);
    CHECK(m["input_digest"] == od.input_digest);
    CHECK(m["output_digest"] == sha256_hex(first));
  }

  TEST_CASE("strategy names round-trip") {
    for (auto s : kAllStrategies) CHECK(parse_strategy(to_string(s)) == s);
    CHECK_FALSE(parse_strategy("zigzag"));
    CHECK(parse_granularity("per_load_tier") == Granularity::per_load_tier);
  }
}
