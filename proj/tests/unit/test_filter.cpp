// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <atomic>
#include <mutex>

#include "corgi/dataset_io.hpp"
#include "corgi/error.hpp"
#include "corgi/filter.hpp"
#include "corgi/mock_teacher.hpp"
#include "datasets.hpp"

using namespace corgi;
using corgi::testing::golden_dir;
using corgi::testing::make_instance;

namespace {

/// Three fixed passages whose titles encode the vote to return.
class VoteRetriever : public Retriever {
 public:
  std::atomic<int> calls{0};
  std::vector<Passage> retrieve(std::string_view question, int k) override {
    ++calls;
    std::vector<Passage> out;
    for (int i = 0; i < k; ++i) out.push_back({"p" + std::to_string(i), std::string(question), "doc", 0.0, 0});
    return out;
  }
};

/// Votes are read from the question: the three characters after "votes=" are y/n.
class VoteClient : public TeacherClient {
 public:
  std::atomic<int> calls{0};
  std::string complete(const CompletionRequest& req) override {
    ++calls;
    auto pos = req.prompt.find("votes=");
    auto title = req.prompt.find("PASSAGE: p");
    if (pos == std::string::npos || title == std::string::npos) throw TeacherError(TeacherError::Kind::transport, "no votes");
    char slot = req.prompt[title + 10];
    char v = req.prompt[pos + 6 + static_cast<std::size_t>(slot - '0')];
    if (v == 'x') throw TeacherError(TeacherError::Kind::transport, "judge unavailable");
    return v == 'y' ? "A) Yes" : "B) No";
  }
  std::string model_name() const override { return "votes"; }
};

InstructionInstance voting(const std::string& votes, int index = 3) {
  auto inst = make_instance("Astronomy", "orbits " + votes, index);
  inst.question = "Which orbit shape applies here, votes=" + votes + "?";
  return inst;
}

}  // namespace

TEST_SUITE("filter") {
  TEST_CASE("exclusion keywords are exact") {
    auto kws = exclusion_keywords();
    std::vector<std::string_view> expected{"ai assistant", "ai language model", "sorry, ", "sorry but ",
                                           "sorry for the confusion ", "i'm unable to ", "without further ",
                                           "apologize", "i cannot"};
    CHECK(std::vector<std::string_view>(kws.begin(), kws.end()) == expected);
  }

  TEST_CASE("rule filter golden truth table") {
    std::size_t rows = 0;
    for_each_jsonl(golden_dir() / "rule_filter_truth_table.jsonl", [&](const Json& j, std::size_t line) {
      ++rows;
      auto d = rule_filter(j["question"].get<std::string>(), j["answer"].get<std::string>());
      CAPTURE(line);
      CHECK(d.keep == j["keep"].get<bool>());
      CHECK(d.reason == j["reason"].get<std::string>());
    });
    CHECK(rows >= 30);
  }

  TEST_CASE("rule filter examples") {
    auto refusal = rule_filter("What is a meter?", "As an AI language model, I cannot measure anything.");
    CHECK_FALSE(refusal.keep);
    CHECK(refusal.reason == "answer keyword:ai language model");
    auto short_q = rule_filter("Why?", "Because it is so, in every frame of reference.");
    CHECK_FALSE(short_q.keep);
    CHECK(short_q.reason == "question too_short");
    std::string answer;
    for (int i = 0; i < 50; ++i) answer += "word" + std::to_string(i) + " ";
    CHECK(rule_filter("What is a meter?", answer).keep);
  }

  TEST_CASE("all eight vote vectors against every threshold") {
    VoteRetriever retriever;
    VoteClient client;
    for (int mask = 0; mask < 8; ++mask) {
      std::string votes;
      int yes = 0;
      for (int b = 0; b < 3; ++b) {
        bool y = (mask >> b) & 1;
        votes += y ? 'y' : 'n';
        yes += y;
      }
      for (int required = 1; required <= 3; ++required) {
        CAPTURE(votes);
        CAPTURE(required);
        auto d = retrieval_filter(voting(votes), retriever, client, required);
        CHECK(d.yes_count() == static_cast<std::size_t>(yes));
        REQUIRE(d.votes.size() == 3);
        for (int b = 0; b < 3; ++b) CHECK((d.votes[static_cast<std::size_t>(b)] == Vote::yes) == (votes[static_cast<std::size_t>(b)] == 'y'));
        CHECK(d.outcome == (yes >= required ? RetrievalOutcome::keep : RetrievalOutcome::drop));
      }
    }
    CHECK_THROWS_AS(retrieval_filter(voting("yyy"), retriever, client, 0), std::invalid_argument);
    CHECK_THROWS_AS(retrieval_filter(voting("yyy"), retriever, client, 4), std::invalid_argument);
  }

  TEST_CASE("judge failure marks the instance errored") {
    VoteRetriever retriever;
    VoteClient client;
    auto d = retrieval_filter(voting("yxn"), retriever, client, 1);
    CHECK(d.outcome == RetrievalOutcome::error);
    CHECK(d.error.find("judge unavailable") != std::string::npos);
  }

  TEST_CASE("refusals are dropped before retrieval") {
    Dataset d;
    for (int i = 1; i <= 3; ++i) {
      auto inst = make_instance("Law", "c", i);
      inst.answer = "I'm sorry, but as an AI language model I cannot answer that question.";
      d.items.push_back(inst);
    }
    VoteRetriever retriever;
    VoteClient client;
    auto r = run_filters(d, retriever, client);
    CHECK(r.kept.items.empty());
    CHECK(r.dropped.size() == 3);
    CHECK(r.stats.rule_dropped == 3);
    CHECK(retriever.calls == 0);
    CHECK(client.calls == 0);
    CHECK(r.dropped[0].filter.state == FilterState::dropped_rule);
    CHECK(r.stats.rule_drop_reasons.at("answer keyword:ai language model") == 3);
  }

  TEST_CASE("empty dataset") {
    VoteRetriever retriever;
    VoteClient client;
    auto r = run_filters(Dataset{}, retriever, client);
    CHECK(r.kept.items.empty());
    CHECK(r.dropped.empty());
    CHECK(r.stats.input_count == 0);
    CHECK(r.stats.kept == 0);
    CHECK(r.stats.balanced());
  }

  TEST_CASE("order preserved and accounting identity") {
    Dataset d;
    const char* pattern[] = {"ynn", "nnn", "yyy", "nny", "nnn", "yny", "nyn", "nnn"};
    for (int i = 0; i < 8; ++i) d.items.push_back(voting(pattern[i], i + 1));
    auto refusal = make_instance("Law", "refusal", 4);
    refusal.answer = "Sorry, I cannot help.";
    d.items.insert(d.items.begin() + 2, refusal);
    VoteRetriever retriever;
    VoteClient client;
    auto r = run_filters(d, retriever, client, FilterConfig{.required_yes = 1, .max_concurrency = 3});
    CHECK(r.stats.input_count == 9);
    CHECK(r.stats.rule_dropped == 1);
    CHECK(r.stats.retrieval_dropped == 3);
    CHECK(r.stats.kept == 5);
    CHECK(r.stats.balanced());
    // Kept items are a subsequence of the input with only the filter status changed.
    std::size_t pos = 0;
    for (const auto& k : r.kept.items) {
      while (pos < d.items.size() && d.items[pos].id != k.id) ++pos;
      REQUIRE(pos < d.items.size());
      auto original = d.items[pos];
      original.filter = k.filter;
      CHECK(original == k);
      CHECK(k.filter.state == FilterState::kept);
      CHECK(k.filter.votes.size() == 3);
    }
    CHECK(r.kept.manifest.counts.at("total") == 5);
    for (const auto& x : r.dropped) {
      if (x.filter.state == FilterState::dropped_retrieval) CHECK(x.filter.votes.size() == 3);
    }
    auto j = to_json(r.stats);
    CHECK(j["input_count"] == 9);
    CHECK(j["errored"] == 0);
  }

  TEST_CASE("errored checks stay unfiltered and large failure rates abort") {
    Dataset d;
    for (int i = 1; i <= 10; ++i) d.items.push_back(voting(i == 4 ? "xnn" : "ynn", i));
    VoteRetriever retriever;
    VoteClient client;
    auto r = run_filters(d, retriever, client, FilterConfig{.max_failure_fraction = 0.2});
    CHECK(r.stats.errored == 1);
    CHECK(r.stats.kept == 10);
    CHECK(r.kept.items[3].filter.state == FilterState::unfiltered);
    CHECK(r.stats.balanced());

    for (int i : {1, 5, 7}) d.items[static_cast<std::size_t>(i)].question = "What now, votes=xyy?";
    CHECK_THROWS_AS(run_filters(d, retriever, client, FilterConfig{.max_failure_fraction = 0.2}), PipelineError);
  }

  TEST_CASE("mock judging rejects about the configured share") {
    Dataset d;
    for (int c = 0; c < 20; ++c) {
      for (int i = 1; i <= 19; ++i) d.items.push_back(make_instance("Physics", "concept " + std::to_string(c), i));
    }
    MockTeacher mock({}, MockOptions{.reject_rate = 0.5});
    Bm25Retriever retriever({{"Doc", "what does concept mean at level with detail", "d"}});
    auto r = run_filters(d, retriever, mock);
    CHECK(r.stats.balanced());
    CHECK(r.stats.kept > 120);
    CHECK(r.stats.kept < 260);
  }
}
