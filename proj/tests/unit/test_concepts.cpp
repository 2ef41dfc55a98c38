// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "corgi/concepts.hpp"
#include "corgi/error.hpp"
#include "corgi/mock_teacher.hpp"
#include "corgi/prompts.hpp"
#include "corgi/text.hpp"
#include "datasets.hpp"

using namespace corgi;
using corgi::testing::golden_dir;
using corgi::testing::read_file;

namespace {

Course astronomy() {
  Course c;
  c.id = "higher-education-astronomy/a-survey-of-the-universe";
  c.subject = "Higher Education - Astronomy";
  c.stage.value = StageLevel::higher;
  c.title = "A Survey of the Universe";
  c.description = "Planets, stars, galaxies and cosmology for non-majors.";
  return c;
}

Concept planted(const std::string& id, std::vector<double> v, const std::string& subject = "Higher Education - X") {
  double n = 0;
  for (double x : v) n += x * x;
  for (double& x : v) x /= std::sqrt(n);
  Concept c;
  c.id = id;
  c.subject = subject;
  c.name = id;
  c.explanation = "planted";
  c.embedding = std::move(v);
  return c;
}

/// Always returns the same reply.
struct FixedClient : TeacherClient {
  std::string reply;
  int calls = 0;
  explicit FixedClient(std::string r) : reply(std::move(r)) {}
  std::string complete(const CompletionRequest&) override {
    ++calls;
    return reply;
  }
  std::string model_name() const override { return "fixed"; }
};

}  // namespace

TEST_SUITE("concepts") {
  TEST_CASE("refinement stores the scripted reply") {
    auto reply = read_file(golden_dir() / "replies" / "refinement.txt");
    auto course = astronomy();
    MockTeacher mock({{"", {"Extend the course description"}, reply, std::nullopt}}, MockOptions{.strict = true});
    auto refined = refine_description(course, mock);
    REQUIRE(refined.refined_description);
    CHECK(*refined.refined_description == std::string(trim(reply)));
    CHECK(refined.description == course.description);

    FixedClient other("A different extension.");
    auto again = refine_description(refined, other);
    CHECK(*again.refined_description == "A different extension.");
  }

  TEST_CASE("empty refinement reply is an error") {
    FixedClient empty("  \n");
    CHECK_THROWS_AS(refine_description(astronomy(), empty), PipelineError);
  }

  TEST_CASE("astronomy concept reply gives five concepts") {
    auto course = astronomy();
    auto parsed = parse_concept_list(course, read_file(golden_dir() / "replies" / "concept_generation.txt"));
    REQUIRE(parsed.concepts.size() == 5);
    CHECK(parsed.skipped.empty());
    CHECK(parsed.concepts[0].name == "Solar System");
    CHECK(parsed.concepts[0].id == course.id + "/solar-system");
    CHECK(parsed.concepts[4].name == "Cosmology");
    for (const auto& c : parsed.concepts) {
      CHECK_FALSE(c.embedding.has_value());
      CHECK(c.course_id == course.id);
      CHECK(c.subject == course.subject);
      CHECK_FALSE(c.explanation.empty());
    }
  }

  TEST_CASE("arrow-labelled entries") {
    auto parsed = parse_concept_list(astronomy(), read_file(golden_dir() / "replies" / "concept_arrow.txt"));
    REQUIRE(parsed.concepts.size() == 1);
    CHECK(parsed.concepts[0].name == "Dimension in Linear Spaces");
    for (const char* reply : {"Concept 2 -> Rank: the number of pivots.", "Concept 3 $\\rightarrow$ Span: all combinations."}) {
      auto p = parse_concept_list(astronomy(), reply);
      REQUIRE(p.concepts.size() == 1);
    }
  }

  TEST_CASE("continuations, skips and slug collisions") {
    const char* reply =
        "Here are the concepts:\n"
        "1. **Orbits**: Paths of bodies\n"
        "   under gravity.\n"
        "2) Tides - no separator here\n"
        "3. Orbits: A second entry with the same name.\n"
        "4. : missing name\n";
    auto parsed = parse_concept_list(astronomy(), reply);
    REQUIRE(parsed.concepts.size() == 2);
    CHECK(parsed.concepts[0].name == "Orbits");
    CHECK(parsed.concepts[0].explanation == "Paths of bodies under gravity.");
    CHECK(parsed.concepts[1].id == astronomy().id + "/orbits-2");
    REQUIRE(parsed.skipped.size() == 2);
    CHECK(parsed.skipped[0].line == 4);
    CHECK(parsed.skipped[1].line == 6);
  }

  TEST_CASE("zero entries is an error") {
    auto course = astronomy();
    course.refined_description = "Refined.";
    FixedClient client("no concepts here");
    CHECK_THROWS_AS(extract_concepts(course, client), PipelineError);
    auto unrefined = astronomy();
    CHECK_THROWS_AS(extract_concepts(unrefined, client), PromptError);
  }

  TEST_CASE("identical texts: keep first, drop second at 1.0") {
    Concept a, b;
    a.id = "s/c/a";
    b.id = "s/c/b";
    a.name = b.name = "Orbit";
    a.explanation = b.explanation = "The path of a body.";
    ReferenceEmbedder embedder;
    auto r = dedup_concepts({a, b}, embedder);
    REQUIRE(r.kept.size() == 1);
    CHECK(r.kept[0].id == "s/c/a");
    CHECK(r.kept[0].embedding.has_value());
    REQUIRE(r.report.dropped.size() == 1);
    CHECK(r.report.dropped[0].id == "s/c/b");
    CHECK(r.report.dropped[0].duplicate_of == "s/c/a");
    CHECK(r.report.dropped[0].similarity == 1.0);
  }

  TEST_CASE("orthogonal embeddings are both kept") {
    auto r = dedup_embedded({planted("a", {1, 0}), planted("b", {0, 1})});
    CHECK(r.report.kept == std::vector<std::string>{"a", "b"});
    CHECK(r.report.dropped.empty());
  }

  TEST_CASE("chain compares only against the kept set") {
    // sim(a,b) = 0.8, sim(b,c) = 0.8, sim(a,c) = 0.3
    double y = (0.8 - 0.8 * 0.3) / 0.6;
    double z = std::sqrt(1 - 0.09 - y * y);
    auto r = dedup_embedded({planted("a", {1, 0, 0}), planted("b", {0.8, 0.6, 0}), planted("c", {0.3, y, z})});
    CHECK(r.report.kept == std::vector<std::string>{"a", "c"});
    REQUIRE(r.report.dropped.size() == 1);
    CHECK(r.report.dropped[0].id == "b");
    CHECK(r.report.dropped[0].duplicate_of == "a");
    CHECK(r.report.dropped[0].similarity == doctest::Approx(0.8));
  }

  TEST_CASE("threshold bounds and exact-duplicate semantics at 1.0") {
    CHECK_THROWS_AS(dedup_embedded({}, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(dedup_embedded({}, 1.0000001), std::invalid_argument);
    CHECK_THROWS_AS(dedup_embedded({}, -0.5), std::invalid_argument);
    auto r = dedup_embedded({planted("a", {1, 1e-9}), planted("b", {1, 0}), planted("c", {1, 1e-9})}, 1.0);
    CHECK(r.report.kept == std::vector<std::string>{"a", "b"});
    REQUIRE(r.report.dropped.size() == 1);
    CHECK(r.report.dropped[0].id == "c");
  }

  TEST_CASE("per-subject scope") {
    std::vector<Concept> cs{planted("a", {1, 0}, "S1"), planted("b", {1, 0}, "S2"), planted("c", {1, 0}, "S1")};
    auto global = dedup_embedded(cs, 0.67, DedupScope::global);
    CHECK(global.report.kept == std::vector<std::string>{"a"});
    auto scoped = dedup_embedded(cs, 0.67, DedupScope::per_subject);
    CHECK(scoped.report.kept == std::vector<std::string>{"a", "b"});
    REQUIRE(scoped.report.dropped.size() == 1);
    CHECK(scoped.report.dropped[0].duplicate_of == "a");
  }

  TEST_CASE("dimension mismatch and missing embeddings") {
    CHECK_THROWS_AS(dedup_embedded({planted("a", {1, 0}), planted("b", {1, 0, 0})}), std::invalid_argument);
    Concept bare;
    bare.id = "x";
    CHECK_THROWS_AS(dedup_embedded({bare}), std::invalid_argument);
  }

  TEST_CASE("report json") {
    auto r = dedup_embedded({planted("a", {1, 0}), planted("b", {1, 0})});
    auto j = to_json(r.report);
    CHECK(j["threshold"] == 0.67);
    CHECK(j["kept"] == Json::array({"a"}));
    CHECK(j["dropped"][0]["duplicate_of"] == "a");
  }

  TEST_CASE("embedding text") {
    Concept c;
    c.name = "Stars";
    c.explanation = "Luminous spheres.";
    CHECK(embedding_text(c) == "Stars: Luminous spheres.");
  }
}
