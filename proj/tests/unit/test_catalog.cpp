// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <fstream>
#include <set>

#include "corgi/catalog.hpp"
#include "corgi/error.hpp"
#include "corgi/text.hpp"
#include "datasets.hpp"

using namespace corgi;
using corgi::testing::fixture_dir;
using corgi::testing::temp_dir;

namespace {

std::filesystem::path write(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
  return p;
}

}  // namespace

TEST_SUITE("catalog") {
  TEST_CASE("astronomy survey course") {
    auto courses = parse_catalog(fixture_dir() / "catalog.csv", CatalogFormat::csv);
    REQUIRE(courses.size() == 4);
    CHECK(courses[0].id == "higher-education-astronomy/a-survey-of-the-universe");
    CHECK(courses[0].stage.value == StageLevel::higher);
    CHECK(courses[0].title == "A Survey of the Universe");
    CHECK(courses[0].source == "University of Pennsylvania");
    CHECK(courses[2].stage.value == StageLevel::secondary);
    CHECK(subject_order(courses) ==
          std::vector<std::string>{"Higher Education - Astronomy", "Secondary Education - Physics"});
  }

  TEST_CASE("csv quoting and optional stage hint") {
    auto dir = temp_dir("catalog-csv");
    auto p = write(dir / "c.csv",
                   "subject,course_title,course_description,source,stage_hint\n"
                   "Culinary Arts,\"Knife Skills, Basics\",\"Cuts \"\"julienne\"\" and\nbrunoise\",School,graduate\n");
    auto courses = parse_catalog(p, CatalogFormat::csv);
    REQUIRE(courses.size() == 1);
    CHECK(courses[0].id == "culinary-arts/knife-skills-basics");
    CHECK(courses[0].description == "Cuts \"julienne\" and\nbrunoise");
    CHECK(courses[0].stage == EducationalStage{StageLevel::higher, "graduate"});
  }

  TEST_CASE("jsonl catalog") {
    auto dir = temp_dir("catalog-jsonl");
    auto p = write(dir / "c.jsonl",
                   R"({"subject":"Secondary Education - Physics","course_title":"Waves","course_description":"Sound and light.","source":"IGCSE"})"
                   "\n");
    CHECK(catalog_format_from_path(p) == CatalogFormat::jsonl);
    auto courses = parse_catalog(p, CatalogFormat::jsonl);
    REQUIRE(courses.size() == 1);
    CHECK(courses[0].id == "secondary-education-physics/waves");
    CHECK(courses[0].stage.value == StageLevel::secondary);
  }

  TEST_CASE("empty file gives empty list") {
    auto dir = temp_dir("catalog-empty");
    CHECK(parse_catalog(write(dir / "e.csv", ""), CatalogFormat::csv).empty());
    CHECK(parse_catalog(write(dir / "e.jsonl", ""), CatalogFormat::jsonl).empty());
    CHECK(parse_catalog(write(dir / "h.csv", "subject,course_title,course_description\n"), CatalogFormat::csv).empty());
  }

  TEST_CASE("missing column and missing field") {
    auto dir = temp_dir("catalog-missing");
    CHECK_THROWS_AS(parse_catalog(write(dir / "a.csv", "subject,course_title\nX,Y\n"), CatalogFormat::csv),
                    CatalogError);
    CHECK_THROWS_AS(parse_catalog(write(dir / "b.jsonl", R"({"subject":"Higher Education - Law"})"
                                                         "\n"),
                                  CatalogFormat::jsonl),
                    CatalogError);
    CHECK_THROWS_AS(parse_catalog(dir / "absent.csv", CatalogFormat::csv), CatalogError);
  }

  TEST_CASE("duplicate subject and title is rejected with the key") {
    auto dir = temp_dir("catalog-dup");
    auto p = write(dir / "d.csv",
                   "subject,course_title,course_description\n"
                   "Higher Education - Law,Contracts,First.\n"
                   "Higher Education - Law,Torts,Second.\n"
                   "Higher Education - Law,CONTRACTS,Third.\n");
    try {
      parse_catalog(p, CatalogFormat::csv);
      FAIL("expected CatalogError");
    } catch (const CatalogError& e) {
      CHECK(std::string(e.what()).find("higher-education-law/contracts") != std::string::npos);
    }
    auto result = build_courses(read_catalog_records(p, CatalogFormat::csv));
    CHECK(result.courses.size() == result.record_count - result.rejects.size());
    REQUIRE(result.rejects.size() == 1);
    CHECK(result.rejects[0].first_line == 2);
    CHECK(result.rejects[0].line == 4);
  }

  TEST_CASE("assign_stage") {
    CHECK(assign_stage("Secondary Education - Physics", std::nullopt).value == StageLevel::secondary);
    CHECK(assign_stage("Higher Education - Law", std::nullopt).value == StageLevel::higher);
    CHECK_THROWS_AS(assign_stage("Culinary Arts", std::nullopt), CatalogError);
    CHECK(assign_stage("Culinary Arts", "secondary").value == StageLevel::secondary);
    CHECK(assign_stage("Culinary Arts", "undergraduate") == EducationalStage{StageLevel::higher, "undergraduate"});
    CHECK(assign_stage("Higher Education - Law", "graduate") == EducationalStage{StageLevel::higher, "graduate"});
    CHECK_THROWS_AS(assign_stage("Higher Education - Law", "secondary"), CatalogError);
    CHECK_THROWS_AS(assign_stage("Culinary Arts", "kindergarten"), CatalogError);
    CHECK_THROWS_AS(assign_stage("", std::nullopt), CatalogError);
  }

  TEST_CASE("slugify") {
    CHECK(slugify("Computer and Info Science") == "computer-and-info-science");
    CHECK(slugify("Gender, Sexuality, Women's Study") == "gender-sexuality-women-s-study");
    CHECK(slugify("  --Hello__World--  ") == "hello-world");
    CHECK_THROWS_AS(slugify("!!!"), std::invalid_argument);
    CHECK_THROWS_AS(slugify(""), std::invalid_argument);
    for (const char* s : {"Computer and Info Science", "A/B  c", "x", "Ünïcode Name 2"}) {
      CHECK(slugify(slugify(s)) == slugify(s));
    }
  }

  TEST_CASE("all reference subjects resolve without hints") {
    auto subjects = reference_subjects();
    CHECK(subjects.size() == 45);
    std::set<std::string> slugs;
    for (const auto& s : subjects) {
      CAPTURE(s.name);
      CHECK_NOTHROW(assign_stage(s.name, std::nullopt));
      slugs.insert(slugify(s.name));
    }
    CHECK(slugs.size() == 45);
  }
}
