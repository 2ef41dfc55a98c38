// SPDX-License-Identifier: Apache-2.0
#include "datasets.hpp"

#include <algorithm>
#include <unistd.h>

#include <fstream>
#include <sstream>

#include "corgi/cognitive.hpp"
#include "corgi/text.hpp"

namespace corgi::testing {

InstructionInstance make_instance(std::string_view subject_label, std::string_view concept_label, int index,
                                  bool secondary) {
  const auto& t = cognitive_template(index);
  InstructionInstance inst;
  inst.subject = std::string(secondary ? "Secondary Education - " : "Higher Education - ") + std::string(subject_label);
  inst.stage.value = secondary ? StageLevel::secondary : StageLevel::higher;
  inst.course_id = slugify(inst.subject) + "/course";
  inst.concept_id = inst.course_id + "/" + slugify(concept_label);
  inst.cognitive_index = index;
  inst.id = instance_id(inst.concept_id, index);
  inst.cognitive_process = std::string(to_string(t.process));
  inst.cognitive_subprocess = std::string(t.subprocess);
  inst.cognitive_load = t.load;
  inst.system_message = "";
  inst.question = "What does " + std::string(concept_label) + " mean at level " + std::to_string(index) + "?";
  inst.answer = "It is explained in detail here for " + std::string(concept_label) + ".";
  inst.provenance = {"test-teacher", std::string(kCreatedAt), "test-run"};
  return inst;
}

Dataset fixture9() {
  struct Row {
    const char* s;
    const char* c;
    int i;
  };
  const Row rows[] = {{"A", "a1", 18}, {"B", "b1", 5}, {"A", "a2", 1}, {"A", "a1", 1}, {"B", "b1", 18},
                      {"A", "a2", 18}, {"A", "a1", 5}, {"B", "b1", 1}, {"A", "a2", 5}};
  Dataset d;
  for (const auto& r : rows) d.items.push_back(make_instance(r.s, r.c, r.i));
  d.manifest.run_id = "test-run";
  return d;
}

std::string label(const InstructionInstance& inst) {
  std::string subject = inst.subject.substr(inst.subject.rfind(' ') + 1);
  std::string concept_slug = inst.concept_id.substr(inst.concept_id.rfind('/') + 1);
  return "(" + subject + "," + concept_slug + "," + std::to_string(inst.cognitive_index) + ")";
}

std::vector<std::string> labels(const std::vector<InstructionInstance>& items) {
  std::vector<std::string> out;
  for (const auto& it : items) out.push_back(label(it));
  return out;
}

Dataset random_dataset(std::mt19937_64& gen, std::size_t max_items, std::size_t max_subjects,
                       std::size_t max_concepts) {
  auto pick = [&](std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(gen); };
  std::size_t subjects = pick(1, max_subjects);
  struct Slot {
    std::size_t s, c;
    int i;
  };
  std::vector<Slot> pool;
  std::vector<bool> secondary(subjects);
  for (std::size_t s = 0; s < subjects; ++s) {
    secondary[s] = pick(0, 1) == 1;
    std::size_t concepts = pick(1, max_concepts);
    for (std::size_t c = 0; c < concepts; ++c) {
      for (int i = 1; i <= 19; ++i) pool.push_back({s, c, i});
    }
  }
  std::shuffle(pool.begin(), pool.end(), gen);
  std::size_t n = pick(0, std::min(max_items, pool.size()));
  Dataset d;
  d.manifest.run_id = "test-run";
  const char* names = "PQRS";
  for (std::size_t k = 0; k < n; ++k) {
    const auto& slot = pool[k];
    auto inst = make_instance(std::string(1, names[slot.s % 4]) + std::to_string(slot.s),
                              "c" + std::to_string(slot.c), slot.i, secondary[slot.s]);
    auto messages = system_messages_for(inst.cognitive_load);
    inst.system_message = std::string(messages[pick(0, messages.size() - 1)]);
    d.items.push_back(std::move(inst));
  }
  return d;
}

Dataset balanced_dataset(std::size_t subjects, std::size_t concepts) {
  Dataset d;
  d.manifest.run_id = "test-run";
  for (std::size_t s = 0; s < subjects; ++s) {
    for (std::size_t c = 0; c < concepts; ++c) {
      for (int i = 1; i <= 19; ++i) {
        d.items.push_back(make_instance("S" + std::to_string(s), "c" + std::to_string(c), i));
      }
    }
  }
  return d;
}

std::filesystem::path fixture_dir() { return CORGI_FIXTURE_DIR; }
std::filesystem::path golden_dir() { return CORGI_GOLDEN_DIR; }

std::filesystem::path temp_dir(std::string_view name) {
  auto p = std::filesystem::temp_directory_path() / ("corgi-test-" + std::string(name) + "-" +
                                                     std::to_string(::getpid()));
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace corgi::testing
