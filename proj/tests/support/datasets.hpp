// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "corgi/types.hpp"

namespace corgi::testing {

inline constexpr std::string_view kCreatedAt = "2026-01-15T09:00:00Z";

/// A valid instance for subject "<stage prefix> - <label>", course "course",
/// concept `concept_label`, template `index`.
InstructionInstance make_instance(std::string_view subject_label, std::string_view concept_label, int index,
                                  bool secondary = false);

/// The 9-item scheduler fixture: subjects A{a1,a2}, B{b1}, indices {1,5,18},
/// in a scrambled input order whose first appearances are A, B and a1, a2.
Dataset fixture9();

/// Short "(A,a1,5)" labels for readable sequence comparisons.
std::string label(const InstructionInstance& inst);
std::vector<std::string> labels(const std::vector<InstructionInstance>& items);

/// Up to `max_items` distinct (concept, index) items over at most
/// `max_subjects` subjects with at most `max_concepts` concepts each, in
/// random input order. Stages and system messages vary.
Dataset random_dataset(std::mt19937_64& gen, std::size_t max_items = 50, std::size_t max_subjects = 4,
                       std::size_t max_concepts = 3);

/// subjects x concepts x 19 indices, input order (subject, concept, index).
Dataset balanced_dataset(std::size_t subjects, std::size_t concepts);

std::filesystem::path fixture_dir();
std::filesystem::path golden_dir();

/// Fresh empty directory under the system temp dir.
std::filesystem::path temp_dir(std::string_view name);

std::string read_file(const std::filesystem::path& p);

}  // namespace corgi::testing
