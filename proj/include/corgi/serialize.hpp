// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>

#include "corgi/types.hpp"

namespace corgi {

// Every record type has one canonical key order; to_json always emits it, so
// serialised bytes are stable and hashable. The from_json functions throw
// DatasetError naming the field and the given 1-based line.

void write_stage(const EducationalStage& stage, Json& into);
Json to_json(const Course& c);
Json to_json(const Concept& c);
Json to_json(const InstructionInstance& inst);
Json to_json(const Manifest& m);

Course course_from_json(const Json& j, std::size_t line = 0);
Concept concept_from_json(const Json& j, std::size_t line = 0);
InstructionInstance instance_from_json(const Json& j, std::size_t line = 0);
Manifest manifest_from_json(const Json& j);

/// Compact single-line dump used for every JSONL record.
std::string dump_line(const Json& j);

}  // namespace corgi
