// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "corgi/types.hpp"

namespace corgi {

struct Violation {
  std::string kind;  // e.g. "id_collision", "template_mismatch", "empty_field"
  std::string instance_id;
  std::vector<std::size_t> positions;  // 0-based item positions
  std::string field;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  std::string summary() const;
};

/// Checks one instance against the template table and id rules.
void validate_instance(const InstructionInstance& inst, std::size_t position, ValidationReport& report);

/// Never throws; an empty report means the dataset is valid.
ValidationReport validate(const Dataset& d);

}  // namespace corgi
