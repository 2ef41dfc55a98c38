// SPDX-License-Identifier: Apache-2.0
#pragma once

// Deliberately naive re-statement of the five ordering strategies, used only
// to cross-check the production scheduler. Quadratic selection loops, no
// shared code with src/scheduler.cpp beyond the config struct.

#include <cstddef>
#include <vector>

#include "corgi/scheduler.hpp"

namespace oracle {

std::vector<std::size_t> naive_order(const std::vector<corgi::InstructionInstance>& items,
                                     const corgi::OrderingConfig& cfg);

}  // namespace oracle
