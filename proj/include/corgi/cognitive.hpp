// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <string_view>

#include "corgi/types.hpp"

namespace corgi {

inline constexpr int kTemplateCount = 19;

/// The fixed question-generation table, indices 1..19 in order.
std::span<const CognitiveTemplate> cognitive_templates();

/// Throws std::out_of_range outside 1..19.
const CognitiveTemplate& cognitive_template(int index);
CognitiveLoad cognitive_load_of(int index);

/// 0 = easy, 1 = medium, 2 = hard.
int load_tier(CognitiveLoad load);

/// System messages drawn for answer generation. The easy set has nine
/// entries and the medium/hard set six; both include the empty string.
std::span<const std::string_view> system_messages_for(CognitiveLoad load);

}  // namespace corgi
