// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace corgi {

std::string_view trim(std::string_view s);
std::string to_lower(std::string_view s);
bool istarts_with(std::string_view s, std::string_view prefix);
bool icontains(std::string_view haystack, std::string_view needle);

/// Splits on ASCII whitespace; empty tokens are never produced.
std::vector<std::string_view> split_whitespace(std::string_view s);
std::size_t word_count(std::string_view s);

/// Lowercased ASCII alphanumeric runs; everything else separates tokens.
std::vector<std::string> alnum_tokens(std::string_view s);

/// Lowercase, collapse every run of non-alphanumeric bytes into one hyphen,
/// strip leading/trailing hyphens. Throws std::invalid_argument when the
/// result is empty.
std::string slugify(std::string_view name);

}  // namespace corgi
