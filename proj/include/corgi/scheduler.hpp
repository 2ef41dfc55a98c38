// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "corgi/types.hpp"

namespace corgi {

enum class Strategy { interleave, block, cluster, spiral, random };
enum class Granularity { per_index, per_load_tier };

std::string_view to_string(Strategy s);
std::string_view to_string(Granularity g);
std::optional<Strategy> parse_strategy(std::string_view s);
std::optional<Granularity> parse_granularity(std::string_view s);
inline constexpr Strategy kAllStrategies[] = {Strategy::interleave, Strategy::block, Strategy::cluster,
                                              Strategy::spiral, Strategy::random};

struct OrderingConfig {
  Strategy strategy = Strategy::interleave;
  std::uint64_t seed = 0;
  std::optional<std::vector<std::string>> subject_order;
  Granularity granularity = Granularity::per_index;
  bool stage_outermost = false;  // partition by stage first, in order of first appearance

  friend bool operator==(const OrderingConfig&, const OrderingConfig&) = default;
};

struct CanonicalOrders {
  std::vector<std::string> subjects;
  std::map<std::string, std::vector<std::string>> concepts;  // subject -> concept ids

  friend bool operator==(const CanonicalOrders&, const CanonicalOrders&) = default;
};

/// Subjects from cfg.subject_order or first appearance; concepts by first
/// appearance. Throws PipelineError when the explicit order misses a subject.
CanonicalOrders canonical_orders(std::span<const InstructionInstance> items, const OrderingConfig& cfg);

/// The permutation `order` applies, as input positions. Does not validate.
std::vector<std::size_t> order_indices(std::span<const InstructionInstance> items, const OrderingConfig& cfg);

struct OrderedDataset {
  std::vector<InstructionInstance> items;
  OrderingConfig config;
  std::string input_digest;
  std::string run_id;
};

/// SHA-256 over the canonical JSONL serialisation of the items.
std::string dataset_digest(std::span<const InstructionInstance> items);

/// Validates, then reorders. Throws PipelineError listing violations.
OrderedDataset order(const Dataset& d, const OrderingConfig& cfg);

/// Chat-style training record: optional system turn, user question,
/// assistant answer.
Json conversation_record(const InstructionInstance& inst);

Json ordering_manifest(const OrderedDataset& od);

/// One conversation record per line in curriculum order, plus a manifest.
void export_training_order(const OrderedDataset& od, const std::filesystem::path& path);

}  // namespace corgi
