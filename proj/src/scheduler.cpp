// SPDX-License-Identifier: Apache-2.0
#include "corgi/scheduler.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>
#include <tuple>
#include <unordered_map>

#include "corgi/cognitive.hpp"
#include "corgi/dataset_io.hpp"
#include "corgi/digest.hpp"
#include "corgi/error.hpp"
#include "corgi/rng.hpp"
#include "corgi/serialize.hpp"
#include "corgi/validate.hpp"

namespace corgi {

std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::interleave: return "interleave";
    case Strategy::block: return "block";
    case Strategy::cluster: return "cluster";
    case Strategy::spiral: return "spiral";
    case Strategy::random: return "random";
  }
  return "?";
}

std::string_view to_string(Granularity g) { return g == Granularity::per_index ? "per_index" : "per_load_tier"; }

std::optional<Strategy> parse_strategy(std::string_view s) {
  for (auto st : kAllStrategies) {
    if (to_string(st) == s) return st;
  }
  return std::nullopt;
}

std::optional<Granularity> parse_granularity(std::string_view s) {
  if (s == "per_index") return Granularity::per_index;
  if (s == "per_load_tier") return Granularity::per_load_tier;
  return std::nullopt;
}

CanonicalOrders canonical_orders(std::span<const InstructionInstance> items, const OrderingConfig& cfg) {
  CanonicalOrders out;
  std::vector<std::string> seen_subjects;
  std::set<std::string> subjects, concepts;
  for (const auto& it : items) {
    if (subjects.insert(it.subject).second) seen_subjects.push_back(it.subject);
    if (concepts.insert(it.concept_id).second) out.concepts[it.subject].push_back(it.concept_id);
  }
  if (cfg.subject_order) {
    std::set<std::string> listed(cfg.subject_order->begin(), cfg.subject_order->end());
    std::string missing;
    for (const auto& s : seen_subjects) {
      if (!listed.count(s)) missing += (missing.empty() ? "" : ", ") + s;
    }
    if (!missing.empty()) throw PipelineError("subject_order does not list: " + missing);
    for (const auto& s : *cfg.subject_order) {
      if (subjects.count(s)) out.subjects.push_back(s);
    }
  } else {
    out.subjects = std::move(seen_subjects);
  }
  return out;
}

namespace {

struct Keys {
  std::vector<std::size_t> subject;  // rank in canonical subject order
  std::vector<std::size_t> concept_rank;  // rank within its subject
};

Keys rank_items(std::span<const InstructionInstance> items, const CanonicalOrders& co) {
  std::unordered_map<std::string, std::size_t> srank, crank;
  for (std::size_t i = 0; i < co.subjects.size(); ++i) srank[co.subjects[i]] = i;
  for (const auto& [subject, ids] : co.concepts) {
    for (std::size_t i = 0; i < ids.size(); ++i) crank[ids[i]] = i;
  }
  Keys k;
  for (const auto& it : items) {
    k.subject.push_back(srank.at(it.subject));
    k.concept_rank.push_back(crank.at(it.concept_id));
  }
  return k;
}

int level_of(const InstructionInstance& it, Granularity g) {
  return g == Granularity::per_index ? it.cognitive_index : load_tier(it.cognitive_load);
}

// Orders positions `pos` (already in input order) of one stage partition.
std::vector<std::size_t> order_group(std::span<const InstructionInstance> items, std::vector<std::size_t> pos,
                                     const OrderingConfig& cfg, const Keys& k, std::size_t subject_count,
                                     SplitMix64& rng) {
  auto idx = [&](std::size_t p) { return items[p].cognitive_index; };
  switch (cfg.strategy) {
    case Strategy::block:
      std::stable_sort(pos.begin(), pos.end(), [&](std::size_t a, std::size_t b) {
        return std::tuple(k.subject[a], idx(a), k.concept_rank[a]) < std::tuple(k.subject[b], idx(b), k.concept_rank[b]);
      });
      return pos;
    case Strategy::cluster:
      std::stable_sort(pos.begin(), pos.end(), [&](std::size_t a, std::size_t b) {
        return std::tuple(k.subject[a], k.concept_rank[a], idx(a)) < std::tuple(k.subject[b], k.concept_rank[b], idx(b));
      });
      return pos;
    case Strategy::random:
      fisher_yates(std::span<std::size_t>(pos), rng);
      return pos;
    case Strategy::interleave: {
      // Within a level a subject's items go by (index, concept, input); the
      // index term only matters for per_load_tier.
      std::stable_sort(pos.begin(), pos.end(), [&](std::size_t a, std::size_t b) {
        return std::tuple(level_of(items[a], cfg.granularity), idx(a), k.concept_rank[a]) <
               std::tuple(level_of(items[b], cfg.granularity), idx(b), k.concept_rank[b]);
      });
      std::vector<std::size_t> out;
      out.reserve(pos.size());
      std::size_t begin = 0;
      while (begin < pos.size()) {
        int level = level_of(items[pos[begin]], cfg.granularity);
        std::size_t end = begin;
        std::vector<std::deque<std::size_t>> queues(subject_count);
        while (end < pos.size() && level_of(items[pos[end]], cfg.granularity) == level) {
          queues[k.subject[pos[end]]].push_back(pos[end]);
          ++end;
        }
        std::size_t remaining = end - begin;
        while (remaining > 0) {
          for (auto& q : queues) {
            if (q.empty()) continue;
            out.push_back(q.front());
            q.pop_front();
            --remaining;
          }
        }
        begin = end;
      }
      return out;
    }
    case Strategy::spiral: {
      std::stable_sort(pos.begin(), pos.end(), [&](std::size_t a, std::size_t b) { return idx(a) < idx(b); });
      std::vector<std::vector<std::deque<std::size_t>>> queues(subject_count);
      for (std::size_t p : pos) {
        auto& per_subject = queues[k.subject[p]];
        if (per_subject.size() <= k.concept_rank[p]) per_subject.resize(k.concept_rank[p] + 1);
        per_subject[k.concept_rank[p]].push_back(p);
      }
      std::vector<std::size_t> cursor(subject_count, 0);
      std::vector<std::size_t> out;
      out.reserve(pos.size());
      while (out.size() < pos.size()) {
        for (std::size_t s = 0; s < subject_count; ++s) {
          auto& cq = queues[s];
          for (std::size_t step = 0; step < cq.size(); ++step) {
            std::size_t c = (cursor[s] + step) % cq.size();
            if (cq[c].empty()) continue;
            out.push_back(cq[c].front());
            cq[c].pop_front();
            cursor[s] = (c + 1) % cq.size();
            break;
          }
        }
      }
      return out;
    }
  }
  return pos;
}

}  // namespace

std::vector<std::size_t> order_indices(std::span<const InstructionInstance> items, const OrderingConfig& cfg) {
  CanonicalOrders co = canonical_orders(items, cfg);
  Keys keys = rank_items(items, co);
  SplitMix64 rng(cfg.seed);

  std::vector<std::vector<std::size_t>> groups;
  if (cfg.stage_outermost) {
    std::vector<EducationalStage> stages;
    for (std::size_t i = 0; i < items.size(); ++i) {
      auto it = std::find(stages.begin(), stages.end(), items[i].stage);
      std::size_t g = static_cast<std::size_t>(it - stages.begin());
      if (it == stages.end()) {
        stages.push_back(items[i].stage);
        groups.emplace_back();
      }
      groups[g].push_back(i);
    }
  } else {
    groups.emplace_back(items.size());
    std::iota(groups[0].begin(), groups[0].end(), 0);
  }

  std::vector<std::size_t> out;
  out.reserve(items.size());
  for (auto& g : groups) {
    auto part = order_group(items, std::move(g), cfg, keys, co.subjects.size(), rng);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

std::string dataset_digest(std::span<const InstructionInstance> items) {
  std::string buf;
  for (const auto& it : items) {
    buf += dump_line(to_json(it));
    buf += '\n';
  }
  return sha256_hex(buf);
}

OrderedDataset order(const Dataset& d, const OrderingConfig& cfg) {
  auto report = validate(d);
  if (!report.ok()) throw PipelineError("cannot order an invalid dataset: " + report.summary());
  OrderedDataset od;
  od.config = cfg;
  od.input_digest = dataset_digest(d.items);
  od.run_id = d.manifest.run_id;
  for (std::size_t p : order_indices(d.items, cfg)) od.items.push_back(d.items[p]);
  return od;
}

Json conversation_record(const InstructionInstance& inst) {
  Json messages = Json::array();
  if (!inst.system_message.empty()) messages.push_back({{"role", "system"}, {"content", inst.system_message}});
  messages.push_back({{"role", "user"}, {"content", inst.question}});
  messages.push_back({{"role", "assistant"}, {"content", inst.answer}});
  return Json{{"id", inst.id}, {"messages", std::move(messages)}};
}

Json ordering_manifest(const OrderedDataset& od) {
  Json m{{"run_id", od.run_id},
         {"strategy", to_string(od.config.strategy)},
         {"seed", od.config.seed},
         {"granularity", to_string(od.config.granularity)},
         {"stage_outermost", od.config.stage_outermost},
         {"input_digest", od.input_digest},
         {"count", od.items.size()}};
  if (od.config.subject_order) m["subject_order"] = *od.config.subject_order;
  return m;
}

void export_training_order(const OrderedDataset& od, const std::filesystem::path& path) {
  std::string buf;
  for (const auto& it : od.items) {
    buf += dump_line(conversation_record(it));
    buf += '\n';
  }
  write_text_atomic(path, buf);
  Json m = ordering_manifest(od);
  m["output_digest"] = sha256_hex(buf);
  write_json_file(manifest_path(path), m);
}

}  // namespace corgi
