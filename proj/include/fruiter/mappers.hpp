#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "fruiter/core.hpp"
#include "fruiter/errors.hpp"
#include "fruiter/rng.hpp"

namespace fruiter {

enum class TieBreak { lexicographic };

struct MapperConfig {
  std::string technique;
  double threshold = 0.5;        // a candidate maps only when score > threshold
  std::uint64_t seed = 0;        // consumed by the naive mapper only
  TieBreak tie_break = TieBreak::lexicographic;
};

using TransferredEvents = std::vector<std::optional<GuiEvent>>;

// ---------------------------------------------------------------------------
// Naive mapper: the random lower-bound baseline.
//
// Explores the target app from its main activity. Per source event the
// current activity's events are re-shuffled, and each candidate with the
// same action draws a similarity uniformly from [0,1); the first draw
// strictly above the threshold is emitted and exploration advances to that
// event's next activity. Otherwise a null placeholder is appended and the
// current activity stays. A threshold of 1.0 therefore yields all nulls.
// ---------------------------------------------------------------------------

inline TransferredEvents naive_map(const std::vector<GuiEvent>& src_events,
                                   const AppModel& target,
                                   const MapperConfig& cfg) {
  SplitMix64 rng(cfg.seed);
  TransferredEvents trans;
  trans.reserve(src_events.size());
  std::string current = target.main_activity;

  for (const auto& src : src_events) {
    std::vector<AppModelEvent> events = target.events_of(current);
    rng.shuffle(events);
    bool mapped = false;
    for (const auto& candidate : events) {
      if (candidate.event.action != src.action) continue;
      const double similarity = rng.next_unit();
      if (similarity > cfg.threshold) {
        trans.push_back(candidate.event);
        current = candidate.next_activity;
        mapped = true;
        break;
      }
    }
    if (!mapped) trans.push_back(std::nullopt);
  }
  return trans;
}

// ---------------------------------------------------------------------------
// Perfect mapper: the ground-truth upper bound.
//
// Each source event is lifted to its canonical name through the source
// canonical map and lowered back to a target locator through the target map.
// When several target locators carry the name, the lexicographically
// smallest wins; when none does, a null is emitted. The transferred event
// keeps the source action and input, since the canonical maps carry
// locators only.
// ---------------------------------------------------------------------------

inline TransferredEvents perfect_map(const std::vector<GuiEvent>& src_events,
                                     const CanonicalMap& src_can_map,
                                     const CanonicalMap& tgt_can_map) {
  TransferredEvents trans;
  trans.reserve(src_events.size());
  for (const auto& src : src_events) {
    auto canonical = src_can_map.canonical_of(src.locator);
    if (!canonical)
      throw GroundTruthGapError("source event '" + src.locator +
                                "' is not in the canonical map of '" +
                                src_can_map.app_id + "'");
    std::optional<std::string> best;
    for (const auto& [loc, can] : tgt_can_map.entries) {
      if (can == *canonical) {
        best = loc;  // entries iterate in lexicographic order
        break;
      }
    }
    if (best) {
      GuiEvent e;
      e.locator = *best;
      e.action = src.action;
      e.input = src.input;
      trans.push_back(std::move(e));
    } else {
      trans.push_back(std::nullopt);
    }
  }
  return trans;
}

// ---------------------------------------------------------------------------
// Similarity mapper: a deterministic reference for the similarity-based
// family. Candidate events in the current target activity are scored by
// Jaccard similarity of label tokens against the source event's tokens and
// ranked descending, ties broken by lexicographically smaller locator. The
// first action-matching candidate scoring strictly above the threshold is
// emitted; exploration advances only on a match.
// ---------------------------------------------------------------------------

inline double jaccard_similarity(const std::vector<std::string>& a,
                                 const std::vector<std::string>& b) {
  std::set<std::string> sa(a.begin(), a.end());
  std::set<std::string> sb(b.begin(), b.end());
  if (sa.empty() && sb.empty()) return 0.0;
  std::size_t intersection = 0;
  for (const auto& t : sa) intersection += sb.count(t);
  const std::size_t unions = sa.size() + sb.size() - intersection;
  return static_cast<double>(intersection) / static_cast<double>(unions);
}

namespace detail {

// Locates a source event in the source model to obtain its label tokens.
// Activities are scanned in lexicographic order, events in inventory order.
inline const AppModelEvent& find_model_event(const AppModel& model,
                                             const GuiEvent& event) {
  for (const auto& [activity, events] : model.events_by_activity)
    for (const auto& me : events)
      if (me.event.locator == event.locator) return me;
  throw ModelGapError("source event '" + event.locator +
                      "' is not present in the app model of '" + model.app_id +
                      "'");
}

}  // namespace detail

inline TransferredEvents similarity_map(const std::vector<GuiEvent>& src_events,
                                        const AppModel& source,
                                        const AppModel& target,
                                        const MapperConfig& cfg) {
  TransferredEvents trans;
  trans.reserve(src_events.size());
  std::string current = target.main_activity;

  for (const auto& src : src_events) {
    const AppModelEvent& src_model_event = detail::find_model_event(source, src);

    struct Scored {
      double score;
      const AppModelEvent* candidate;
    };
    std::vector<Scored> ranked;
    for (const auto& candidate : target.events_of(current))
      ranked.push_back({jaccard_similarity(src_model_event.label_tokens,
                                           candidate.label_tokens),
                        &candidate});
    std::sort(ranked.begin(), ranked.end(), [](const Scored& a, const Scored& b) {
      if (a.score != b.score) return a.score > b.score;
      return a.candidate->event.locator < b.candidate->event.locator;
    });

    bool mapped = false;
    for (const auto& scored : ranked) {
      if (scored.candidate->event.action != src.action) continue;
      if (scored.score > cfg.threshold) {
        trans.push_back(scored.candidate->event);
        current = scored.candidate->next_activity;
        mapped = true;
      }
      break;  // lower-ranked action matches cannot beat this score
    }
    if (!mapped) trans.push_back(std::nullopt);
  }
  return trans;
}

// ---------------------------------------------------------------------------
// Technique registry
// ---------------------------------------------------------------------------

// Everything a mapper may consult for one transfer.
struct MapperContext {
  const std::vector<GuiEvent>* src_events = nullptr;
  const AppModel* source_model = nullptr;    // similarity
  const AppModel* target_model = nullptr;    // naive, similarity
  const CanonicalMap* src_can_map = nullptr; // perfect
  const CanonicalMap* tgt_can_map = nullptr; // perfect
};

using MapperFn =
    std::function<TransferredEvents(const MapperContext&, const MapperConfig&)>;

namespace detail {

template <typename T>
const T& require_ctx(const T* ptr, const char* what, const std::string& technique) {
  if (!ptr)
    throw PlanError(std::string("technique '") + technique + "' requires " + what);
  return *ptr;
}

}  // namespace detail

// Built-in mappers keyed by the technique name used in plans, the CLI, and
// ResultEntry.technique.
inline const std::map<std::string, MapperFn>& technique_registry() {
  static const std::map<std::string, MapperFn> registry = {
      {"naive",
       [](const MapperContext& ctx, const MapperConfig& cfg) {
         return naive_map(
             detail::require_ctx(ctx.src_events, "source events", "naive"),
             detail::require_ctx(ctx.target_model, "a target app model", "naive"),
             cfg);
       }},
      {"perfect",
       [](const MapperContext& ctx, const MapperConfig&) {
         return perfect_map(
             detail::require_ctx(ctx.src_events, "source events", "perfect"),
             detail::require_ctx(ctx.src_can_map, "a source canonical map", "perfect"),
             detail::require_ctx(ctx.tgt_can_map, "a target canonical map", "perfect"));
       }},
      {"similarity",
       [](const MapperContext& ctx, const MapperConfig& cfg) {
         return similarity_map(
             detail::require_ctx(ctx.src_events, "source events", "similarity"),
             detail::require_ctx(ctx.source_model, "a source app model", "similarity"),
             detail::require_ctx(ctx.target_model, "a target app model", "similarity"),
             cfg);
       }},
  };
  return registry;
}

inline const MapperFn& find_technique(const std::string& name) {
  const auto& registry = technique_registry();
  auto it = registry.find(name);
  if (it == registry.end())
    throw PlanError("unknown technique '" + name + "'");
  return it->second;
}

// Null placeholders dropped; what remains is the transferred test.
inline std::vector<GuiEvent> strip_nulls(const TransferredEvents& trans) {
  std::vector<GuiEvent> events;
  for (const auto& e : trans)
    if (e) events.push_back(*e);
  return events;
}

}  // namespace fruiter
