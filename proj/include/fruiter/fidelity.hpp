#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fruiter/core.hpp"
#include "fruiter/errors.hpp"

namespace fruiter {

// Classifies each source event against the ground-truth canonical maps.
//
// Non-null transfer: correct iff the transferred event's canonical name in
// the target map equals the source event's canonical name in the source map,
// else incorrect. Null transfer: missed iff the source canonical name occurs
// anywhere in the target map's range, else non-exist. Classification is
// positional, so a locator occurring twice in one test is judged per
// occurrence. Ancillary events have no source pre-image and never enter.
inline FidelitySets evaluate_fidelity(const std::vector<GuiEvent>& src_events,
                                      const GuiMap& gui_map,
                                      const CanonicalMap& src_can_map,
                                      const CanonicalMap& tgt_can_map) {
  if (gui_map.pairs.size() != src_events.size())
    throw AlignmentError("gui map has " + std::to_string(gui_map.pairs.size()) +
                         " pairs for " + std::to_string(src_events.size()) +
                         " source events");
  for (std::size_t i = 0; i < src_events.size(); ++i)
    if (gui_map.pairs[i].src.locator != src_events[i].locator)
      throw AlignmentError("gui map pair " + std::to_string(i) +
                           " is for locator '" + gui_map.pairs[i].src.locator +
                           "', expected '" + src_events[i].locator + "'");

  FidelitySets sets;
  for (std::size_t i = 0; i < src_events.size(); ++i) {
    const GuiEvent& src = src_events[i];
    const auto& trans = gui_map.pairs[i].trans;

    auto src_can = src_can_map.canonical_of(src.locator);
    if (!src_can)
      throw GroundTruthGapError("source event '" + src.locator +
                                "' is not in the canonical map of '" +
                                src_can_map.app_id + "'");

    if (trans) {
      auto trans_can = tgt_can_map.canonical_of(trans->locator);
      if (!trans_can)
        throw GroundTruthGapError("transferred event '" + trans->locator +
                                  "' is not in the canonical map of '" +
                                  tgt_can_map.app_id + "'");
      if (*trans_can == *src_can)
        sets.correct.push_back(src);
      else
        sets.incorrect.push_back(src);
    } else {
      if (tgt_can_map.range_contains(*src_can))
        sets.missed.push_back(src);
      else
        sets.non_exist.push_back(src);
    }
  }
  return sets;
}

// Correct/Incorrect/NonExist/Missed map to TP/FP/TN/FN. Ratios with a zero
// denominator stay undefined; aggregates skip them.
inline FidelityMetrics compute_fidelity_metrics(const FidelitySets& sets) {
  FidelityMetrics m;
  m.tp = sets.correct.size();
  m.fp = sets.incorrect.size();
  m.tn = sets.non_exist.size();
  m.fn = sets.missed.size();
  const std::size_t all = m.tp + m.fp + m.tn + m.fn;
  if (all > 0)
    m.accuracy = static_cast<double>(m.tp + m.tn) / static_cast<double>(all);
  if (m.tp + m.fp > 0)
    m.precision = static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fp);
  if (m.tp + m.fn > 0)
    m.recall = static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fn);
  return m;
}

// Pairs a source sequence with an aligned transferred sequence (nulls mark
// unmapped events), preserving position.
inline GuiMap derive_gui_map(const std::vector<GuiEvent>& src_events,
                             const std::vector<std::optional<GuiEvent>>& trans_events,
                             const std::string& source_app,
                             const std::string& target_app,
                             const std::string& technique) {
  if (src_events.size() != trans_events.size())
    throw AlignmentError("cannot align " + std::to_string(src_events.size()) +
                         " source events with " +
                         std::to_string(trans_events.size()) +
                         " transferred events");
  GuiMap gm;
  gm.source_app = source_app;
  gm.target_app = target_app;
  gm.technique = technique;
  gm.pairs.reserve(src_events.size());
  for (std::size_t i = 0; i < src_events.size(); ++i)
    gm.pairs.push_back({src_events[i], trans_events[i]});
  return gm;
}

}  // namespace fruiter
