#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "fruiter/errors.hpp"

namespace fruiter {

// ---------------------------------------------------------------------------
// GUI events
// ---------------------------------------------------------------------------

enum class Action { click, send_keys, long_press, swipe };

inline const char* action_name(Action a) {
  switch (a) {
    case Action::click: return "click";
    case Action::send_keys: return "send_keys";
    case Action::long_press: return "long_press";
    case Action::swipe: return "swipe";
  }
  return "click";
}

inline std::optional<Action> action_from_name(std::string_view name) {
  if (name == "click") return Action::click;
  if (name == "send_keys") return Action::send_keys;
  if (name == "long_press") return Action::long_press;
  if (name == "swipe") return Action::swipe;
  return std::nullopt;
}

// The (locator, action, optional input) triple every sequence is made of.
// The locator is an element ID or XPath treated as an opaque key; equality
// is exact, case-sensitive string equality.
struct GuiEvent {
  std::string locator;
  Action action = Action::click;
  std::optional<std::string> input;  // present only for send_keys

  bool operator==(const GuiEvent&) const = default;
};

// Invariant check; returns one message per violation, empty when valid.
inline std::vector<std::string> check_event(const GuiEvent& e) {
  std::vector<std::string> problems;
  if (e.locator.empty()) problems.push_back("locator is empty");
  if (e.action == Action::send_keys) {
    if (!e.input) problems.push_back("send_keys event has no input");
  } else if (e.input) {
    problems.push_back(std::string("input given for action '") +
                       action_name(e.action) + "'");
  }
  return problems;
}

// ---------------------------------------------------------------------------
// Ground-truth canonical mapping
// ---------------------------------------------------------------------------

// A canonical event is an abstracted event naming a category of semantically
// equivalent app-specific events (e.g. "signin_password"). It is just its
// name; vocabularies are loaded from the corpus, never fixed here.
using CanonicalEvent = std::string;

// Per-app mapping from app-specific event locators to canonical events.
// A function: each locator appears at most once; several locators may share
// one canonical event.
struct CanonicalMap {
  std::string app_id;
  std::map<std::string, CanonicalEvent> entries;  // locator -> canonical name

  std::optional<CanonicalEvent> canonical_of(const std::string& locator) const {
    auto it = entries.find(locator);
    if (it == entries.end()) return std::nullopt;
    return it->second;
  }

  bool range_contains(const CanonicalEvent& canonical) const {
    for (const auto& [loc, can] : entries)
      if (can == canonical) return true;
    return false;
  }

  // Locators carrying `canonical`, in lexicographic order.
  std::vector<std::string> locators_of(const CanonicalEvent& canonical) const {
    std::vector<std::string> out;
    for (const auto& [loc, can] : entries)
      if (can == canonical) out.push_back(loc);
    return out;
  }

  bool operator==(const CanonicalMap&) const = default;
};

// ---------------------------------------------------------------------------
// GUI maps and tests
// ---------------------------------------------------------------------------

// One aligned (source event, transferred event or null) pair. A null entry
// marks a source event the technique failed to map.
struct GuiMapPair {
  GuiEvent src;
  std::optional<GuiEvent> trans;

  bool operator==(const GuiMapPair&) const = default;
};

// A technique's event mapping for one transfer, in source-test order.
struct GuiMap {
  std::string source_app;
  std::string target_app;
  std::string technique;
  std::vector<GuiMapPair> pairs;

  bool operator==(const GuiMap&) const = default;
};

enum class Role { source, transferred, ground_truth };

inline const char* role_name(Role r) {
  switch (r) {
    case Role::source: return "source";
    case Role::transferred: return "transferred";
    case Role::ground_truth: return "ground_truth";
  }
  return "source";
}

inline std::optional<Role> role_from_name(std::string_view name) {
  if (name == "source") return Role::source;
  if (name == "transferred") return Role::transferred;
  if (name == "ground_truth") return Role::ground_truth;
  return std::nullopt;
}

// An ordered GUI event sequence. Only transferred tests may be empty
// (an all-null transfer produces one).
struct TestCase {
  std::string app_id;
  std::string test_id;
  Role role = Role::source;
  std::vector<GuiEvent> events;

  bool operator==(const TestCase&) const = default;
};

// ---------------------------------------------------------------------------
// App models
// ---------------------------------------------------------------------------

struct AppModelEvent {
  GuiEvent event;
  std::string next_activity;
  std::vector<std::string> label_tokens;

  bool operator==(const AppModelEvent&) const = default;
};

// Activity graph plus per-activity event inventory, consumed by
// exploration-based mappers.
struct AppModel {
  std::string app_id;
  std::string main_activity;
  std::set<std::string> activities;
  std::map<std::string, std::vector<AppModelEvent>> events_by_activity;

  const std::vector<AppModelEvent>& events_of(const std::string& activity) const {
    static const std::vector<AppModelEvent> empty;
    auto it = events_by_activity.find(activity);
    return it == events_by_activity.end() ? empty : it->second;
  }

  bool operator==(const AppModel&) const = default;
};

// ---------------------------------------------------------------------------
// Metrics
// ---------------------------------------------------------------------------

// The four classification sets of source events. Pairwise disjoint by
// construction (each source position lands in exactly one set); their
// multiset union covers the source test.
struct FidelitySets {
  std::vector<GuiEvent> correct;    // TP
  std::vector<GuiEvent> incorrect;  // FP
  std::vector<GuiEvent> missed;     // FN
  std::vector<GuiEvent> non_exist;  // TN

  std::size_t total() const {
    return correct.size() + incorrect.size() + missed.size() + non_exist.size();
  }

  // Partition check: sizes sum to |src| and the multiset union equals the
  // source events.
  bool is_partition_of(const std::vector<GuiEvent>& src_events) const;

  bool operator==(const FidelitySets&) const = default;
};

inline bool FidelitySets::is_partition_of(
    const std::vector<GuiEvent>& src_events) const {
  if (total() != src_events.size()) return false;
  auto key = [](const GuiEvent& e) {
    return e.locator + '\x1f' + action_name(e.action) + '\x1f' +
           e.input.value_or("");
  };
  std::map<std::string, long> counts;
  for (const auto& e : src_events) counts[key(e)]++;
  for (const auto* set : {&correct, &incorrect, &missed, &non_exist})
    for (const auto& e : *set) counts[key(e)]--;
  for (const auto& [k, n] : counts)
    if (n != 0) return false;
  return true;
}

// Confusion counts and the three derived ratios. A ratio is absent when its
// denominator is zero; it is never coerced to 0 or 1.
struct FidelityMetrics {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;
  std::optional<double> accuracy;
  std::optional<double> precision;
  std::optional<double> recall;

  bool operator==(const FidelityMetrics&) const = default;
};

// effort = event-level Levenshtein distance to the ground truth;
// reduction = (gt_length - effort) / gt_length, possibly negative.
struct UtilityMetrics {
  std::size_t effort = 0;
  double reduction = 0.0;
  std::size_t gt_length = 0;

  bool operator==(const UtilityMetrics&) const = default;
};

// ---------------------------------------------------------------------------
// Result entries
// ---------------------------------------------------------------------------

// One transfer's full record.
struct ResultEntry {
  std::string source_app;
  std::string target_app;
  std::string test_id;
  std::string technique;
  std::vector<GuiEvent> source_events;
  std::vector<GuiEvent> transferred_events;  // null events stripped
  std::vector<GuiEvent> gt_events;
  FidelitySets fidelity_sets;
  FidelityMetrics fidelity_metrics;
  UtilityMetrics utility_metrics;

  bool operator==(const ResultEntry&) const = default;
};

// ---------------------------------------------------------------------------
// Corpus
// ---------------------------------------------------------------------------

// A GuiMap as stored on disk: one file per transferred test.
struct StoredGuiMap {
  std::string test_id;
  GuiMap map;

  bool operator==(const StoredGuiMap&) const = default;
};

// Everything loadable from a corpus directory. Corpus tests are stored under
// role=source; the harness rebinds them as ground truths when their app is a
// transfer target.
struct Corpus {
  std::map<std::string, AppModel> apps;
  std::map<std::string, std::map<std::string, TestCase>> tests;  // app -> id -> test
  std::map<std::string, CanonicalMap> canonical;                 // app -> map
  std::map<std::string, std::vector<StoredGuiMap>> gui_maps;     // technique -> maps

  const TestCase* find_test(const std::string& app_id,
                            const std::string& test_id) const {
    auto ait = tests.find(app_id);
    if (ait == tests.end()) return nullptr;
    auto tit = ait->second.find(test_id);
    return tit == ait->second.end() ? nullptr : &tit->second;
  }

  bool operator==(const Corpus&) const = default;
};

struct Violation {
  std::string code;
  std::string message;

  bool operator==(const Violation&) const = default;
};

using ValidationReport = std::vector<Violation>;

// Cross-checks every corpus invariant. Empty report iff well-formed.
inline ValidationReport validate_corpus(const Corpus& corpus) {
  ValidationReport report;
  auto add = [&report](const std::string& code, const std::string& msg) {
    report.push_back({code, msg});
  };

  for (const auto& [app_id, model] : corpus.apps) {
    if (model.app_id != app_id)
      add("app-id-mismatch", "model keyed '" + app_id + "' declares app_id '" +
                                 model.app_id + "'");
    if (!model.activities.count(model.main_activity))
      add("dangling-activity", "app '" + app_id + "': main_activity '" +
                                   model.main_activity +
                                   "' is not a declared activity");
    for (const auto& [activity, events] : model.events_by_activity) {
      if (!model.activities.count(activity))
        add("dangling-activity", "app '" + app_id + "': events listed under '" +
                                     activity +
                                     "', which is not a declared activity");
      std::set<std::string> seen;
      for (const auto& me : events) {
        if (!model.activities.count(me.next_activity))
          add("dangling-activity",
              "app '" + app_id + "': event '" + me.event.locator +
                  "' transitions to unknown activity '" + me.next_activity + "'");
        if (!seen.insert(me.event.locator).second)
          add("duplicate-locator", "app '" + app_id + "': locator '" +
                                       me.event.locator +
                                       "' appears twice in activity '" +
                                       activity + "'");
        for (const auto& p : check_event(me.event))
          add("invalid-event", "app '" + app_id + "', activity '" + activity +
                                   "', event '" + me.event.locator + "': " + p);
      }
    }
  }

  for (const auto& [app_id, by_test] : corpus.tests) {
    if (!corpus.apps.count(app_id))
      add("unknown-app", "tests present for app '" + app_id +
                             "', which has no app model");
    for (const auto& [test_id, tc] : by_test) {
      if (tc.app_id != app_id || tc.test_id != test_id)
        add("test-id-mismatch", "test keyed '" + app_id + "/" + test_id +
                                    "' declares '" + tc.app_id + "/" +
                                    tc.test_id + "'");
      if (tc.role != Role::source)
        add("unexpected-role", "corpus test '" + app_id + "/" + test_id +
                                   "' has role '" + role_name(tc.role) +
                                   "'; corpus tests must be sources");
      if (tc.events.empty() && tc.role != Role::transferred)
        add("empty-test", "test '" + app_id + "/" + test_id +
                              "' has no events");
      for (const auto& e : tc.events)
        for (const auto& p : check_event(e))
          add("invalid-event",
              "test '" + app_id + "/" + test_id + "', event '" + e.locator +
                  "': " + p);
    }
  }

  for (const auto& [app_id, cmap] : corpus.canonical) {
    if (!corpus.apps.count(app_id))
      add("unknown-app", "canonical map present for app '" + app_id +
                             "', which has no app model");
    for (const auto& [loc, can] : cmap.entries) {
      if (loc.empty())
        add("invalid-locator", "canonical map of '" + app_id +
                                   "' contains an empty locator");
      if (can.empty())
        add("invalid-canonical", "canonical map of '" + app_id +
                                     "': locator '" + loc +
                                     "' maps to an empty canonical name");
    }
  }

  for (const auto& [technique, maps] : corpus.gui_maps) {
    for (const auto& stored : maps) {
      const GuiMap& gm = stored.map;
      if (!corpus.apps.count(gm.source_app))
        add("unknown-app", "gui map (" + technique + ") references unknown source app '" +
                               gm.source_app + "'");
      if (!corpus.apps.count(gm.target_app))
        add("unknown-app", "gui map (" + technique + ") references unknown target app '" +
                               gm.target_app + "'");
      for (const auto& pair : gm.pairs) {
        for (const auto& p : check_event(pair.src))
          add("invalid-event", "gui map (" + technique + ") source event '" +
                                   pair.src.locator + "': " + p);
        if (pair.trans)
          for (const auto& p : check_event(*pair.trans))
            add("invalid-event", "gui map (" + technique +
                                     ") transferred event '" +
                                     pair.trans->locator + "': " + p);
      }
    }
  }

  return report;
}

}  // namespace fruiter
