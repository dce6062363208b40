#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "fruiter/core.hpp"
#include "fruiter/errors.hpp"
#include "fruiter/script.hpp"

namespace fruiter {

// Insertion-ordered JSON keeps files readable and byte-stable.
using json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// File helpers
// ---------------------------------------------------------------------------

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("error while reading '" + path.string() + "'");
  return buf.str();
}

inline void write_text_file(const std::filesystem::path& path,
                            const std::string& contents) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec)
      throw IoError("cannot create directory '" + path.parent_path().string() +
                    "': " + ec.message());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << contents;
  if (!out) throw IoError("error while writing '" + path.string() + "'");
}

inline json load_json_file(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  try {
    return json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }
}

inline void write_json_file(const std::filesystem::path& path, const json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// Field access with diagnostics
// ---------------------------------------------------------------------------

namespace jio {

inline const json& require(const json& j, const char* field,
                           const std::string& ctx) {
  if (!j.is_object())
    throw SchemaError(ctx + ": expected an object");
  auto it = j.find(field);
  if (it == j.end())
    throw SchemaError(ctx + "." + field + ": missing required field");
  return *it;
}

inline std::string require_string(const json& j, const char* field,
                                  const std::string& ctx) {
  const json& v = require(j, field, ctx);
  if (!v.is_string())
    throw SchemaError(ctx + "." + field + ": expected a string");
  return v.get<std::string>();
}

inline const json& require_array(const json& j, const char* field,
                                 const std::string& ctx) {
  const json& v = require(j, field, ctx);
  if (!v.is_array())
    throw SchemaError(ctx + "." + field + ": expected an array");
  return v;
}

inline const json& require_object(const json& j, const char* field,
                                  const std::string& ctx) {
  const json& v = require(j, field, ctx);
  if (!v.is_object())
    throw SchemaError(ctx + "." + field + ": expected an object");
  return v;
}

}  // namespace jio

// ---------------------------------------------------------------------------
// GuiEvent
// ---------------------------------------------------------------------------

inline json event_to_json(const GuiEvent& e) {
  json j;
  j["locator"] = e.locator;
  j["action"] = action_name(e.action);
  if (e.input) j["input"] = *e.input;
  return j;
}

inline GuiEvent event_from_json(const json& j, const std::string& ctx) {
  GuiEvent e;
  e.locator = jio::require_string(j, "locator", ctx);
  const std::string action = jio::require_string(j, "action", ctx);
  auto parsed = action_from_name(action);
  if (!parsed)
    throw SchemaError(ctx + ".action: unknown action '" + action + "'");
  e.action = *parsed;
  if (j.contains("input") && !j["input"].is_null()) {
    if (!j["input"].is_string())
      throw SchemaError(ctx + ".input: expected a string");
    e.input = j["input"].get<std::string>();
  }
  for (const auto& problem : check_event(e))
    throw SchemaError(ctx + ": " + problem);
  return e;
}

inline json events_to_json(const std::vector<GuiEvent>& events) {
  json arr = json::array();
  for (const auto& e : events) arr.push_back(event_to_json(e));
  return arr;
}

inline std::vector<GuiEvent> events_from_json(const json& arr,
                                              const std::string& ctx) {
  if (!arr.is_array()) throw SchemaError(ctx + ": expected an array");
  std::vector<GuiEvent> events;
  for (std::size_t i = 0; i < arr.size(); ++i)
    events.push_back(
        event_from_json(arr[i], ctx + "[" + std::to_string(i) + "]"));
  return events;
}

// ---------------------------------------------------------------------------
// TestCase  (tests/<app_id>/<test_id>.events.json)
// ---------------------------------------------------------------------------

inline json test_case_to_json(const TestCase& tc) {
  json j;
  j["app_id"] = tc.app_id;
  j["test_id"] = tc.test_id;
  j["role"] = role_name(tc.role);
  j["events"] = events_to_json(tc.events);
  return j;
}

inline TestCase test_case_from_json(const json& j, const std::string& ctx) {
  TestCase tc;
  tc.app_id = jio::require_string(j, "app_id", ctx);
  tc.test_id = jio::require_string(j, "test_id", ctx);
  const std::string role = jio::require_string(j, "role", ctx);
  auto parsed = role_from_name(role);
  if (!parsed) throw SchemaError(ctx + ".role: unknown role '" + role + "'");
  tc.role = *parsed;
  tc.events = events_from_json(jio::require_array(j, "events", ctx),
                               ctx + ".events");
  if (tc.events.empty() && tc.role != Role::transferred)
    throw SchemaError(ctx + ".events: must be non-empty for role '" + role +
                      "'");
  return tc;
}

// Loads one events file, validating every schema rule.
inline TestCase ingest_events_json(const std::filesystem::path& path) {
  return test_case_from_json(load_json_file(path), path.string());
}

// ---------------------------------------------------------------------------
// CanonicalMap  (canonical/<app_id>.canmap.json)
// ---------------------------------------------------------------------------

inline json canonical_map_to_json(const CanonicalMap& m) {
  json j;
  j["app_id"] = m.app_id;
  json entries = json::object();
  for (const auto& [loc, can] : m.entries) entries[loc] = can;
  j["entries"] = entries;
  return j;
}

inline CanonicalMap canonical_map_from_json(const json& j,
                                            const std::string& ctx) {
  CanonicalMap m;
  m.app_id = jio::require_string(j, "app_id", ctx);
  const json& entries = jio::require_object(j, "entries", ctx);
  for (const auto& [loc, can] : entries.items()) {
    if (!can.is_string())
      throw SchemaError(ctx + ".entries['" + loc + "']: expected a string");
    m.entries[loc] = can.get<std::string>();
  }
  return m;
}

// ---------------------------------------------------------------------------
// GuiMap  (guimaps/<technique>/<src>__<tgt>__<test_id>.guimap.json)
// ---------------------------------------------------------------------------

inline json gui_map_to_json(const GuiMap& gm) {
  json j;
  j["source_app"] = gm.source_app;
  j["target_app"] = gm.target_app;
  j["technique"] = gm.technique;
  json pairs = json::array();
  for (const auto& p : gm.pairs) {
    json pj;
    pj["src"] = event_to_json(p.src);
    pj["trans"] = p.trans ? event_to_json(*p.trans) : json(nullptr);
    pairs.push_back(pj);
  }
  j["pairs"] = pairs;
  return j;
}

inline GuiMap gui_map_from_json(const json& j, const std::string& ctx) {
  GuiMap gm;
  gm.source_app = jio::require_string(j, "source_app", ctx);
  gm.target_app = jio::require_string(j, "target_app", ctx);
  gm.technique = jio::require_string(j, "technique", ctx);
  const json& pairs = jio::require_array(j, "pairs", ctx);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const std::string pctx = ctx + ".pairs[" + std::to_string(i) + "]";
    const json& pj = pairs[i];
    GuiMapPair pair;
    pair.src = event_from_json(jio::require(pj, "src", pctx), pctx + ".src");
    const json& trans = jio::require(pj, "trans", pctx);
    if (!trans.is_null())
      pair.trans = event_from_json(trans, pctx + ".trans");
    gm.pairs.push_back(std::move(pair));
  }
  return gm;
}

// ---------------------------------------------------------------------------
// AppModel  (apps/<app_id>.model.json)
// ---------------------------------------------------------------------------

inline json app_model_to_json(const AppModel& m) {
  json j;
  j["app_id"] = m.app_id;
  j["main_activity"] = m.main_activity;
  json acts = json::array();
  for (const auto& a : m.activities) acts.push_back(a);
  j["activities"] = acts;
  json by_act = json::object();
  for (const auto& [activity, events] : m.events_by_activity) {
    json arr = json::array();
    for (const auto& me : events) {
      json ej;
      ej["event"] = event_to_json(me.event);
      ej["next_activity"] = me.next_activity;
      ej["label_tokens"] = me.label_tokens;
      arr.push_back(ej);
    }
    by_act[activity] = arr;
  }
  j["events_by_activity"] = by_act;
  return j;
}

inline AppModel app_model_from_json(const json& j, const std::string& ctx) {
  AppModel m;
  m.app_id = jio::require_string(j, "app_id", ctx);
  m.main_activity = jio::require_string(j, "main_activity", ctx);
  for (const auto& a : jio::require_array(j, "activities", ctx)) {
    if (!a.is_string())
      throw SchemaError(ctx + ".activities: expected strings");
    m.activities.insert(a.get<std::string>());
  }
  const json& by_act = jio::require_object(j, "events_by_activity", ctx);
  for (const auto& [activity, arr] : by_act.items()) {
    const std::string actx = ctx + ".events_by_activity['" + activity + "']";
    if (!arr.is_array()) throw SchemaError(actx + ": expected an array");
    std::vector<AppModelEvent> events;
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string ectx = actx + "[" + std::to_string(i) + "]";
      const json& ej = arr[i];
      AppModelEvent me;
      me.event = event_from_json(jio::require(ej, "event", ectx), ectx + ".event");
      me.next_activity = jio::require_string(ej, "next_activity", ectx);
      const json& toks = jio::require_array(ej, "label_tokens", ectx);
      for (const auto& t : toks) {
        if (!t.is_string())
          throw SchemaError(ectx + ".label_tokens: expected strings");
        me.label_tokens.push_back(t.get<std::string>());
      }
      events.push_back(std::move(me));
    }
    m.events_by_activity[activity] = std::move(events);
  }
  return m;
}

// ---------------------------------------------------------------------------
// Fidelity / utility records
// ---------------------------------------------------------------------------

inline json fidelity_sets_to_json(const FidelitySets& s) {
  json j;
  j["correct"] = events_to_json(s.correct);
  j["incorrect"] = events_to_json(s.incorrect);
  j["missed"] = events_to_json(s.missed);
  j["non_exist"] = events_to_json(s.non_exist);
  return j;
}

inline FidelitySets fidelity_sets_from_json(const json& j,
                                            const std::string& ctx) {
  FidelitySets s;
  s.correct = events_from_json(jio::require_array(j, "correct", ctx), ctx + ".correct");
  s.incorrect = events_from_json(jio::require_array(j, "incorrect", ctx), ctx + ".incorrect");
  s.missed = events_from_json(jio::require_array(j, "missed", ctx), ctx + ".missed");
  s.non_exist = events_from_json(jio::require_array(j, "non_exist", ctx), ctx + ".non_exist");
  return s;
}

inline json fidelity_metrics_to_json(const FidelityMetrics& m) {
  json j;
  j["tp"] = m.tp;
  j["fp"] = m.fp;
  j["tn"] = m.tn;
  j["fn"] = m.fn;
  j["accuracy"] = m.accuracy ? json(*m.accuracy) : json(nullptr);
  j["precision"] = m.precision ? json(*m.precision) : json(nullptr);
  j["recall"] = m.recall ? json(*m.recall) : json(nullptr);
  return j;
}

inline FidelityMetrics fidelity_metrics_from_json(const json& j,
                                                  const std::string& ctx) {
  FidelityMetrics m;
  auto count = [&](const char* f) -> std::size_t {
    const json& v = jio::require(j, f, ctx);
    if (!v.is_number_unsigned())
      throw SchemaError(ctx + "." + f + ": expected a non-negative integer");
    return v.get<std::size_t>();
  };
  m.tp = count("tp");
  m.fp = count("fp");
  m.tn = count("tn");
  m.fn = count("fn");
  auto ratio = [&](const char* f) -> std::optional<double> {
    const json& v = jio::require(j, f, ctx);
    if (v.is_null()) return std::nullopt;
    if (!v.is_number())
      throw SchemaError(ctx + "." + f + ": expected a number or null");
    return v.get<double>();
  };
  m.accuracy = ratio("accuracy");
  m.precision = ratio("precision");
  m.recall = ratio("recall");
  return m;
}

inline json utility_metrics_to_json(const UtilityMetrics& m) {
  json j;
  j["effort"] = m.effort;
  j["reduction"] = m.reduction;
  j["gt_length"] = m.gt_length;
  return j;
}

inline UtilityMetrics utility_metrics_from_json(const json& j,
                                                const std::string& ctx) {
  UtilityMetrics m;
  const json& effort = jio::require(j, "effort", ctx);
  if (!effort.is_number_unsigned())
    throw SchemaError(ctx + ".effort: expected a non-negative integer");
  m.effort = effort.get<std::size_t>();
  const json& reduction = jio::require(j, "reduction", ctx);
  if (!reduction.is_number())
    throw SchemaError(ctx + ".reduction: expected a number");
  m.reduction = reduction.get<double>();
  const json& gt = jio::require(j, "gt_length", ctx);
  if (!gt.is_number_unsigned() || gt.get<std::size_t>() == 0)
    throw SchemaError(ctx + ".gt_length: expected a positive integer");
  m.gt_length = gt.get<std::size_t>();
  return m;
}

inline json result_entry_to_json(const ResultEntry& e) {
  json j;
  j["source_app"] = e.source_app;
  j["target_app"] = e.target_app;
  j["test_id"] = e.test_id;
  j["technique"] = e.technique;
  j["source_events"] = events_to_json(e.source_events);
  j["transferred_events"] = events_to_json(e.transferred_events);
  j["gt_events"] = events_to_json(e.gt_events);
  j["fidelity_sets"] = fidelity_sets_to_json(e.fidelity_sets);
  j["fidelity_metrics"] = fidelity_metrics_to_json(e.fidelity_metrics);
  j["utility_metrics"] = utility_metrics_to_json(e.utility_metrics);
  return j;
}

inline ResultEntry result_entry_from_json(const json& j,
                                          const std::string& ctx) {
  ResultEntry e;
  e.source_app = jio::require_string(j, "source_app", ctx);
  e.target_app = jio::require_string(j, "target_app", ctx);
  e.test_id = jio::require_string(j, "test_id", ctx);
  e.technique = jio::require_string(j, "technique", ctx);
  e.source_events = events_from_json(jio::require_array(j, "source_events", ctx),
                                     ctx + ".source_events");
  e.transferred_events =
      events_from_json(jio::require_array(j, "transferred_events", ctx),
                       ctx + ".transferred_events");
  e.gt_events = events_from_json(jio::require_array(j, "gt_events", ctx),
                                 ctx + ".gt_events");
  e.fidelity_sets = fidelity_sets_from_json(
      jio::require_object(j, "fidelity_sets", ctx), ctx + ".fidelity_sets");
  e.fidelity_metrics = fidelity_metrics_from_json(
      jio::require_object(j, "fidelity_metrics", ctx), ctx + ".fidelity_metrics");
  e.utility_metrics = utility_metrics_from_json(
      jio::require_object(j, "utility_metrics", ctx), ctx + ".utility_metrics");
  return e;
}

// ---------------------------------------------------------------------------
// ApiSignatureTable
// ---------------------------------------------------------------------------

inline json signature_table_to_json(const ApiSignatureTable& t) {
  json j;
  json finders = json::object();
  for (const auto& [name, kind] : t.finder_apis)
    finders[name] = locator_kind_name(kind);
  j["finder_apis"] = finders;
  json actions = json::object();
  for (const auto& [name, action] : t.action_apis)
    actions[name] = action_name(action);
  j["action_apis"] = actions;
  json bearing = json::array();
  for (const auto& name : t.input_bearing) bearing.push_back(name);
  j["input_bearing"] = bearing;
  return j;
}

inline ApiSignatureTable signature_table_from_json(const json& j,
                                                   const std::string& ctx) {
  ApiSignatureTable t;
  for (const auto& [name, kind] : jio::require_object(j, "finder_apis", ctx).items()) {
    if (!kind.is_string())
      throw SchemaError(ctx + ".finder_apis['" + name + "']: expected a string");
    auto parsed = locator_kind_from_name(kind.get<std::string>());
    if (!parsed)
      throw SchemaError(ctx + ".finder_apis['" + name + "']: unknown locator kind '" +
                        kind.get<std::string>() + "'");
    t.finder_apis[name] = *parsed;
  }
  for (const auto& [name, action] : jio::require_object(j, "action_apis", ctx).items()) {
    if (!action.is_string())
      throw SchemaError(ctx + ".action_apis['" + name + "']: expected a string");
    auto parsed = action_from_name(action.get<std::string>());
    if (!parsed)
      throw SchemaError(ctx + ".action_apis['" + name + "']: unknown action '" +
                        action.get<std::string>() + "'");
    t.action_apis[name] = *parsed;
  }
  for (const auto& name : jio::require_array(j, "input_bearing", ctx)) {
    if (!name.is_string())
      throw SchemaError(ctx + ".input_bearing: expected strings");
    t.input_bearing.insert(name.get<std::string>());
  }
  for (const auto& problem : t.check())
    throw SchemaError(ctx + ": " + problem);
  return t;
}

inline ApiSignatureTable load_signature_table(const std::filesystem::path& path) {
  return signature_table_from_json(load_json_file(path), path.string());
}

// ---------------------------------------------------------------------------
// Corpus directory
//
//   apps/<app_id>.model.json
//   tests/<app_id>/<test_id>.script         (mini-language)
//   tests/<app_id>/<test_id>.events.json    (uniform representation)
//   canonical/<app_id>.canmap.json
//   guimaps/<technique>/<src>__<tgt>__<test_id>.guimap.json   (optional)
// ---------------------------------------------------------------------------

inline Corpus load_corpus(const std::filesystem::path& dir,
                          const ApiSignatureTable& table = default_signature_table()) {
  namespace fs = std::filesystem;
  if (!fs::exists(dir)) throw IoError("corpus directory '" + dir.string() + "' does not exist");
  Corpus corpus;

  const fs::path apps_dir = dir / "apps";
  if (fs::exists(apps_dir)) {
    for (const auto& entry : fs::directory_iterator(apps_dir)) {
      const fs::path& p = entry.path();
      if (p.extension() != ".json") continue;
      AppModel model = app_model_from_json(load_json_file(p), p.string());
      const std::string stem = p.stem().stem().string();  // strip .model.json
      if (model.app_id != stem)
        throw SchemaError(p.string() + ": app_id '" + model.app_id +
                          "' does not match file name");
      corpus.apps[model.app_id] = std::move(model);
    }
  }

  const fs::path canon_dir = dir / "canonical";
  if (fs::exists(canon_dir)) {
    for (const auto& entry : fs::directory_iterator(canon_dir)) {
      const fs::path& p = entry.path();
      if (p.extension() != ".json") continue;
      CanonicalMap m = canonical_map_from_json(load_json_file(p), p.string());
      if (m.app_id != p.stem().stem().string())
        throw SchemaError(p.string() + ": app_id '" + m.app_id +
                          "' does not match file name");
      corpus.canonical[m.app_id] = std::move(m);
    }
  }

  const fs::path tests_dir = dir / "tests";
  if (fs::exists(tests_dir)) {
    for (const auto& app_entry : fs::directory_iterator(tests_dir)) {
      if (!app_entry.is_directory()) continue;
      const std::string app_id = app_entry.path().filename().string();
      for (const auto& entry : fs::directory_iterator(app_entry.path())) {
        const fs::path& p = entry.path();
        TestCase tc;
        if (p.extension() == ".script") {
          tc.app_id = app_id;
          tc.test_id = p.stem().string();
          tc.role = Role::source;
          try {
            tc.events = extract_events_from_source(read_text_file(p), table);
          } catch (const ParseError& e) {
            throw SchemaError(p.string() + ": " + e.what());
          } catch (const ExtractError& e) {
            throw SchemaError(p.string() + ": " + e.what());
          }
        } else if (p.extension() == ".json") {
          tc = ingest_events_json(p);
          const std::string stem = p.stem().stem().string();  // strip .events.json
          if (tc.app_id != app_id)
            throw SchemaError(p.string() + ": app_id '" + tc.app_id +
                              "' does not match directory name");
          if (tc.test_id != stem)
            throw SchemaError(p.string() + ": test_id '" + tc.test_id +
                              "' does not match file name");
        } else {
          continue;
        }
        auto [it, inserted] = corpus.tests[app_id].emplace(tc.test_id, tc);
        if (!inserted)
          throw SchemaError(p.string() + ": duplicate test '" + app_id + "/" +
                            tc.test_id + "'");
      }
    }
  }

  const fs::path maps_dir = dir / "guimaps";
  if (fs::exists(maps_dir)) {
    for (const auto& tech_entry : fs::directory_iterator(maps_dir)) {
      if (!tech_entry.is_directory()) continue;
      const std::string technique = tech_entry.path().filename().string();
      std::vector<fs::path> files;
      for (const auto& entry : fs::directory_iterator(tech_entry.path()))
        if (entry.path().extension() == ".json") files.push_back(entry.path());
      std::sort(files.begin(), files.end());
      for (const auto& p : files) {
        GuiMap gm = gui_map_from_json(load_json_file(p), p.string());
        if (gm.technique != technique)
          throw SchemaError(p.string() + ": technique '" + gm.technique +
                            "' does not match directory name");
        // <src>__<tgt>__<test_id>.guimap.json
        const std::string stem = p.stem().stem().string();
        const std::string prefix = gm.source_app + "__" + gm.target_app + "__";
        if (stem.rfind(prefix, 0) != 0)
          throw SchemaError(p.string() +
                            ": file name does not match source/target apps");
        corpus.gui_maps[technique].push_back(
            {stem.substr(prefix.size()), std::move(gm)});
      }
    }
  }

  return corpus;
}

// Writes a corpus in the directory layout above. Tests are written in the
// uniform events.json form.
inline void save_corpus(const Corpus& corpus, const std::filesystem::path& dir) {
  for (const auto& [app_id, model] : corpus.apps)
    write_json_file(dir / "apps" / (app_id + ".model.json"),
                    app_model_to_json(model));
  for (const auto& [app_id, cmap] : corpus.canonical)
    write_json_file(dir / "canonical" / (app_id + ".canmap.json"),
                    canonical_map_to_json(cmap));
  for (const auto& [app_id, by_test] : corpus.tests)
    for (const auto& [test_id, tc] : by_test)
      write_json_file(dir / "tests" / app_id / (test_id + ".events.json"),
                      test_case_to_json(tc));
  for (const auto& [technique, maps] : corpus.gui_maps)
    for (const auto& stored : maps)
      write_json_file(dir / "guimaps" / technique /
                          (stored.map.source_app + "__" + stored.map.target_app +
                           "__" + stored.test_id + ".guimap.json"),
                      gui_map_to_json(stored.map));
}

}  // namespace fruiter
