#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "fruiter/core.hpp"
#include "fruiter/errors.hpp"
#include "fruiter/fidelity.hpp"
#include "fruiter/json_io.hpp"
#include "fruiter/mappers.hpp"
#include "fruiter/rng.hpp"
#include "fruiter/utility.hpp"

namespace fruiter {

// ---------------------------------------------------------------------------
// Plans
// ---------------------------------------------------------------------------

struct PlanCategory {
  std::string name;
  std::vector<std::string> app_ids;

  bool operator==(const PlanCategory&) const = default;
};

struct BenchmarkPlan {
  std::vector<PlanCategory> categories;
  std::vector<MapperConfig> techniques;
  bool include_self_pairs = true;
};

// One planned transfer.
struct TransferTask {
  std::string category;
  std::string source_app;
  std::string target_app;
  std::string test_id;
  std::string technique;
};

// Expands the plan into the full source x target x test x technique
// cross-product. Transfers stay within a category; ordered pairs, self pairs
// included when configured. Order: category (plan order), source, target
// (listed order), test (lexicographic), technique (plan order).
inline std::vector<TransferTask> plan_transfers(const BenchmarkPlan& plan,
                                                const Corpus& corpus) {
  if (plan.techniques.empty())
    throw PlanError("plan lists no techniques");
  std::set<std::string> technique_names;
  for (const auto& cfg : plan.techniques) {
    find_technique(cfg.technique);  // throws PlanError when unknown
    if (!technique_names.insert(cfg.technique).second)
      throw PlanError("technique '" + cfg.technique + "' listed twice");
  }

  std::vector<TransferTask> tasks;
  for (const auto& category : plan.categories) {
    std::set<std::string> seen;
    for (const auto& app : category.app_ids) {
      if (!seen.insert(app).second)
        throw PlanError("category '" + category.name + "' lists app '" + app +
                        "' twice");
      if (!corpus.apps.count(app))
        throw PlanError("category '" + category.name +
                        "' references unknown app '" + app + "'");
    }
    for (const auto& source : category.app_ids) {
      for (const auto& target : category.app_ids) {
        if (source == target && !plan.include_self_pairs) continue;
        auto tests_it = corpus.tests.find(source);
        if (tests_it == corpus.tests.end()) continue;
        for (const auto& [test_id, tc] : tests_it->second)
          for (const auto& cfg : plan.techniques)
            tasks.push_back(
                {category.name, source, target, test_id, cfg.technique});
      }
    }
  }
  return tasks;
}

// ---------------------------------------------------------------------------
// Benchmark run
// ---------------------------------------------------------------------------

struct SkippedTransfer {
  TransferTask task;
  std::string reason_code;  // e.g. missing-ground-truth, ground-truth-gap
  std::string detail;
};

struct RunOptions {
  EqualityMode equality = EqualityMode::lenient;
  int workers = 1;
};

struct RunResult {
  std::vector<ResultEntry> entries;        // plan order
  std::vector<SkippedTransfer> skipped;    // plan order
  std::size_t planned = 0;
};

// Per-transfer seed so that the naive baseline does not replay one draw
// sequence across every transfer. Pure function of the configured seed and
// the transfer coordinates.
inline std::uint64_t derive_transfer_seed(std::uint64_t base,
                                          const TransferTask& task) {
  const std::string key =
      task.source_app + '\x1f' + task.target_app + '\x1f' + task.test_id;
  return fnv1a64(key, base ^ 0x9E3779B97F4A7C15ULL);
}

namespace detail {

struct TaskOutcome {
  std::optional<ResultEntry> entry;
  std::optional<SkippedTransfer> skipped;
};

inline TaskOutcome run_one_transfer(const TransferTask& task,
                                    const Corpus& corpus,
                                    const MapperConfig& cfg,
                                    const RunOptions& options) {
  auto skip = [&task](std::string code, std::string detail) {
    TaskOutcome out;
    out.skipped = SkippedTransfer{task, std::move(code), std::move(detail)};
    return out;
  };

  const TestCase* source_test = corpus.find_test(task.source_app, task.test_id);
  if (!source_test)
    return skip("missing-source-test", "source app has no test '" + task.test_id + "'");
  const TestCase* gt_test = corpus.find_test(task.target_app, task.test_id);
  if (!gt_test)
    return skip("missing-ground-truth",
                "target app has no test '" + task.test_id + "'");

  MapperContext ctx;
  ctx.src_events = &source_test->events;
  auto src_model = corpus.apps.find(task.source_app);
  auto tgt_model = corpus.apps.find(task.target_app);
  if (src_model != corpus.apps.end()) ctx.source_model = &src_model->second;
  if (tgt_model != corpus.apps.end()) ctx.target_model = &tgt_model->second;
  auto src_can = corpus.canonical.find(task.source_app);
  auto tgt_can = corpus.canonical.find(task.target_app);
  if (src_can == corpus.canonical.end())
    return skip("missing-canonical-map",
                "no canonical map for app '" + task.source_app + "'");
  if (tgt_can == corpus.canonical.end())
    return skip("missing-canonical-map",
                "no canonical map for app '" + task.target_app + "'");
  ctx.src_can_map = &src_can->second;
  ctx.tgt_can_map = &tgt_can->second;

  MapperConfig transfer_cfg = cfg;
  transfer_cfg.seed = derive_transfer_seed(cfg.seed, task);

  try {
    const MapperFn& mapper = find_technique(task.technique);
    TransferredEvents trans = mapper(ctx, transfer_cfg);

    GuiMap gui_map = derive_gui_map(source_test->events, trans, task.source_app,
                                    task.target_app, task.technique);
    FidelitySets sets = evaluate_fidelity(source_test->events, gui_map,
                                          *ctx.src_can_map, *ctx.tgt_can_map);

    TestCase transferred;
    transferred.app_id = task.target_app;
    transferred.test_id = task.test_id;
    transferred.role = Role::transferred;
    transferred.events = strip_nulls(trans);

    TestCase ground_truth = *gt_test;
    ground_truth.role = Role::ground_truth;

    ResultEntry entry;
    entry.source_app = task.source_app;
    entry.target_app = task.target_app;
    entry.test_id = task.test_id;
    entry.technique = task.technique;
    entry.source_events = source_test->events;
    entry.transferred_events = transferred.events;
    entry.gt_events = ground_truth.events;
    entry.fidelity_sets = std::move(sets);
    entry.fidelity_metrics = compute_fidelity_metrics(entry.fidelity_sets);
    entry.utility_metrics =
        evaluate_utility(transferred, ground_truth, options.equality);

    TaskOutcome out;
    out.entry = std::move(entry);
    return out;
  } catch (const GroundTruthGapError& e) {
    return skip("ground-truth-gap", e.what());
  } catch (const ModelGapError& e) {
    return skip("model-gap", e.what());
  } catch (const AlignmentError& e) {
    return skip("alignment-error", e.what());
  } catch (const InputError& e) {
    return skip("invalid-ground-truth", e.what());
  } catch (const std::exception& e) {
    // Per-transfer isolation: nothing a single transfer does may abort the run.
    return skip("internal-error", e.what());
  }
}

}  // namespace detail

// Runs every planned transfer. One transfer's failure never aborts the run;
// gaps land in `skipped` with a reason code. Entries keep plan order even
// when executed on several workers.
inline RunResult run_benchmark(const BenchmarkPlan& plan, const Corpus& corpus,
                               const RunOptions& options = {}) {
  const std::vector<TransferTask> tasks = plan_transfers(plan, corpus);
  std::map<std::string, MapperConfig> configs;
  for (const auto& cfg : plan.techniques) configs[cfg.technique] = cfg;

  std::vector<detail::TaskOutcome> outcomes(tasks.size());
  auto run_range = [&](std::atomic<std::size_t>& next) {
    for (std::size_t i = next.fetch_add(1); i < tasks.size();
         i = next.fetch_add(1))
      outcomes[i] = detail::run_one_transfer(tasks[i], corpus,
                                             configs.at(tasks[i].technique),
                                             options);
  };

  const int workers = std::max(1, options.workers);
  if (workers == 1 || tasks.size() < 2) {
    std::atomic<std::size_t> next{0};
    run_range(next);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    const std::size_t n =
        std::min(static_cast<std::size_t>(workers), tasks.size());
    pool.reserve(n);
    for (std::size_t w = 0; w < n; ++w)
      pool.emplace_back([&run_range, &next] { run_range(next); });
    for (auto& t : pool) t.join();
  }

  RunResult result;
  result.planned = tasks.size();
  for (auto& outcome : outcomes) {
    if (outcome.entry) result.entries.push_back(std::move(*outcome.entry));
    if (outcome.skipped) result.skipped.push_back(std::move(*outcome.skipped));
  }
  return result;
}

// ---------------------------------------------------------------------------
// Synthetic corpus generation
// ---------------------------------------------------------------------------

struct SyntheticCorpusSpec {
  std::size_t n_apps = 2;
  std::size_t activities_per_app = 2;
  std::size_t events_per_activity = 3;
  std::size_t n_canonical = 8;
  std::size_t tests_per_app = 2;
  std::size_t test_length_min = 2;
  std::size_t test_length_max = 4;
  double canonical_coverage = 1.0;  // fraction of the vocabulary each app realizes
  std::uint64_t seed = 0;
};

namespace detail {

inline std::string zero_pad(std::size_t value, int width) {
  std::string s = std::to_string(value);
  while (static_cast<int>(s.size()) < width) s.insert(s.begin(), '0');
  return s;
}

// Distinct two-word canonical names; tokens are the words themselves so
// same-label events across apps score Jaccard 1.0.
inline std::vector<std::string> make_vocabulary(std::size_t n) {
  static const std::vector<std::string> verbs = {
      "open", "sign", "search", "add", "view",
      "edit", "remove", "filter", "share", "save"};
  static const std::vector<std::string> nouns = {
      "menu", "cart", "item", "account", "news",
      "profile", "settings", "page", "list", "form"};
  std::vector<std::string> vocab;
  vocab.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::string name = verbs[i % verbs.size()] + "_" +
                       nouns[(i / verbs.size()) % nouns.size()];
    if (i >= verbs.size() * nouns.size())
      name += "_" + std::to_string(i / (verbs.size() * nouns.size()));
    vocab.push_back(std::move(name));
  }
  return vocab;
}

inline std::vector<std::string> split_tokens(const std::string& name) {
  std::vector<std::string> tokens;
  std::size_t start = 0;
  while (start <= name.size()) {
    std::size_t sep = name.find('_', start);
    if (sep == std::string::npos) {
      tokens.push_back(name.substr(start));
      break;
    }
    tokens.push_back(name.substr(start, sep - start));
    start = sep + 1;
  }
  return tokens;
}

}  // namespace detail

inline void check_spec(const SyntheticCorpusSpec& spec) {
  if (spec.n_apps < 1 || spec.activities_per_app < 1 ||
      spec.events_per_activity < 1 || spec.n_canonical < 1 ||
      spec.tests_per_app < 1 || spec.test_length_min < 1)
    throw GenerationError("all synthetic corpus counts must be at least 1");
  if (spec.test_length_max < spec.test_length_min)
    throw GenerationError("test_length_range is empty");
  if (!(spec.canonical_coverage > 0.0) || spec.canonical_coverage > 1.0)
    throw GenerationError("canonical_coverage must be in (0, 1]");
}

// Seeded, deterministic corpus: all apps draw labels from one shared
// canonical vocabulary, each realizing `canonical_coverage` of it with
// app-specific locators; ground-truth tests are walks over the activity
// graph; canonical maps fall out of the construction, so the exact ground
// truth is known.
inline Corpus generate_synthetic_corpus(const SyntheticCorpusSpec& spec) {
  check_spec(spec);
  const std::vector<std::string> vocabulary =
      detail::make_vocabulary(spec.n_canonical);
  const std::size_t realized = std::min<std::size_t>(
      spec.n_canonical,
      std::max<std::size_t>(
          1, static_cast<std::size_t>(
                 std::llround(spec.canonical_coverage *
                              static_cast<double>(spec.n_canonical)))));
  const std::size_t events_total =
      spec.activities_per_app * spec.events_per_activity;
  if (realized > events_total)
    throw GenerationError(
        "cannot realize " + std::to_string(realized) +
        " canonical labels with only " + std::to_string(events_total) +
        " events per app");

  SplitMix64 rng(spec.seed);
  Corpus corpus;

  static const Action actions[] = {Action::click, Action::send_keys,
                                   Action::long_press, Action::swipe};

  for (std::size_t a = 0; a < spec.n_apps; ++a) {
    const std::string app_id = "app" + detail::zero_pad(a, 2);

    std::vector<std::string> activity_names;
    for (std::size_t i = 0; i < spec.activities_per_app; ++i)
      activity_names.push_back("act" + std::to_string(i));

    // Pick the app's realized vocabulary subset.
    std::vector<std::size_t> label_indices(spec.n_canonical);
    for (std::size_t i = 0; i < label_indices.size(); ++i) label_indices[i] = i;
    rng.shuffle(label_indices);
    label_indices.resize(realized);

    // Assign one label per event slot; every realized label covers at least
    // one slot.
    std::vector<std::size_t> slot_label(events_total);
    std::vector<std::size_t> slot_order(events_total);
    for (std::size_t i = 0; i < events_total; ++i) slot_order[i] = i;
    rng.shuffle(slot_order);
    for (std::size_t i = 0; i < events_total; ++i) {
      const std::size_t label = i < realized
                                    ? label_indices[i]
                                    : label_indices[rng.next_below(realized)];
      slot_label[slot_order[i]] = label;
    }

    AppModel model;
    model.app_id = app_id;
    model.main_activity = activity_names.front();
    model.activities.insert(activity_names.begin(), activity_names.end());
    CanonicalMap cmap;
    cmap.app_id = app_id;

    std::size_t slot = 0;
    for (std::size_t act = 0; act < spec.activities_per_app; ++act) {
      std::vector<AppModelEvent> events;
      for (std::size_t ev = 0; ev < spec.events_per_activity; ++ev, ++slot) {
        const std::string& label = vocabulary[slot_label[slot]];
        AppModelEvent me;
        me.event.locator = app_id + "_" + activity_names[act] + "_ev" +
                           std::to_string(ev);
        me.event.action = actions[rng.next_below(4)];
        if (me.event.action == Action::send_keys) me.event.input = "text";
        me.next_activity =
            activity_names[rng.next_below(spec.activities_per_app)];
        me.label_tokens = detail::split_tokens(label);
        cmap.entries[me.event.locator] = label;
        events.push_back(std::move(me));
      }
      model.events_by_activity[activity_names[act]] = std::move(events);
    }

    // Ground-truth tests: seeded walks from the main activity.
    std::map<std::string, TestCase> tests;
    for (std::size_t t = 0; t < spec.tests_per_app; ++t) {
      TestCase tc;
      tc.app_id = app_id;
      tc.test_id = "t" + detail::zero_pad(t, 2);
      tc.role = Role::source;
      const std::size_t span = spec.test_length_max - spec.test_length_min + 1;
      const std::size_t length = spec.test_length_min + rng.next_below(span);
      std::string current = model.main_activity;
      for (std::size_t step = 0; step < length; ++step) {
        const auto& events = model.events_of(current);
        if (events.empty())
          throw GenerationError("test length exceeds reachable events at '" +
                                current + "'");
        const auto& chosen = events[rng.next_below(events.size())];
        tc.events.push_back(chosen.event);
        current = chosen.next_activity;
      }
      tests[tc.test_id] = std::move(tc);
    }

    corpus.apps[app_id] = std::move(model);
    corpus.canonical[app_id] = std::move(cmap);
    corpus.tests[app_id] = std::move(tests);
  }

  return corpus;
}

// ---------------------------------------------------------------------------
// Plan / spec JSON
// ---------------------------------------------------------------------------

inline json mapper_config_to_json(const MapperConfig& cfg) {
  json j;
  j["name"] = cfg.technique;
  j["threshold"] = cfg.threshold;
  j["seed"] = cfg.seed;
  return j;
}

inline MapperConfig mapper_config_from_json(const json& j,
                                            const std::string& ctx) {
  MapperConfig cfg;
  cfg.technique = jio::require_string(j, "name", ctx);
  if (j.contains("threshold")) {
    if (!j["threshold"].is_number())
      throw SchemaError(ctx + ".threshold: expected a number");
    cfg.threshold = j["threshold"].get<double>();
    if (cfg.threshold < 0.0 || cfg.threshold > 1.0)
      throw SchemaError(ctx + ".threshold: must be in [0, 1]");
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned())
      throw SchemaError(ctx + ".seed: expected a non-negative integer");
    cfg.seed = j["seed"].get<std::uint64_t>();
  }
  return cfg;
}

inline json plan_to_json(const BenchmarkPlan& plan) {
  json j;
  json cats = json::array();
  for (const auto& c : plan.categories) {
    json cj;
    cj["name"] = c.name;
    cj["app_ids"] = c.app_ids;
    cats.push_back(cj);
  }
  j["categories"] = cats;
  json techs = json::array();
  for (const auto& t : plan.techniques) techs.push_back(mapper_config_to_json(t));
  j["techniques"] = techs;
  j["include_self_pairs"] = plan.include_self_pairs;
  return j;
}

inline BenchmarkPlan plan_from_json(const json& j, const std::string& ctx) {
  BenchmarkPlan plan;
  const json& cats = jio::require_array(j, "categories", ctx);
  for (std::size_t i = 0; i < cats.size(); ++i) {
    const std::string cctx = ctx + ".categories[" + std::to_string(i) + "]";
    PlanCategory c;
    c.name = jio::require_string(cats[i], "name", cctx);
    for (const auto& app : jio::require_array(cats[i], "app_ids", cctx)) {
      if (!app.is_string())
        throw SchemaError(cctx + ".app_ids: expected strings");
      c.app_ids.push_back(app.get<std::string>());
    }
    plan.categories.push_back(std::move(c));
  }
  const json& techs = jio::require_array(j, "techniques", ctx);
  for (std::size_t i = 0; i < techs.size(); ++i)
    plan.techniques.push_back(mapper_config_from_json(
        techs[i], ctx + ".techniques[" + std::to_string(i) + "]"));
  if (j.contains("include_self_pairs")) {
    if (!j["include_self_pairs"].is_boolean())
      throw SchemaError(ctx + ".include_self_pairs: expected a boolean");
    plan.include_self_pairs = j["include_self_pairs"].get<bool>();
  }
  return plan;
}

inline json synthetic_spec_to_json(const SyntheticCorpusSpec& spec) {
  json j;
  j["n_apps"] = spec.n_apps;
  j["activities_per_app"] = spec.activities_per_app;
  j["events_per_activity"] = spec.events_per_activity;
  j["n_canonical"] = spec.n_canonical;
  j["tests_per_app"] = spec.tests_per_app;
  j["test_length_range"] = json::array({spec.test_length_min, spec.test_length_max});
  j["canonical_coverage"] = spec.canonical_coverage;
  j["seed"] = spec.seed;
  return j;
}

inline SyntheticCorpusSpec synthetic_spec_from_json(const json& j,
                                                    const std::string& ctx) {
  SyntheticCorpusSpec spec;
  auto count = [&](const char* f) -> std::size_t {
    const json& v = jio::require(j, f, ctx);
    if (!v.is_number_unsigned())
      throw SchemaError(ctx + "." + f + ": expected a non-negative integer");
    return v.get<std::size_t>();
  };
  spec.n_apps = count("n_apps");
  spec.activities_per_app = count("activities_per_app");
  spec.events_per_activity = count("events_per_activity");
  spec.n_canonical = count("n_canonical");
  spec.tests_per_app = count("tests_per_app");
  const json& range = jio::require_array(j, "test_length_range", ctx);
  if (range.size() != 2 || !range[0].is_number_unsigned() ||
      !range[1].is_number_unsigned())
    throw SchemaError(ctx + ".test_length_range: expected [min, max]");
  spec.test_length_min = range[0].get<std::size_t>();
  spec.test_length_max = range[1].get<std::size_t>();
  const json& coverage = jio::require(j, "canonical_coverage", ctx);
  if (!coverage.is_number())
    throw SchemaError(ctx + ".canonical_coverage: expected a number");
  spec.canonical_coverage = coverage.get<double>();
  const json& seed = jio::require(j, "seed", ctx);
  if (!seed.is_number_unsigned())
    throw SchemaError(ctx + ".seed: expected a non-negative integer");
  spec.seed = seed.get<std::uint64_t>();
  check_spec(spec);
  return spec;
}

// Reproducibility manifest written alongside run outputs. Contains no
// timestamps so identical runs produce identical bytes.
inline json run_manifest(const BenchmarkPlan& plan, const RunOptions& options,
                         const std::string& corpus_ref, const RunResult& result) {
  json j;
  j["plan"] = plan_to_json(plan);
  j["equality_mode"] = equality_mode_name(options.equality);
  j["corpus"] = corpus_ref;
  j["planned"] = result.planned;
  j["entries"] = result.entries.size();
  j["skipped"] = result.skipped.size();
  const std::string config =
      plan_to_json(plan).dump() + "|" + equality_mode_name(options.equality);
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx",
                static_cast<unsigned long long>(fnv1a64(config)));
  j["config_hash"] = std::string(hex);
  return j;
}

}  // namespace fruiter
