// Acceptance suite: one line per criterion, PASS or FAIL, exit code equal to
// the number of failed criteria. Expects the wish/etsy fixture directory as
// argv[1] (defaults to fixtures/wish_etsy relative to the working directory).

#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "fruiter/fruiter.hpp"

#include "support.hpp"

using namespace fruiter;
using testsupport::ev;

namespace {

std::filesystem::path g_fixture_dir = "fixtures/wish_etsy";

struct CheckFailure {
  std::string detail;
};

void require(bool condition, const std::string& detail) {
  if (!condition) throw CheckFailure{detail};
}

template <typename T, typename U>
void require_eq(const T& got, const U& expected, const std::string& what) {
  if (!(got == static_cast<T>(expected))) {
    std::ostringstream os;
    os << what << ": got " << got << ", expected " << expected;
    throw CheckFailure{os.str()};
  }
}

void require_close(double got, double expected, double tol,
                   const std::string& what) {
  if (std::abs(got - expected) > tol) {
    std::ostringstream os;
    os << what << ": got " << got << ", expected " << expected << " (tol "
       << tol << ")";
    throw CheckFailure{os.str()};
  }
}

SyntheticCorpusSpec spec_for_seed(std::uint64_t seed) {
  SyntheticCorpusSpec spec;
  spec.n_apps = 3 + seed % 3;
  spec.activities_per_app = 2 + seed % 2;
  spec.events_per_activity = 4;
  spec.n_canonical = 6 + seed % 3;
  spec.tests_per_app = 2;
  spec.test_length_min = 1;
  spec.test_length_max = 4;
  spec.canonical_coverage = 0.5 + 0.5 * static_cast<double>(seed % 6) / 5.0;
  spec.seed = seed;
  return spec;
}

BenchmarkPlan all_apps_plan(const Corpus& corpus,
                            std::vector<MapperConfig> techniques) {
  BenchmarkPlan plan;
  PlanCategory cat;
  cat.name = "all";
  for (const auto& [app_id, model] : corpus.apps) cat.app_ids.push_back(app_id);
  plan.categories = {cat};
  plan.techniques = std::move(techniques);
  plan.include_self_pairs = true;
  return plan;
}

MapperConfig technique(const std::string& name, double threshold = 0.5,
                       std::uint64_t seed = 0) {
  MapperConfig cfg;
  cfg.technique = name;
  cfg.threshold = threshold;
  cfg.seed = seed;
  return cfg;
}

// --- criterion 1 -------------------------------------------------------------
// Perfect mapper: fp = fn = 0 and all defined ratios exactly 1.0 on the
// committed fixture and on 50 seeded synthetic corpora.

void criterion_perfect_theorem() {
  std::vector<Corpus> corpora;
  corpora.push_back(load_corpus(g_fixture_dir));
  for (std::uint64_t seed = 1; seed <= 50; ++seed)
    corpora.push_back(generate_synthetic_corpus(spec_for_seed(seed)));

  std::size_t entries_checked = 0;
  for (const Corpus& corpus : corpora) {
    RunResult result =
        run_benchmark(all_apps_plan(corpus, {technique("perfect")}), corpus);
    require(!result.entries.empty(), "perfect run produced no entries");
    require(result.skipped.empty(), "perfect run skipped transfers");
    for (const ResultEntry& e : result.entries) {
      require_eq(e.fidelity_metrics.fp, 0u, "fp");
      require_eq(e.fidelity_metrics.fn, 0u, "fn");
      if (e.fidelity_metrics.accuracy)
        require_eq(*e.fidelity_metrics.accuracy, 1.0, "accuracy");
      if (e.fidelity_metrics.precision)
        require_eq(*e.fidelity_metrics.precision, 1.0, "precision");
      if (e.fidelity_metrics.recall)
        require_eq(*e.fidelity_metrics.recall, 1.0, "recall");
      ++entries_checked;
    }
  }
  require(entries_checked > 500, "expected several hundred entries");
}

// --- criterion 2 -------------------------------------------------------------
// Figure-1 fixture: perfect transfers the wish sign-in to {b3-1,b3-2,b3-3};
// utility against the 5-event etsy ground truth is effort 2, reduction 0.6.

void criterion_figure1() {
  const Corpus corpus = load_corpus(g_fixture_dir);
  const auto& wish_events = corpus.tests.at("wish").at("signin").events;
  TransferredEvents trans = perfect_map(
      wish_events, corpus.canonical.at("wish"), corpus.canonical.at("etsy"));
  require_eq(trans.size(), 3u, "transferred length");
  const char* expected[] = {"b3-1", "b3-2", "b3-3"};
  for (std::size_t i = 0; i < 3; ++i) {
    require(trans[i].has_value(), "unexpected null transfer");
    require_eq(trans[i]->locator, std::string(expected[i]), "mapped locator");
  }

  TestCase transferred;
  transferred.app_id = "etsy";
  transferred.test_id = "signin";
  transferred.role = Role::transferred;
  transferred.events = strip_nulls(trans);
  TestCase gt = corpus.tests.at("etsy").at("signin");
  gt.role = Role::ground_truth;

  require_eq(testsupport::lev_brute(transferred.events, gt.events), 2u,
             "edit-distance oracle");
  UtilityMetrics u = evaluate_utility(transferred, gt);
  require_eq(u.effort, 2u, "effort");
  require_eq(u.gt_length, 5u, "gt length");
  require_close(u.reduction, 0.6, 0.0, "reduction");

  RunResult run = run_benchmark(
      all_apps_plan(corpus, {technique("perfect")}), corpus);
  require_eq(run.entries.size(), 4u, "fixture entries (2x2 pairs x 1 test)");
}

// --- criterion 3 -------------------------------------------------------------
// Algorithm-1 oracle equivalence on 1000 random small instances; the four
// sets always partition the source events.

void criterion_fidelity_oracle() {
  SplitMix64 rng(20240); // deterministic instance stream
  for (int iter = 0; iter < 1000; ++iter) {
    testsupport::FidelityInstance inst =
        testsupport::random_fidelity_instance(rng);
    GuiMap gm = derive_gui_map(inst.src, inst.trans, "s", "t", "acc");
    FidelitySets sets = evaluate_fidelity(inst.src, gm, inst.src_map, inst.tgt_map);

    require(sets.is_partition_of(inst.src), "partition violated");

    std::size_t correct = 0, incorrect = 0, missed = 0, non_exist = 0;
    for (std::size_t i = 0; i < inst.src.size(); ++i) {
      std::optional<std::string> trans_loc;
      if (inst.trans[i]) trans_loc = inst.trans[i]->locator;
      switch (testsupport::classify_oracle(inst.src_entries, inst.tgt_entries,
                                           inst.src[i].locator, trans_loc)) {
        case testsupport::FidelityCase::correct: ++correct; break;
        case testsupport::FidelityCase::incorrect: ++incorrect; break;
        case testsupport::FidelityCase::missed: ++missed; break;
        case testsupport::FidelityCase::non_exist: ++non_exist; break;
      }
    }
    require_eq(sets.correct.size(), correct, "correct");
    require_eq(sets.incorrect.size(), incorrect, "incorrect");
    require_eq(sets.missed.size(), missed, "missed");
    require_eq(sets.non_exist.size(), non_exist, "non_exist");
  }
}

// --- criterion 4 -------------------------------------------------------------
// Levenshtein: DP equals the exponential brute force for all sequence pairs
// of lengths <= 6 over a 3-event alphabet; metric axioms on 1000 triples.

void criterion_levenshtein_oracle() {
  // Enumerate every sequence of length 0..6 over a 3-symbol alphabet, both
  // as integer codes (for the brute force) and as events (for the DP).
  const GuiEvent alphabet[3] = {ev("e0"), ev("e1"), ev("e2")};
  std::vector<std::vector<std::uint8_t>> codes;
  std::vector<std::vector<GuiEvent>> events;
  for (std::size_t len = 0; len <= 6; ++len) {
    std::size_t count = 1;
    for (std::size_t i = 0; i < len; ++i) count *= 3;
    for (std::size_t code = 0; code < count; ++code) {
      std::vector<std::uint8_t> seq;
      std::vector<GuiEvent> evs;
      std::size_t c = code;
      for (std::size_t i = 0; i < len; ++i) {
        seq.push_back(static_cast<std::uint8_t>(c % 3));
        evs.push_back(alphabet[c % 3]);
        c /= 3;
      }
      codes.push_back(std::move(seq));
      events.push_back(std::move(evs));
    }
  }

  for (std::size_t i = 0; i < codes.size(); ++i) {
    for (std::size_t j = i; j < codes.size(); ++j) {
      const std::size_t expected = testsupport::lev_brute(codes[i], codes[j]);
      if (effort(events[i], events[j]) != expected ||
          effort(events[j], events[i]) != expected)
        throw CheckFailure{"DP/brute-force mismatch at pair (" +
                           std::to_string(i) + "," + std::to_string(j) + ")"};
    }
  }

  SplitMix64 rng(888);
  auto random_seq = [&rng, &alphabet]() {
    std::vector<GuiEvent> seq;
    const std::size_t n = rng.next_below(9);
    for (std::size_t i = 0; i < n; ++i)
      seq.push_back(alphabet[rng.next_below(3)]);
    return seq;
  };
  for (int iter = 0; iter < 1000; ++iter) {
    const auto a = random_seq();
    const auto b = random_seq();
    const auto c = random_seq();
    const std::size_t ab = effort(a, b);
    require_eq(ab, effort(b, a), "symmetry");
    require((ab == 0) == (a == b), "identity axiom violated");
    require(ab <= effort(a, c) + effort(c, b), "triangle inequality violated");
  }
}

// --- criterion 5 -------------------------------------------------------------
// Naive edge behavior: threshold 1.0 gives all nulls, recall 0, undefined
// precision; fixed seeds reproduce byte-identical outputs; the PRNG matches
// its published cross-platform reference vector.

void criterion_naive_edge() {
  SplitMix64 reference(0);
  require_eq(reference.next(), 0xE220A8397B1DCDAFULL, "splitmix64 vector 1");
  require_eq(reference.next(), 0x6E789E6AA1B965F4ULL, "splitmix64 vector 2");
  require_eq(reference.next(), 0x06C45D188009454FULL, "splitmix64 vector 3");

  const Corpus corpus = load_corpus(g_fixture_dir);
  RunResult run1 = run_benchmark(
      all_apps_plan(corpus, {technique("naive", 1.0, 42)}), corpus);
  RunResult run2 = run_benchmark(
      all_apps_plan(corpus, {technique("naive", 1.0, 42)}), corpus);

  require_eq(run1.entries.size(), 4u, "entries");
  for (const ResultEntry& e : run1.entries) {
    require(e.transferred_events.empty(), "expected all-null transfer");
    require(!e.fidelity_metrics.precision, "precision must be undefined");
    if (e.fidelity_metrics.recall)
      require_eq(*e.fidelity_metrics.recall, 0.0, "recall");
    if (e.source_app == e.target_app)
      require(e.fidelity_metrics.recall.has_value(),
              "self pairs must have defined recall");
  }

  const std::string csv1 = results_csv(to_rows(run1.entries));
  const std::string csv2 = results_csv(to_rows(run2.entries));
  require(csv1 == csv2, "two identical-seed runs differ");

  // Byte-identical gui maps from the mapper itself.
  const auto& wish_events = corpus.tests.at("wish").at("signin").events;
  MapperConfig cfg = technique("naive", 0.3, 42);
  GuiMap a = derive_gui_map(
      wish_events, naive_map(wish_events, corpus.apps.at("etsy"), cfg), "wish",
      "etsy", "naive");
  GuiMap b = derive_gui_map(
      wish_events, naive_map(wish_events, corpus.apps.at("etsy"), cfg), "wish",
      "etsy", "naive");
  require(gui_map_to_json(a).dump() == gui_map_to_json(b).dump(),
          "gui map bytes differ across runs");
}

// --- criterion 6 -------------------------------------------------------------
// Counting identity: |entries| + |skipped| equals the planned cross-product
// sum over pairs of |source tests| x |techniques|.

void criterion_counting_identity() {
  for (std::uint64_t seed : {3ULL, 14ULL, 59ULL}) {
    Corpus corpus = generate_synthetic_corpus(spec_for_seed(seed));
    // Remove one ground-truth test from the last app (which always shares a
    // category with at least one other app below) to force skips.
    corpus.tests.rbegin()->second.erase(
        corpus.tests.rbegin()->second.begin()->first);

    std::vector<std::string> apps;
    for (const auto& [app_id, model] : corpus.apps) apps.push_back(app_id);
    BenchmarkPlan plan;
    const std::size_t half = apps.size() / 2;
    plan.categories.push_back(
        {"front", std::vector<std::string>(apps.begin(), apps.begin() + half)});
    plan.categories.push_back(
        {"back", std::vector<std::string>(apps.begin() + half, apps.end())});
    plan.techniques = {technique("perfect"), technique("naive", 0.5, seed),
                       technique("similarity", 0.25)};

    std::size_t expected = 0;
    for (const auto& cat : plan.categories)
      for (const auto& src : cat.app_ids)
        for (const auto& tgt : cat.app_ids) {
          (void)tgt;
          auto it = corpus.tests.find(src);
          if (it != corpus.tests.end())
            expected += it->second.size() * plan.techniques.size();
        }

    RunResult result = run_benchmark(plan, corpus);
    require_eq(result.planned, expected, "planned count");
    require_eq(result.entries.size() + result.skipped.size(), result.planned,
               "entries + skipped");
    require(!result.skipped.empty(), "expected at least one skip");
  }
}

// --- criterion 7 -------------------------------------------------------------
// Reduction negativity: gt length 2 with 6 spurious transferred events.

void criterion_reduction_negative() {
  TestCase transferred;
  transferred.app_id = "t";
  transferred.test_id = "x";
  transferred.role = Role::transferred;
  for (int i = 0; i < 6; ++i) transferred.events.push_back(ev("junk" + std::to_string(i)));
  TestCase gt;
  gt.app_id = "t";
  gt.test_id = "x";
  gt.role = Role::ground_truth;
  gt.events = {ev("real1"), ev("real2")};

  UtilityMetrics u = evaluate_utility(transferred, gt);
  require_eq(u.effort, 6u, "effort");
  require_close(u.reduction, -2.0, 0.0, "reduction");
  require(u.reduction < 0.0, "reduction must be negative");
}

// --- criterion 8 -------------------------------------------------------------
// Extractor def-use: variable indirection equals inline chaining; shadowed
// definitions resolve to the last assignment.

void criterion_extractor_defuse() {
  const std::string with_vars =
      "# variable-based form\n"
      "let email = findElementById(\"email\")\n"
      "email.sendKeys(\"u@x.com\")\n"
      "let button = findElementByXPath(\"//btn[1]\")\n"
      "button.click()\n"
      "let dir = findElementById(\"list\")\n"
      "dir.swipe(\"down\")\n";
  const std::string inline_form =
      "findElementById(\"email\").sendKeys(\"u@x.com\")\n"
      "findElementByXPath(\"//btn[1]\").click()\n"
      "findElementById(\"list\").swipe(\"down\")\n";
  require(extract_events_from_source(with_vars) ==
              extract_events_from_source(inline_form),
          "variable and inline forms disagree");

  const auto shadowed = extract_events_from_source(
      "let e = findElementById(\"a\")\n"
      "let e = findElementById(\"b\")\n"
      "e.click()\n");
  require_eq(shadowed.size(), 1u, "event count");
  require_eq(shadowed[0].locator, std::string("b"), "shadowed locator");
}

// --- criterion 9 -------------------------------------------------------------
// Statistics sanity: exact +/-1 on linear data, undefined on zero variance,
// oracle agreement within 1e-9, planted correlation sign recovered.

void criterion_statistics() {
  auto plus = pearson(std::vector<double>{1, 2, 3}, std::vector<double>{2, 4, 6});
  require(plus && std::abs(*plus - 1.0) < 1e-12, "pearson +1 on linear data");
  auto minus = pearson(std::vector<double>{1, 2, 3}, std::vector<double>{9, 6, 3});
  require(minus && std::abs(*minus + 1.0) < 1e-12, "pearson -1 on linear data");
  require(!pearson(std::vector<double>{5, 5, 5}, std::vector<double>{1, 2, 3}),
          "zero variance must be undefined");

  SplitMix64 rng(31415);
  for (int iter = 0; iter < 100; ++iter) {
    const std::size_t n = 3 + rng.next_below(50);
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < n; ++i) {
      xs.push_back(rng.next_unit() * 100 - 50);
      ys.push_back(0.7 * xs.back() + rng.next_unit() * 25);
    }
    auto mine = pearson(xs, ys);
    auto oracle = testsupport::pearson_oracle(xs, ys);
    require(mine && oracle, "unexpected undefined coefficient");
    require(std::abs(*mine - *oracle) < 1e-9, "oracle disagreement > 1e-9");
  }

  // Planted relation precision = 0.5 * reduction + noise; the coefficient's
  // sign must be recovered at every noise level and approach 1 as it fades.
  double last = 0.0;
  for (double sigma : {0.3, 0.01, 1e-6}) {
    std::vector<ResultRow> rows;
    SplitMix64 noise_rng(2718);
    for (int i = 0; i < 200; ++i) {
      ResultRow r;
      r.source_app = "s";
      r.target_app = "t";
      r.test_id = "x";
      r.technique = "planted";
      r.reduction = noise_rng.next_unit();
      r.precision = 0.5 * r.reduction + sigma * (noise_rng.next_unit() * 2 - 1);
      r.accuracy = noise_rng.next_unit();
      r.recall = noise_rng.next_unit();
      r.effort = i % 7;
      rows.push_back(std::move(r));
    }
    CorrelationMatrix m = correlation_matrix(rows);
    const auto cell = m.cells[5][1];  // precision x reduction
    require(cell.has_value(), "planted cell undefined");
    require(*cell > 0.0, "planted sign not recovered");
    last = *cell;
  }
  require(last > 0.999, "coefficient did not approach 1 as noise vanished");
}

// --- criterion 10 ------------------------------------------------------------
// End-to-end reproducibility: the same plan run twice produces byte-identical
// result files on a 2-category x 5-app x 3-technique synthetic benchmark.

void criterion_reproducibility() {
  SyntheticCorpusSpec spec;
  spec.n_apps = 10;
  spec.activities_per_app = 2;
  spec.events_per_activity = 4;
  spec.n_canonical = 10;
  spec.tests_per_app = 2;
  spec.test_length_min = 1;
  spec.test_length_max = 4;
  spec.canonical_coverage = 0.8;
  spec.seed = 77;
  const Corpus corpus = generate_synthetic_corpus(spec);

  BenchmarkPlan plan;
  plan.categories = {
      {"catA", {"app00", "app01", "app02", "app03", "app04"}},
      {"catB", {"app05", "app06", "app07", "app08", "app09"}}};
  plan.techniques = {technique("perfect"), technique("naive", 0.5, 9),
                     technique("similarity", 0.25)};
  plan.include_self_pairs = true;

  RunOptions options;
  const auto out = std::filesystem::temp_directory_path() / "fruiter_acceptance";
  std::array<std::string, 2> csv_bytes, entries_bytes, manifest_bytes;
  for (int round = 0; round < 2; ++round) {
    const auto dir = out / ("run" + std::to_string(round));
    std::filesystem::remove_all(dir);
    RunResult result = run_benchmark(plan, corpus, options);
    write_results_csv(result.entries, dir / "results.csv");
    json entries = json::array();
    for (const auto& e : result.entries)
      entries.push_back(result_entry_to_json(e));
    write_json_file(dir / "entries.json", entries);
    write_json_file(dir / "manifest.json",
                    run_manifest(plan, options, "synthetic", result));
    csv_bytes[round] = read_text_file(dir / "results.csv");
    entries_bytes[round] = read_text_file(dir / "entries.json");
    manifest_bytes[round] = read_text_file(dir / "manifest.json");
  }
  std::filesystem::remove_all(out);

  require(csv_bytes[0] == csv_bytes[1], "results.csv differs between runs");
  require(entries_bytes[0] == entries_bytes[1], "entries.json differs");
  require(manifest_bytes[0] == manifest_bytes[1], "manifest.json differs");
  require(!csv_bytes[0].empty(), "empty results file");

  // 2 categories x 25 ordered pairs x 2 tests x 3 techniques.
  const std::size_t rows = parse_results_csv(csv_bytes[0]).size();
  require_eq(rows, std::size_t{2 * 25 * 2 * 3}, "entry count");
}

struct Criterion {
  const char* name;
  std::function<void()> body;
};

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) g_fixture_dir = argv[1];

  const std::vector<Criterion> criteria = {
      {"perfect mapper: fp=fn=0 and unit ratios on fixture + 50 synthetic corpora",
       criterion_perfect_theorem},
      {"figure-1 fixture: wish sign-in -> {b3-1,b3-2,b3-3}, effort 2, reduction 0.6",
       criterion_figure1},
      {"fidelity evaluator matches exhaustive classifier on 1000 instances",
       criterion_fidelity_oracle},
      {"levenshtein DP equals brute force (all pairs len<=6, 3-event alphabet) + metric axioms",
       criterion_levenshtein_oracle},
      {"naive baseline: threshold 1.0 all-null, recall 0, undefined precision, seeded reproducibility",
       criterion_naive_edge},
      {"counting identity: entries + skipped = sum over pairs of tests x techniques",
       criterion_counting_identity},
      {"reduction negativity: gt length 2 vs 6 spurious events gives -2.0",
       criterion_reduction_negative},
      {"extractor def-use: inline rewrite equivalence and last-definition-wins",
       criterion_extractor_defuse},
      {"statistics: pearson +/-1, zero-variance undefined, 1e-9 oracle match, planted sign",
       criterion_statistics},
      {"reproducibility: identical plan runs produce byte-identical result files",
       criterion_reproducibility},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    std::string status = "PASS";
    std::string detail;
    try {
      criteria[i].body();
    } catch (const CheckFailure& f) {
      status = "FAIL";
      detail = f.detail;
      ++failures;
    } catch (const std::exception& e) {
      status = "FAIL";
      detail = e.what();
      ++failures;
    }
    std::cout << "[" << (i + 1 < 10 ? " " : "") << i + 1 << "/10] " << status
              << "  " << criteria[i].name;
    if (!detail.empty()) std::cout << " -- " << detail;
    std::cout << "\n";
  }
  if (failures == 0)
    std::cout << "all 10 acceptance criteria passed\n";
  else
    std::cout << failures << " acceptance criteria FAILED\n";
  return failures;
}
