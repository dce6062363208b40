// fruiter command-line interface.
//
// Exit codes: 0 success, 1 validation/plan errors, 2 I/O errors.
// All randomness flows from explicit --seed flags or plan files; nothing is
// read from the environment.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "fruiter/fruiter.hpp"

namespace {

using fruiter::json;

fruiter::ApiSignatureTable table_from_option(const std::string& table_path) {
  if (table_path.empty()) return fruiter::default_signature_table();
  return fruiter::load_signature_table(table_path);
}

std::string skipped_csv(const std::vector<fruiter::SkippedTransfer>& skipped) {
  std::string out = "source_app,target_app,test_id,technique,reason\n";
  for (const auto& s : skipped)
    out += s.task.source_app + ',' + s.task.target_app + ',' + s.task.test_id +
           ',' + s.task.technique + ',' + s.reason_code + '\n';
  return out;
}

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty())
    std::cout << text;
  else
    fruiter::write_text_file(out_path, text);
}

int run_cli(int argc, char** argv) {
  CLI::App app{"fruiter: evaluates UI test-reuse techniques with fidelity and "
               "utility metrics"};
  app.require_subcommand(1);

  // --- validate ---
  std::string validate_corpus_dir;
  auto* validate = app.add_subcommand("validate", "validate a corpus directory");
  validate->add_option("corpus", validate_corpus_dir, "corpus directory")
      ->required();

  // --- extract ---
  std::string extract_script, extract_table, extract_out;
  std::string extract_app = "app", extract_test, extract_role = "source";
  auto* extract =
      app.add_subcommand("extract", "extract events from a test script");
  extract->add_option("script", extract_script, "script file")->required();
  extract->add_option("--table", extract_table, "API signature table JSON");
  extract->add_option("--app-id", extract_app, "app id for the emitted test");
  extract->add_option("--test-id", extract_test,
                      "test id (default: script file stem)");
  extract->add_option("--role", extract_role, "source|transferred|ground_truth");
  extract->add_option("--out", extract_out, "output file (default: stdout)");

  // --- map ---
  std::string map_corpus, map_technique, map_source, map_target, map_test;
  std::string map_out, map_transferred_out;
  double map_threshold = 0.5;
  std::uint64_t map_seed = 0;
  auto* map = app.add_subcommand("map", "run one GUI mapper on one transfer");
  map->add_option("--corpus", map_corpus, "corpus directory")->required();
  map->add_option("--technique", map_technique, "naive|perfect|similarity")
      ->required();
  map->add_option("--source-app", map_source, "source app id")->required();
  map->add_option("--target-app", map_target, "target app id")->required();
  map->add_option("--test-id", map_test, "source test id")->required();
  map->add_option("--threshold", map_threshold, "similarity threshold in [0,1]");
  map->add_option("--seed", map_seed, "PRNG seed (naive)");
  map->add_option("--out", map_out, "gui map output file (default: stdout)");
  map->add_option("--emit-transferred", map_transferred_out,
                  "also write the transferred test (events.json)");

  // --- evaluate ---
  auto* evaluate = app.add_subcommand("evaluate", "compute metrics");
  evaluate->require_subcommand(1);
  std::string fid_guimap, fid_src_canmap, fid_tgt_canmap, fid_out;
  auto* eval_fidelity =
      evaluate->add_subcommand("fidelity", "classify a gui map against canonical maps");
  eval_fidelity->add_option("--guimap", fid_guimap, "guimap.json")->required();
  eval_fidelity->add_option("--source-canmap", fid_src_canmap, "source canmap.json")
      ->required();
  eval_fidelity->add_option("--target-canmap", fid_tgt_canmap, "target canmap.json")
      ->required();
  eval_fidelity->add_option("--out", fid_out, "output file (default: stdout)");

  std::string util_transferred, util_gt, util_out;
  bool util_strict = false;
  auto* eval_utility =
      evaluate->add_subcommand("utility", "effort and reduction vs a ground truth");
  eval_utility->add_option("--transferred", util_transferred, "transferred events.json")
      ->required();
  eval_utility->add_option("--ground-truth", util_gt, "ground-truth events.json")
      ->required();
  eval_utility->add_flag("--strict", util_strict,
                         "compare full event triples (default: lenient)");
  eval_utility->add_option("--out", util_out, "output file (default: stdout)");

  // --- run ---
  std::string run_plan, run_corpus, run_out;
  bool run_strict = false;
  int run_workers = 1;
  auto* run = app.add_subcommand("run", "run a benchmark plan");
  run->add_option("--plan", run_plan, "plan JSON file")->required();
  run->add_option("--corpus", run_corpus, "corpus directory")->required();
  run->add_option("--out", run_out, "output directory")->required();
  run->add_flag("--strict", run_strict, "strict event equality for utility");
  run->add_option("--workers", run_workers, "worker threads (default 1)");

  // --- report ---
  std::string report_results;
  bool report_aggregate = false, report_correlate = false;
  bool report_per_pair = false, report_per_technique = false;
  auto* report = app.add_subcommand("report", "aggregate or correlate results");
  report->add_option("--results", report_results, "results.csv")->required();
  report->add_flag("--aggregate", report_aggregate, "per-technique means");
  report->add_flag("--correlate", report_correlate,
                   "fidelity x utility correlation matrix");
  report->add_flag("--per-pair", report_per_pair,
                   "average within app pairs first (aggregate)");
  report->add_flag("--per-technique", report_per_technique,
                   "one correlation point per technique (correlate)");

  // --- gen-corpus ---
  std::string gen_spec, gen_out;
  auto* gen = app.add_subcommand("gen-corpus", "generate a synthetic corpus");
  gen->add_option("--spec", gen_spec, "corpus spec JSON file")->required();
  gen->add_option("--out", gen_out, "output directory")->required();

  CLI11_PARSE(app, argc, argv);

  if (*validate) {
    fruiter::Corpus corpus = fruiter::load_corpus(validate_corpus_dir);
    fruiter::ValidationReport report_ = fruiter::validate_corpus(corpus);
    if (report_.empty()) {
      std::cout << "corpus OK: " << corpus.apps.size() << " apps, "
                << [&corpus] {
                     std::size_t n = 0;
                     for (const auto& [a, t] : corpus.tests) n += t.size();
                     return n;
                   }()
                << " tests\n";
      return 0;
    }
    for (const auto& v : report_)
      std::cout << v.code << ": " << v.message << "\n";
    std::cout << report_.size() << " violation(s)\n";
    return 1;
  }

  if (*extract) {
    const fruiter::ApiSignatureTable table = table_from_option(extract_table);
    const std::string text = fruiter::read_text_file(extract_script);
    fruiter::TestCase tc;
    tc.app_id = extract_app;
    tc.test_id = extract_test.empty()
                     ? std::filesystem::path(extract_script).stem().string()
                     : extract_test;
    auto role = fruiter::role_from_name(extract_role);
    if (!role) throw fruiter::SchemaError("unknown role '" + extract_role + "'");
    tc.role = *role;
    tc.events = fruiter::extract_events_from_source(text, table);
    if (tc.events.empty() && tc.role != fruiter::Role::transferred)
      throw fruiter::SchemaError("script yields no events; role '" +
                                 extract_role + "' requires at least one");
    emit(extract_out, fruiter::test_case_to_json(tc).dump(2) + "\n");
    return 0;
  }

  if (*map) {
    const fruiter::Corpus corpus = fruiter::load_corpus(map_corpus);
    const fruiter::TestCase* source_test = corpus.find_test(map_source, map_test);
    if (!source_test)
      throw fruiter::PlanError("no test '" + map_test + "' for app '" +
                               map_source + "'");
    fruiter::MapperConfig cfg;
    cfg.technique = map_technique;
    cfg.threshold = map_threshold;
    cfg.seed = map_seed;
    if (cfg.threshold < 0.0 || cfg.threshold > 1.0)
      throw fruiter::PlanError("threshold must be in [0, 1]");

    fruiter::MapperContext ctx;
    ctx.src_events = &source_test->events;
    auto src_model = corpus.apps.find(map_source);
    auto tgt_model = corpus.apps.find(map_target);
    if (src_model != corpus.apps.end()) ctx.source_model = &src_model->second;
    if (tgt_model != corpus.apps.end()) ctx.target_model = &tgt_model->second;
    auto src_can = corpus.canonical.find(map_source);
    auto tgt_can = corpus.canonical.find(map_target);
    if (src_can != corpus.canonical.end()) ctx.src_can_map = &src_can->second;
    if (tgt_can != corpus.canonical.end()) ctx.tgt_can_map = &tgt_can->second;

    const fruiter::MapperFn& mapper = fruiter::find_technique(map_technique);
    fruiter::TransferredEvents trans = mapper(ctx, cfg);
    fruiter::GuiMap gm = fruiter::derive_gui_map(
        source_test->events, trans, map_source, map_target, map_technique);
    emit(map_out, fruiter::gui_map_to_json(gm).dump(2) + "\n");
    if (!map_transferred_out.empty()) {
      fruiter::TestCase transferred;
      transferred.app_id = map_target;
      transferred.test_id = map_test;
      transferred.role = fruiter::Role::transferred;
      transferred.events = fruiter::strip_nulls(trans);
      fruiter::write_json_file(map_transferred_out,
                               fruiter::test_case_to_json(transferred));
    }
    return 0;
  }

  if (*eval_fidelity) {
    fruiter::GuiMap gm = fruiter::gui_map_from_json(
        fruiter::load_json_file(fid_guimap), fid_guimap);
    fruiter::CanonicalMap src_map = fruiter::canonical_map_from_json(
        fruiter::load_json_file(fid_src_canmap), fid_src_canmap);
    fruiter::CanonicalMap tgt_map = fruiter::canonical_map_from_json(
        fruiter::load_json_file(fid_tgt_canmap), fid_tgt_canmap);
    std::vector<fruiter::GuiEvent> src_events;
    for (const auto& p : gm.pairs) src_events.push_back(p.src);
    fruiter::FidelitySets sets =
        fruiter::evaluate_fidelity(src_events, gm, src_map, tgt_map);
    json out;
    out["fidelity_sets"] = fruiter::fidelity_sets_to_json(sets);
    out["fidelity_metrics"] =
        fruiter::fidelity_metrics_to_json(fruiter::compute_fidelity_metrics(sets));
    emit(fid_out, out.dump(2) + "\n");
    return 0;
  }

  if (*eval_utility) {
    fruiter::TestCase transferred = fruiter::ingest_events_json(util_transferred);
    fruiter::TestCase ground_truth = fruiter::ingest_events_json(util_gt);
    const auto mode = util_strict ? fruiter::EqualityMode::strict
                                  : fruiter::EqualityMode::lenient;
    fruiter::UtilityMetrics u =
        fruiter::evaluate_utility(transferred, ground_truth, mode);
    emit(util_out, fruiter::utility_metrics_to_json(u).dump(2) + "\n");
    return 0;
  }

  if (*run) {
    const fruiter::BenchmarkPlan plan =
        fruiter::plan_from_json(fruiter::load_json_file(run_plan), run_plan);
    const fruiter::Corpus corpus = fruiter::load_corpus(run_corpus);
    fruiter::RunOptions options;
    options.equality = run_strict ? fruiter::EqualityMode::strict
                                  : fruiter::EqualityMode::lenient;
    options.workers = run_workers;
    fruiter::RunResult result = fruiter::run_benchmark(plan, corpus, options);

    const std::filesystem::path out_dir(run_out);
    fruiter::write_results_csv(result.entries, out_dir / "results.csv");
    json entries = json::array();
    for (const auto& e : result.entries)
      entries.push_back(fruiter::result_entry_to_json(e));
    fruiter::write_json_file(out_dir / "entries.json", entries);
    fruiter::write_text_file(out_dir / "skipped.csv", skipped_csv(result.skipped));
    fruiter::write_json_file(
        out_dir / "manifest.json",
        fruiter::run_manifest(plan, options, run_corpus, result));
    std::cout << "planned " << result.planned << ", entries "
              << result.entries.size() << ", skipped " << result.skipped.size()
              << " -> " << out_dir.string() << "\n";
    return 0;
  }

  if (*report) {
    if (report_aggregate == report_correlate)
      throw fruiter::InputError("choose exactly one of --aggregate / --correlate");
    std::vector<fruiter::ResultRow> rows =
        fruiter::load_results_csv(report_results);
    if (report_aggregate)
      std::cout << fruiter::render_aggregate(
          fruiter::aggregate(rows, report_per_pair), report_per_pair);
    else
      std::cout << fruiter::render_correlation(
          fruiter::correlation_matrix(rows, report_per_technique));
    return 0;
  }

  if (*gen) {
    const fruiter::SyntheticCorpusSpec spec = fruiter::synthetic_spec_from_json(
        fruiter::load_json_file(gen_spec), gen_spec);
    fruiter::Corpus corpus = fruiter::generate_synthetic_corpus(spec);
    fruiter::save_corpus(corpus, gen_out);
    std::cout << "wrote " << corpus.apps.size() << " apps to " << gen_out << "\n";
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_cli(argc, argv);
  } catch (const fruiter::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 2;
  } catch (const fruiter::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
