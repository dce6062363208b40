#pragma once

#include <array>
#include <charconv>
#include <cstdio>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fruiter/core.hpp"
#include "fruiter/errors.hpp"
#include "fruiter/json_io.hpp"
#include "fruiter/stats.hpp"

namespace fruiter {

// ---------------------------------------------------------------------------
// Result rows: the scalar projection of a ResultEntry that the CSV carries.
// ---------------------------------------------------------------------------

struct ResultRow {
  std::string source_app;
  std::string target_app;
  std::string test_id;
  std::string technique;
  std::size_t n_src_events = 0;
  std::size_t n_trans_events = 0;
  std::size_t n_gt_events = 0;
  std::size_t correct = 0;
  std::size_t incorrect = 0;
  std::size_t missed = 0;
  std::size_t non_exist = 0;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;
  std::optional<double> accuracy;
  std::optional<double> precision;
  std::optional<double> recall;
  std::size_t effort = 0;
  double reduction = 0.0;

  bool operator==(const ResultRow&) const = default;
};

inline ResultRow to_row(const ResultEntry& e) {
  ResultRow r;
  r.source_app = e.source_app;
  r.target_app = e.target_app;
  r.test_id = e.test_id;
  r.technique = e.technique;
  r.n_src_events = e.source_events.size();
  r.n_trans_events = e.transferred_events.size();
  r.n_gt_events = e.gt_events.size();
  r.correct = e.fidelity_sets.correct.size();
  r.incorrect = e.fidelity_sets.incorrect.size();
  r.missed = e.fidelity_sets.missed.size();
  r.non_exist = e.fidelity_sets.non_exist.size();
  r.tp = e.fidelity_metrics.tp;
  r.fp = e.fidelity_metrics.fp;
  r.tn = e.fidelity_metrics.tn;
  r.fn = e.fidelity_metrics.fn;
  r.accuracy = e.fidelity_metrics.accuracy;
  r.precision = e.fidelity_metrics.precision;
  r.recall = e.fidelity_metrics.recall;
  r.effort = e.utility_metrics.effort;
  r.reduction = e.utility_metrics.reduction;
  return r;
}

inline std::vector<ResultRow> to_rows(const std::vector<ResultEntry>& entries) {
  std::vector<ResultRow> rows;
  rows.reserve(entries.size());
  for (const auto& e : entries) rows.push_back(to_row(e));
  return rows;
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

inline constexpr const char* kResultsCsvHeader =
    "source_app,target_app,test_id,technique,n_src_events,n_trans_events,"
    "n_gt_events,correct,incorrect,missed,non_exist,tp,fp,tn,fn,accuracy,"
    "precision,recall,effort,reduction";

namespace detail {

// Shortest decimal that round-trips the double exactly.
inline std::string format_double(double value) {
  std::array<char, 64> buf;
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), ptr);
}

inline std::string format_ratio(const std::optional<double>& value) {
  return value ? format_double(*value) : std::string();
}

inline void check_csv_field(const std::string& value) {
  if (value.find_first_of(",\n\r") != std::string::npos)
    throw InputError("CSV field contains a separator character: '" + value +
                     "'");
}

inline double parse_double(const std::string& field, const std::string& ctx) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size())
    throw SchemaError(ctx + ": malformed number '" + field + "'");
  return value;
}

inline std::size_t parse_count(const std::string& field, const std::string& ctx) {
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size())
    throw SchemaError(ctx + ": malformed count '" + field + "'");
  return value;
}

}  // namespace detail

inline std::string results_csv(const std::vector<ResultRow>& rows) {
  std::string out(kResultsCsvHeader);
  out.push_back('\n');
  for (const auto& r : rows) {
    for (const auto* field : {&r.source_app, &r.target_app, &r.test_id, &r.technique})
      detail::check_csv_field(*field);
    out += r.source_app + ',' + r.target_app + ',' + r.test_id + ',' +
           r.technique + ',';
    out += std::to_string(r.n_src_events) + ',' +
           std::to_string(r.n_trans_events) + ',' +
           std::to_string(r.n_gt_events) + ',';
    out += std::to_string(r.correct) + ',' + std::to_string(r.incorrect) + ',' +
           std::to_string(r.missed) + ',' + std::to_string(r.non_exist) + ',';
    out += std::to_string(r.tp) + ',' + std::to_string(r.fp) + ',' +
           std::to_string(r.tn) + ',' + std::to_string(r.fn) + ',';
    out += detail::format_ratio(r.accuracy) + ',' +
           detail::format_ratio(r.precision) + ',' +
           detail::format_ratio(r.recall) + ',';
    out += std::to_string(r.effort) + ',' + detail::format_double(r.reduction);
    out.push_back('\n');
  }
  return out;
}

// Emits one CSV row per entry in plan order; undefined ratios serialize as
// empty fields, never "0".
inline void write_results_csv(const std::vector<ResultEntry>& entries,
                              const std::filesystem::path& path) {
  write_text_file(path, results_csv(to_rows(entries)));
}

inline std::vector<ResultRow> parse_results_csv(const std::string& text,
                                                const std::string& ctx = "results.csv") {
  std::vector<ResultRow> rows;
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line))
    throw SchemaError(ctx + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kResultsCsvHeader)
    throw SchemaError(ctx + ": unexpected header '" + line + "'");
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      std::size_t comma = line.find(',', start);
      if (comma == std::string::npos) {
        fields.push_back(line.substr(start));
        break;
      }
      fields.push_back(line.substr(start, comma - start));
      start = comma + 1;
    }
    const std::string rctx = ctx + ":" + std::to_string(line_no);
    if (fields.size() != 20)
      throw SchemaError(rctx + ": expected 20 fields, got " +
                        std::to_string(fields.size()));
    ResultRow r;
    r.source_app = fields[0];
    r.target_app = fields[1];
    r.test_id = fields[2];
    r.technique = fields[3];
    r.n_src_events = detail::parse_count(fields[4], rctx);
    r.n_trans_events = detail::parse_count(fields[5], rctx);
    r.n_gt_events = detail::parse_count(fields[6], rctx);
    r.correct = detail::parse_count(fields[7], rctx);
    r.incorrect = detail::parse_count(fields[8], rctx);
    r.missed = detail::parse_count(fields[9], rctx);
    r.non_exist = detail::parse_count(fields[10], rctx);
    r.tp = detail::parse_count(fields[11], rctx);
    r.fp = detail::parse_count(fields[12], rctx);
    r.tn = detail::parse_count(fields[13], rctx);
    r.fn = detail::parse_count(fields[14], rctx);
    r.accuracy = fields[15].empty()
                     ? std::nullopt
                     : std::optional<double>(detail::parse_double(fields[15], rctx));
    r.precision = fields[16].empty()
                      ? std::nullopt
                      : std::optional<double>(detail::parse_double(fields[16], rctx));
    r.recall = fields[17].empty()
                   ? std::nullopt
                   : std::optional<double>(detail::parse_double(fields[17], rctx));
    r.effort = detail::parse_count(fields[18], rctx);
    r.reduction = detail::parse_double(fields[19], rctx);
    rows.push_back(std::move(r));
  }
  return rows;
}

inline std::vector<ResultRow> load_results_csv(const std::filesystem::path& path) {
  return parse_results_csv(read_text_file(path), path.string());
}

// ---------------------------------------------------------------------------
// Aggregation
// ---------------------------------------------------------------------------

struct AggregateCell {
  std::optional<double> mean;
  std::size_t used = 0;
  std::size_t skipped = 0;  // undefined values dropped from the mean
};

struct TechniqueAggregate {
  std::string technique;
  std::size_t entries = 0;
  AggregateCell accuracy;
  AggregateCell precision;
  AggregateCell recall;
  AggregateCell effort;
  AggregateCell reduction;
};

namespace detail {

inline AggregateCell cell_from(const std::vector<std::optional<double>>& values) {
  MeanResult m = mean_defined(values);
  return {m.mean, m.used, m.skipped};
}

}  // namespace detail

// Per-technique arithmetic means over transfers, skipping undefined values.
// With per_pair set, values are first averaged within each (source, target)
// app pair and the pair means are then averaged.
inline std::vector<TechniqueAggregate> aggregate(
    const std::vector<ResultRow>& rows, bool per_pair = false) {
  std::map<std::string, std::vector<const ResultRow*>> by_technique;
  for (const auto& r : rows) by_technique[r.technique].push_back(&r);

  std::vector<TechniqueAggregate> out;
  for (const auto& [technique, technique_rows] : by_technique) {
    TechniqueAggregate agg;
    agg.technique = technique;
    agg.entries = technique_rows.size();

    auto collect = [&](auto&& get) -> std::vector<std::optional<double>> {
      if (!per_pair) {
        std::vector<std::optional<double>> values;
        for (const auto* r : technique_rows) values.push_back(get(*r));
        return values;
      }
      std::map<std::pair<std::string, std::string>,
               std::vector<std::optional<double>>>
          pairs;
      for (const auto* r : technique_rows)
        pairs[{r->source_app, r->target_app}].push_back(get(*r));
      std::vector<std::optional<double>> pair_means;
      for (const auto& [key, values] : pairs)
        pair_means.push_back(mean_defined(values).mean);
      return pair_means;
    };

    agg.accuracy = detail::cell_from(collect([](const ResultRow& r) { return r.accuracy; }));
    agg.precision = detail::cell_from(collect([](const ResultRow& r) { return r.precision; }));
    agg.recall = detail::cell_from(collect([](const ResultRow& r) { return r.recall; }));
    agg.effort = detail::cell_from(collect([](const ResultRow& r) {
      return std::optional<double>(static_cast<double>(r.effort));
    }));
    agg.reduction = detail::cell_from(collect([](const ResultRow& r) {
      return std::optional<double>(r.reduction);
    }));
    out.push_back(std::move(agg));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Fidelity x utility correlation matrix
// ---------------------------------------------------------------------------

inline constexpr std::array<const char*, 7> kFidelityMetricNames = {
    "tp", "fp", "tn", "fn", "accuracy", "precision", "recall"};
inline constexpr std::array<const char*, 2> kUtilityMetricNames = {"effort",
                                                                   "reduction"};

struct CorrelationMatrix {
  // cells[f][u]: fidelity metric f vs utility metric u
  std::array<std::array<std::optional<double>, 2>, 7> cells;
  std::size_t entries = 0;
};

namespace detail {

inline std::optional<double> fidelity_value(const ResultRow& r, std::size_t i) {
  switch (i) {
    case 0: return static_cast<double>(r.tp);
    case 1: return static_cast<double>(r.fp);
    case 2: return static_cast<double>(r.tn);
    case 3: return static_cast<double>(r.fn);
    case 4: return r.accuracy;
    case 5: return r.precision;
    default: return r.recall;
  }
}

inline double utility_value(const ResultRow& r, std::size_t i) {
  return i == 0 ? static_cast<double>(r.effort) : r.reduction;
}

}  // namespace detail

namespace detail {

struct CorrelationPoint {
  std::array<std::optional<double>, 7> fidelity;
  std::array<std::optional<double>, 2> utility;
};

}  // namespace detail

// Pairwise Pearson correlations between the seven fidelity metrics and the
// two utility metrics. Points are per result entry; pairs with an undefined
// member are dropped per cell. With per_technique set, each technique's
// means over its entries form one point instead.
inline CorrelationMatrix correlation_matrix(const std::vector<ResultRow>& rows,
                                            bool per_technique = false) {
  if (rows.size() < 2)
    throw InputError("correlation requires at least 2 result entries, got " +
                     std::to_string(rows.size()));

  std::vector<detail::CorrelationPoint> points;
  if (!per_technique) {
    points.reserve(rows.size());
    for (const auto& r : rows) {
      detail::CorrelationPoint p;
      for (std::size_t f = 0; f < 7; ++f)
        p.fidelity[f] = detail::fidelity_value(r, f);
      for (std::size_t u = 0; u < 2; ++u)
        p.utility[u] = detail::utility_value(r, u);
      points.push_back(std::move(p));
    }
  } else {
    std::map<std::string, std::vector<const ResultRow*>> by_technique;
    for (const auto& r : rows) by_technique[r.technique].push_back(&r);
    if (by_technique.size() < 2)
      throw InputError("per-technique correlation requires at least 2 techniques");
    for (const auto& [technique, trows] : by_technique) {
      detail::CorrelationPoint p;
      for (std::size_t f = 0; f < 7; ++f) {
        std::vector<std::optional<double>> values;
        for (const auto* r : trows) values.push_back(detail::fidelity_value(*r, f));
        p.fidelity[f] = mean_defined(values).mean;
      }
      for (std::size_t u = 0; u < 2; ++u) {
        std::vector<std::optional<double>> values;
        for (const auto* r : trows)
          values.push_back(std::optional<double>(detail::utility_value(*r, u)));
        p.utility[u] = mean_defined(values).mean;
      }
      points.push_back(std::move(p));
    }
  }

  CorrelationMatrix matrix;
  matrix.entries = points.size();
  for (std::size_t f = 0; f < kFidelityMetricNames.size(); ++f) {
    for (std::size_t u = 0; u < kUtilityMetricNames.size(); ++u) {
      std::vector<std::optional<double>> xs, ys;
      xs.reserve(points.size());
      ys.reserve(points.size());
      for (const auto& p : points) {
        xs.push_back(p.fidelity[f]);
        ys.push_back(p.utility[u]);
      }
      matrix.cells[f][u] = pearson(xs, ys);
    }
  }
  return matrix;
}

// ---------------------------------------------------------------------------
// Plain-text rendering for the CLI
// ---------------------------------------------------------------------------

namespace detail {

inline std::string render_cell(const AggregateCell& cell) {
  if (!cell.mean) return "undefined";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", *cell.mean);
  std::string s(buf);
  if (cell.skipped > 0) s += " (skipped " + std::to_string(cell.skipped) + ")";
  return s;
}

}  // namespace detail

inline std::string render_aggregate(const std::vector<TechniqueAggregate>& aggs,
                                    bool per_pair = false) {
  std::ostringstream out;
  out << "technique | entries | accuracy | precision | recall | effort | reduction\n";
  for (const auto& a : aggs) {
    out << a.technique << " | " << a.entries << " | "
        << detail::render_cell(a.accuracy) << " | "
        << detail::render_cell(a.precision) << " | "
        << detail::render_cell(a.recall) << " | "
        << detail::render_cell(a.effort) << " | "
        << detail::render_cell(a.reduction) << "\n";
  }
  out << "# means are unweighted over "
      << (per_pair ? "app pairs (per-pair means first)" : "transfers")
      << "; undefined values are skipped, never counted as 0 or 1\n";
  return out.str();
}

inline std::string render_correlation(const CorrelationMatrix& matrix) {
  std::ostringstream out;
  out << "fidelity \\ utility | effort | reduction\n";
  for (std::size_t f = 0; f < kFidelityMetricNames.size(); ++f) {
    out << kFidelityMetricNames[f];
    for (std::size_t u = 0; u < kUtilityMetricNames.size(); ++u) {
      const auto& cell = matrix.cells[f][u];
      if (cell) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.6f", *cell);
        out << " | " << buf;
      } else {
        out << " | undefined";
      }
    }
    out << "\n";
  }
  out << "# " << matrix.entries
      << " points; pairs with an undefined member dropped per cell; "
         "coefficient undefined on zero variance or fewer than 2 pairs\n";
  return out.str();
}

}  // namespace fruiter
