// Shared test helpers and independent oracles. The oracles deliberately
// avoid the library's code paths: the edit-distance oracle is the textbook
// exponential recursion, the fidelity oracle scans raw entry lists, and the
// pearson oracle uses the computational formula in long double.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fruiter/core.hpp"
#include "fruiter/rng.hpp"

namespace testsupport {

// --- event shorthands -------------------------------------------------------

inline fruiter::GuiEvent ev(std::string locator,
                            fruiter::Action action = fruiter::Action::click) {
  fruiter::GuiEvent e;
  e.locator = std::move(locator);
  e.action = action;
  return e;
}

inline fruiter::GuiEvent ev_keys(std::string locator, std::string input) {
  fruiter::GuiEvent e;
  e.locator = std::move(locator);
  e.action = fruiter::Action::send_keys;
  e.input = std::move(input);
  return e;
}

// --- exponential brute-force edit distance ----------------------------------

namespace detail {

template <typename T>
std::size_t lev_brute_rec(const std::vector<T>& a, std::size_t i,
                          const std::vector<T>& b, std::size_t j) {
  if (i == a.size()) return b.size() - j;
  if (j == b.size()) return a.size() - i;
  if (a[i] == b[j]) return lev_brute_rec(a, i + 1, b, j + 1);
  const std::size_t del = lev_brute_rec(a, i + 1, b, j);
  const std::size_t ins = lev_brute_rec(a, i, b, j + 1);
  const std::size_t sub = lev_brute_rec(a, i + 1, b, j + 1);
  return 1 + std::min(std::min(del, ins), sub);
}

}  // namespace detail

template <typename T>
std::size_t lev_brute(const std::vector<T>& a, const std::vector<T>& b) {
  return detail::lev_brute_rec(a, 0, b, 0);
}

// --- exhaustive fidelity classifier -----------------------------------------

enum class FidelityCase { correct, incorrect, missed, non_exist };

// Classifies one source event directly from the case definitions, scanning
// plain (locator, canonical) entry lists.
inline FidelityCase classify_oracle(
    const std::vector<std::pair<std::string, std::string>>& src_entries,
    const std::vector<std::pair<std::string, std::string>>& tgt_entries,
    const std::string& src_locator,
    const std::optional<std::string>& trans_locator) {
  std::string src_can;
  for (const auto& [loc, can] : src_entries)
    if (loc == src_locator) src_can = can;

  if (trans_locator) {
    std::string trans_can;
    for (const auto& [loc, can] : tgt_entries)
      if (loc == *trans_locator) trans_can = can;
    return trans_can == src_can ? FidelityCase::correct
                                : FidelityCase::incorrect;
  }
  for (const auto& [loc, can] : tgt_entries)
    if (can == src_can) return FidelityCase::missed;
  return FidelityCase::non_exist;
}

// --- random small fidelity instances -----------------------------------------

struct FidelityInstance {
  std::vector<fruiter::GuiEvent> src;
  std::vector<std::optional<fruiter::GuiEvent>> trans;
  std::vector<std::pair<std::string, std::string>> src_entries;
  std::vector<std::pair<std::string, std::string>> tgt_entries;
  fruiter::CanonicalMap src_map;
  fruiter::CanonicalMap tgt_map;
};

// Instances stay small (<= 5 source events, <= 5 canonical labels) so the
// exhaustive classifier stays trivially checkable.
inline FidelityInstance random_fidelity_instance(fruiter::SplitMix64& rng) {
  FidelityInstance inst;
  const std::size_t n_labels = 1 + rng.next_below(5);
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n_labels; ++i)
    labels.push_back("L" + std::to_string(i));

  const std::size_t n_src_locs = 1 + rng.next_below(5);
  for (std::size_t i = 0; i < n_src_locs; ++i)
    inst.src_entries.push_back(
        {"s" + std::to_string(i), labels[rng.next_below(n_labels)]});
  const std::size_t n_tgt_locs = rng.next_below(6);
  for (std::size_t i = 0; i < n_tgt_locs; ++i)
    inst.tgt_entries.push_back(
        {"t" + std::to_string(i), labels[rng.next_below(n_labels)]});

  inst.src_map.app_id = "s";
  for (const auto& [loc, can] : inst.src_entries) inst.src_map.entries[loc] = can;
  inst.tgt_map.app_id = "t";
  for (const auto& [loc, can] : inst.tgt_entries) inst.tgt_map.entries[loc] = can;

  const std::size_t n_events = 1 + rng.next_below(5);
  for (std::size_t i = 0; i < n_events; ++i) {
    inst.src.push_back(ev(inst.src_entries[rng.next_below(n_src_locs)].first));
    if (n_tgt_locs == 0 || rng.next_below(3) == 0)
      inst.trans.push_back(std::nullopt);
    else
      inst.trans.push_back(
          ev(inst.tgt_entries[rng.next_below(n_tgt_locs)].first));
  }
  return inst;
}

// --- independent pearson (computational formula, long double) ---------------

inline std::optional<double> pearson_oracle(const std::vector<double>& xs,
                                            const std::vector<double>& ys) {
  const std::size_t n = xs.size();
  if (n < 2) return std::nullopt;
  long double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += static_cast<long double>(xs[i]) * xs[i];
    syy += static_cast<long double>(ys[i]) * ys[i];
    sxy += static_cast<long double>(xs[i]) * ys[i];
  }
  const long double nn = static_cast<long double>(n);
  const long double var_x = nn * sxx - sx * sx;
  const long double var_y = nn * syy - sy * sy;
  if (var_x <= 0 || var_y <= 0) return std::nullopt;
  return static_cast<double>((nn * sxy - sx * sy) /
                             (std::sqrt(var_x) * std::sqrt(var_y)));
}

// --- in-memory copy of the committed wish/etsy fixture -----------------------

inline fruiter::Corpus wish_etsy_corpus() {
  using fruiter::Action;
  fruiter::Corpus corpus;

  fruiter::AppModel wish;
  wish.app_id = "wish";
  wish.main_activity = "a1";
  wish.activities = {"a1", "a_home"};
  wish.events_by_activity["a1"] = {
      {ev_keys("a1-1", "user@example.com"), "a1", {"email", "address"}},
      {ev_keys("a1-2", "hunter2"), "a1", {"password"}},
      {ev("a1-3"), "a_home", {"sign", "in"}},
  };

  fruiter::AppModel etsy;
  etsy.app_id = "etsy";
  etsy.main_activity = "b1";
  etsy.activities = {"b1", "b2", "b3", "b_home"};
  etsy.events_by_activity["b1"] = {{ev("b1-1"), "b2", {"sign", "in"}}};
  etsy.events_by_activity["b2"] = {{ev("b2-1"), "b3", {"continue", "with", "email"}}};
  etsy.events_by_activity["b3"] = {
      {ev_keys("b3-1", "user@example.com"), "b3", {"email", "username"}},
      {ev_keys("b3-2", "hunter2"), "b3", {"password"}},
      {ev("b3-3"), "b_home", {"sign", "in"}},
  };

  fruiter::CanonicalMap wish_map;
  wish_map.app_id = "wish";
  wish_map.entries = {{"a1-1", "signin_email"},
                      {"a1-2", "signin_password"},
                      {"a1-3", "signin_button"}};

  fruiter::CanonicalMap etsy_map;
  etsy_map.app_id = "etsy";
  etsy_map.entries = {{"b1-1", "signin_entry"},
                      {"b2-1", "signin_continue_email"},
                      {"b3-1", "signin_email"},
                      {"b3-2", "signin_password"},
                      {"b3-3", "signin_button"}};

  fruiter::TestCase wish_signin;
  wish_signin.app_id = "wish";
  wish_signin.test_id = "signin";
  wish_signin.role = fruiter::Role::source;
  wish_signin.events = {ev_keys("a1-1", "user@example.com"),
                        ev_keys("a1-2", "hunter2"), ev("a1-3")};

  fruiter::TestCase etsy_signin;
  etsy_signin.app_id = "etsy";
  etsy_signin.test_id = "signin";
  etsy_signin.role = fruiter::Role::source;
  etsy_signin.events = {ev("b1-1"), ev("b2-1"),
                        ev_keys("b3-1", "user@example.com"),
                        ev_keys("b3-2", "hunter2"), ev("b3-3")};

  corpus.apps["wish"] = std::move(wish);
  corpus.apps["etsy"] = std::move(etsy);
  corpus.canonical["wish"] = std::move(wish_map);
  corpus.canonical["etsy"] = std::move(etsy_map);
  corpus.tests["wish"]["signin"] = std::move(wish_signin);
  corpus.tests["etsy"]["signin"] = std::move(etsy_signin);
  return corpus;
}

}  // namespace testsupport
