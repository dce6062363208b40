#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <vector>

#include "fruiter/core.hpp"
#include "fruiter/errors.hpp"

namespace fruiter {

// Event equality for edit-distance purposes. Lenient (the default) compares
// locator and action and ignores input, since ground-truth inputs such as
// credentials are arbitrary test data. Strict compares the full triple.
enum class EqualityMode { lenient, strict };

inline const char* equality_mode_name(EqualityMode m) {
  return m == EqualityMode::lenient ? "lenient" : "strict";
}

inline bool event_equal(const GuiEvent& a, const GuiEvent& b,
                        EqualityMode mode = EqualityMode::lenient) {
  if (a.locator != b.locator || a.action != b.action) return false;
  return mode == EqualityMode::lenient || a.input == b.input;
}

// Unit-cost Levenshtein distance between event sequences (insertion,
// deletion, substitution), computed with the two-row dynamic program.
inline std::size_t effort(const std::vector<GuiEvent>& transferred,
                          const std::vector<GuiEvent>& ground_truth,
                          EqualityMode mode = EqualityMode::lenient) {
  const std::size_t m = transferred.size();
  const std::size_t n = ground_truth.size();
  std::vector<std::size_t> prev(n + 1), cur(n + 1);
  std::iota(prev.begin(), prev.end(), std::size_t{0});
  for (std::size_t i = 1; i <= m; ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= n; ++j) {
      const std::size_t subst =
          prev[j - 1] +
          (event_equal(transferred[i - 1], ground_truth[j - 1], mode) ? 0 : 1);
      cur[j] = std::min({subst, prev[j] + 1, cur[j - 1] + 1});
    }
    std::swap(prev, cur);
  }
  return prev[n];
}

// reduction = (gt_length - effort) / gt_length; negative when fixing the
// transfer takes more steps than writing the ground truth from scratch.
inline double reduction(std::size_t gt_length, std::size_t effort_value) {
  if (gt_length == 0)
    throw InputError("ground-truth test must be non-empty");
  return (static_cast<double>(gt_length) - static_cast<double>(effort_value)) /
         static_cast<double>(gt_length);
}

inline UtilityMetrics evaluate_utility(const TestCase& transferred,
                                       const TestCase& ground_truth,
                                       EqualityMode mode = EqualityMode::lenient) {
  if (ground_truth.role != Role::ground_truth)
    throw InputError("test '" + ground_truth.app_id + "/" +
                     ground_truth.test_id + "' does not have role ground_truth");
  if (ground_truth.events.empty())
    throw InputError("ground-truth test '" + ground_truth.app_id + "/" +
                     ground_truth.test_id + "' is empty");
  UtilityMetrics u;
  u.gt_length = ground_truth.events.size();
  u.effort = effort(transferred.events, ground_truth.events, mode);
  u.reduction = reduction(u.gt_length, u.effort);
  return u;
}

// Multiple acceptable ground truths: reports the metrics of the one needing
// minimum effort; ties keep the earliest in list order.
inline UtilityMetrics evaluate_utility_best_of(
    const TestCase& transferred, const std::vector<TestCase>& ground_truths,
    EqualityMode mode = EqualityMode::lenient) {
  if (ground_truths.empty())
    throw InputError("no acceptable ground-truth tests supplied");
  UtilityMetrics best;
  bool have = false;
  for (const auto& gt : ground_truths) {
    UtilityMetrics u = evaluate_utility(transferred, gt, mode);
    if (!have || u.effort < best.effort) {
      best = u;
      have = true;
    }
  }
  return best;
}

}  // namespace fruiter
