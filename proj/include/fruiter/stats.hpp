#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "fruiter/errors.hpp"

namespace fruiter {

// Sample Pearson correlation coefficient. Undefined (nullopt) when fewer
// than 2 points remain or either variance is zero.
inline std::optional<double> pearson(const std::vector<double>& xs,
                                     const std::vector<double>& ys) {
  if (xs.size() != ys.size())
    throw InputError("pearson: input lengths differ (" +
                     std::to_string(xs.size()) + " vs " +
                     std::to_string(ys.size()) + ")");
  const std::size_t n = xs.size();
  if (n < 2) return std::nullopt;

  double mean_x = 0.0, mean_y = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mean_x += xs[i];
    mean_y += ys[i];
  }
  mean_x /= static_cast<double>(n);
  mean_y /= static_cast<double>(n);

  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = xs[i] - mean_x;
    const double dy = ys[i] - mean_y;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return std::nullopt;
  return sxy / (std::sqrt(sxx) * std::sqrt(syy));
}

// Missing-value variant: pairs with any undefined member are dropped first.
inline std::optional<double> pearson(
    const std::vector<std::optional<double>>& xs,
    const std::vector<std::optional<double>>& ys) {
  if (xs.size() != ys.size())
    throw InputError("pearson: input lengths differ (" +
                     std::to_string(xs.size()) + " vs " +
                     std::to_string(ys.size()) + ")");
  std::vector<double> x, y;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (xs[i] && ys[i]) {
      x.push_back(*xs[i]);
      y.push_back(*ys[i]);
    }
  }
  return pearson(x, y);
}

// Arithmetic mean over the defined values; counts how many were skipped.
struct MeanResult {
  std::optional<double> mean;
  std::size_t used = 0;
  std::size_t skipped = 0;
};

inline MeanResult mean_defined(const std::vector<std::optional<double>>& values) {
  MeanResult r;
  double sum = 0.0;
  for (const auto& v : values) {
    if (v) {
      sum += *v;
      ++r.used;
    } else {
      ++r.skipped;
    }
  }
  if (r.used > 0) r.mean = sum / static_cast<double>(r.used);
  return r;
}

}  // namespace fruiter
