// Copyright 2026 The qkpca Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "qkpca/error.hpp"

namespace qkpca {

namespace detail {

inline void check_pair(std::span<const int> y_true, std::span<const int> y_pred) {
  if (y_true.size() != y_pred.size()) {
    throw DimensionError("label vectors differ in length: " + std::to_string(y_true.size()) +
                         " vs " + std::to_string(y_pred.size()));
  }
  if (y_true.empty()) throw ArgumentError("metrics need at least one sample");
}

}  // namespace detail

inline double accuracy(std::span<const int> y_true, std::span<const int> y_pred) {
  detail::check_pair(y_true, y_pred);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < y_true.size(); ++i) hits += y_true[i] == y_pred[i];
  return static_cast<double>(hits) / static_cast<double>(y_true.size());
}

/// Unweighted mean of per-class F1 over the union of classes in both vectors.
/// A class with no true and no predicted positives contributes F1 = 0.
inline double f1_macro(std::span<const int> y_true, std::span<const int> y_pred) {
  detail::check_pair(y_true, y_pred);
  std::set<int> classes(y_true.begin(), y_true.end());
  classes.insert(y_pred.begin(), y_pred.end());
  double total = 0.0;
  for (int c : classes) {
    double tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
      const bool t = y_true[i] == c;
      const bool p = y_pred[i] == c;
      tp += t && p;
      fp += !t && p;
      fn += t && !p;
    }
    const double denom = 2.0 * tp + fp + fn;
    total += denom > 0.0 ? 2.0 * tp / denom : 0.0;
  }
  return total / static_cast<double>(classes.size());
}

/// Cohen's kappa (p_o - p_e) / (1 - p_e); defined as 1 when p_e == 1.
inline double cohen_kappa(std::span<const int> y_true, std::span<const int> y_pred) {
  detail::check_pair(y_true, y_pred);
  std::map<int, double> row, col;
  double agree = 0.0;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    row[y_true[i]] += 1.0;
    col[y_pred[i]] += 1.0;
    agree += y_true[i] == y_pred[i];
  }
  const double n = static_cast<double>(y_true.size());
  double expected = 0.0;
  for (const auto& [c, count] : row) {
    if (auto it = col.find(c); it != col.end()) expected += count * it->second;
  }
  const double p_o = agree / n;
  const double p_e = expected / (n * n);
  if (p_e >= 1.0) return 1.0;
  return (p_o - p_e) / (1.0 - p_e);
}

/// Mean relative score loss per reduction step, normalized by the score at the largest dim.
/// Scores are read from the largest dimension downward; positive means loss.
inline double collapse_rate(const std::map<std::size_t, double>& scores_by_dim) {
  if (scores_by_dim.size() < 2) {
    throw ArgumentError("collapse rate needs scores for at least two dimensions");
  }
  const double reference = scores_by_dim.rbegin()->second;
  if (!(reference > 0.0)) {
    throw ArgumentError("collapse rate needs a positive score at the largest dimension");
  }
  double total = 0.0;
  for (auto hi = scores_by_dim.rbegin(), lo = std::next(hi); lo != scores_by_dim.rend(); ++hi, ++lo) {
    total += (hi->second - lo->second) / reference;
  }
  return total / static_cast<double>(scores_by_dim.size() - 1);
}

}  // namespace qkpca
