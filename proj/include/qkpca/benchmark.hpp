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
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "qkpca/classifiers.hpp"
#include "qkpca/csv.hpp"
#include "qkpca/datasets.hpp"
#include "qkpca/error.hpp"
#include "qkpca/matrix.hpp"
#include "qkpca/metrics.hpp"
#include "qkpca/parallel.hpp"

namespace qkpca {

/// kernel name -> reduced dimension -> n x dim coordinates.
using Embeddings = std::map<std::string, std::map<std::size_t, Matrix>>;

enum class Metric { Accuracy, F1Macro, Kappa };

inline constexpr std::array<Metric, 3> kAllMetrics = {Metric::Accuracy, Metric::F1Macro, Metric::Kappa};

inline std::string_view to_string(Metric m) {
  switch (m) {
    case Metric::Accuracy: return "accuracy";
    case Metric::F1Macro: return "f1_macro";
    case Metric::Kappa: return "kappa";
  }
  return "unknown";
}

struct BenchmarkConfig {
  std::vector<ClassifierKind> classifiers;
  int repeats = 10;
  std::uint64_t base_seed = 0;
  double train_fraction = 0.8;
  /// Shared hyperparameters; `seed` is overridden per repeat.
  ClassifierParams params;
  int threads = 1;
};

struct Scores {
  double accuracy = 0.0;
  double f1_macro = 0.0;
  double kappa = 0.0;

  double get(Metric m) const {
    switch (m) {
      case Metric::Accuracy: return accuracy;
      case Metric::F1Macro: return f1_macro;
      case Metric::Kappa: return kappa;
    }
    return 0.0;
  }
};

struct ScoreRecord {
  std::string kernel;
  std::size_t dim = 0;
  ClassifierKind classifier = ClassifierKind::LogisticRegression;
  int repeat = 0;
  Scores scores;
};

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;  // population standard deviation over repeats
};

using CellKey = std::tuple<std::string, std::size_t, ClassifierKind>;

class EvalReport {
 public:
  std::vector<ScoreRecord> records;
  /// Split used in each repeat; shared by every kernel, dim and classifier.
  std::vector<SplitPlan> splits;
  int repeats = 0;
  nlohmann::json config_echo = nlohmann::json::object();

  /// Recomputes aggregates and collapse rates from `records`.
  void aggregate() {
    std::map<CellKey, std::vector<Scores>> grouped;
    for (const auto& r : records) grouped[{r.kernel, r.dim, r.classifier}].push_back(r.scores);
    summary_.clear();
    counts_.clear();
    for (const auto& [key, list] : grouped) {
      counts_[key] = list.size();
      for (Metric m : kAllMetrics) {
        double mean = 0.0;
        for (const auto& s : list) mean += s.get(m);
        mean /= static_cast<double>(list.size());
        double var = 0.0;
        for (const auto& s : list) var += (s.get(m) - mean) * (s.get(m) - mean);
        var /= static_cast<double>(list.size());
        summary_[key][static_cast<std::size_t>(m)] = {mean, std::sqrt(var)};
      }
    }
    collapse_.clear();
    std::map<std::tuple<std::string, ClassifierKind>, std::map<std::size_t, std::array<double, 3>>> by_dim;
    for (const auto& [key, stats] : summary_) {
      auto& slot = by_dim[{std::get<0>(key), std::get<2>(key)}][std::get<1>(key)];
      for (Metric m : kAllMetrics) slot[static_cast<std::size_t>(m)] = stats[static_cast<std::size_t>(m)].mean;
    }
    for (const auto& [key, dims] : by_dim) {
      for (Metric m : kAllMetrics) {
        std::map<std::size_t, double> series;
        for (const auto& [dim, means] : dims) series[dim] = means[static_cast<std::size_t>(m)];
        std::optional<double> rate;
        if (series.size() >= 2 && series.rbegin()->second > 0.0) rate = collapse_rate(series);
        collapse_[{std::get<0>(key), std::get<1>(key), m}] = rate;
      }
    }
  }

  MeanStd summary(const std::string& kernel, std::size_t dim, ClassifierKind clf, Metric m) const {
    const auto it = summary_.find({kernel, dim, clf});
    if (it == summary_.end()) throw ArgumentError("no benchmark cell for " + kernel + "/" + std::to_string(dim));
    return it->second[static_cast<std::size_t>(m)];
  }

  std::size_t count(const std::string& kernel, std::size_t dim, ClassifierKind clf) const {
    const auto it = counts_.find({kernel, dim, clf});
    return it == counts_.end() ? 0 : it->second;
  }

  /// nullopt when fewer than two dims were run or the top-dim score is not positive.
  std::optional<double> collapse(const std::string& kernel, ClassifierKind clf, Metric m) const {
    const auto it = collapse_.find({kernel, clf, m});
    return it == collapse_.end() ? std::nullopt : it->second;
  }

  /// Ensemble classifier with the highest mean accuracy at the largest dimension.
  std::optional<ClassifierKind> best_ensemble(const std::string& kernel) const {
    std::optional<std::size_t> top_dim;
    for (const auto& [key, stats] : summary_) {
      if (std::get<0>(key) == kernel && is_ensemble(std::get<2>(key))) {
        top_dim = std::max(top_dim.value_or(0), std::get<1>(key));
      }
    }
    if (!top_dim) return std::nullopt;
    std::optional<ClassifierKind> best;
    double best_acc = -1.0;
    for (const auto& [key, stats] : summary_) {
      if (std::get<0>(key) != kernel || std::get<1>(key) != *top_dim || !is_ensemble(std::get<2>(key))) continue;
      const double acc = stats[static_cast<std::size_t>(Metric::Accuracy)].mean;
      if (acc > best_acc) {
        best_acc = acc;
        best = std::get<2>(key);
      }
    }
    return best;
  }

  /// Tidy CSV: kernel,dim,classifier,repeat,accuracy,f1_macro,kappa.
  std::string to_csv() const {
    std::string out = "kernel,dim,classifier,repeat,accuracy,f1_macro,kappa\n";
    for (const auto& r : records) {
      out += r.kernel + "," + std::to_string(r.dim) + "," + std::string(to_string(r.classifier)) +
             "," + std::to_string(r.repeat) + "," + csv::format_double(r.scores.accuracy) + "," +
             csv::format_double(r.scores.f1_macro) + "," + csv::format_double(r.scores.kappa) + "\n";
    }
    return out;
  }

  nlohmann::json to_json() const {
    nlohmann::json cells = nlohmann::json::array();
    for (const auto& [key, stats] : summary_) {
      nlohmann::json cell{{"kernel", std::get<0>(key)},
                          {"dim", std::get<1>(key)},
                          {"classifier", std::string(to_string(std::get<2>(key)))},
                          {"repeats", counts_.at(key)}};
      for (Metric m : kAllMetrics) {
        const auto& s = stats[static_cast<std::size_t>(m)];
        cell[std::string(to_string(m))] = {{"mean", s.mean}, {"std", s.std}};
      }
      cells.push_back(std::move(cell));
    }
    nlohmann::json collapse = nlohmann::json::array();
    for (const auto& [key, rate] : collapse_) {
      collapse.push_back({{"kernel", std::get<0>(key)},
                          {"classifier", std::string(to_string(std::get<1>(key)))},
                          {"metric", std::string(to_string(std::get<2>(key)))},
                          {"collapse_rate", rate ? nlohmann::json(*rate) : nlohmann::json(nullptr)}});
    }
    nlohmann::json best = nlohmann::json::object();
    std::vector<std::string> kernels;
    for (const auto& [key, stats] : summary_) {
      if (kernels.empty() || kernels.back() != std::get<0>(key)) kernels.push_back(std::get<0>(key));
    }
    for (const auto& k : kernels) {
      const auto b = best_ensemble(k);
      best[k] = b ? nlohmann::json(std::string(to_string(*b))) : nlohmann::json(nullptr);
    }
    return {{"config", config_echo},
            {"repeats", repeats},
            {"cells", std::move(cells)},
            {"collapse_rates", std::move(collapse)},
            {"best_ensemble", std::move(best)}};
  }

 private:
  std::map<CellKey, std::array<MeanStd, 3>> summary_;
  std::map<CellKey, std::size_t> counts_;
  std::map<std::tuple<std::string, ClassifierKind, Metric>, std::optional<double>> collapse_;
};

/// Repeated stratified-split evaluation of every (kernel, dim, classifier) cell.
///
/// Repeat r uses one split seeded with base_seed + r for all cells, so kernels
/// are compared on identical train/test partitions. Ensembles are seeded with
/// the same per-repeat seed.
inline EvalReport run_benchmark(const Embeddings& embeddings, std::span<const int> labels,
                                const BenchmarkConfig& config) {
  if (config.repeats < 1) throw ConfigError("repeats must be >= 1");
  if (config.classifiers.empty()) throw ConfigError("benchmark needs at least one classifier");
  if (embeddings.empty()) throw ConfigError("benchmark needs at least one embedding");
  config.params.validate();
  for (const auto& [kernel, dims] : embeddings) {
    for (const auto& [dim, coords] : dims) {
      if (static_cast<std::size_t>(coords.rows()) != labels.size()) {
        throw DimensionError("embedding " + kernel + "/" + std::to_string(dim) + "D has " +
                             std::to_string(coords.rows()) + " rows, expected " +
                             std::to_string(labels.size()));
      }
    }
  }

  EvalReport report;
  report.repeats = config.repeats;
  for (int r = 0; r < config.repeats; ++r) {
    report.splits.push_back(
        stratified_split(labels, config.train_fraction, config.base_seed + static_cast<std::uint64_t>(r)));
  }

  struct Job {
    const std::string* kernel;
    std::size_t dim;
    const Matrix* coords;
    ClassifierKind classifier;
    int repeat;
  };
  std::vector<Job> jobs;
  for (const auto& [kernel, dims] : embeddings) {
    for (auto it = dims.rbegin(); it != dims.rend(); ++it) {
      for (auto clf : config.classifiers) {
        for (int r = 0; r < config.repeats; ++r) jobs.push_back({&kernel, it->first, &it->second, clf, r});
      }
    }
  }

  report.records.resize(jobs.size());
  parallel_for(jobs.size(), config.threads, [&](std::size_t j) {
    const auto& job = jobs[j];
    const auto& split = report.splits[static_cast<std::size_t>(job.repeat)];
    const Matrix train_x = take_rows(*job.coords, split.train_indices);
    const Matrix test_x = take_rows(*job.coords, split.test_indices);
    const auto train_y = take(labels, split.train_indices);
    const auto test_y = take(labels, split.test_indices);
    ClassifierParams params = config.params;
    params.seed = config.base_seed + static_cast<std::uint64_t>(job.repeat);
    const auto pred = fit_predict(job.classifier, params, train_x, train_y, test_x);
    auto& rec = report.records[j];
    rec.kernel = *job.kernel;
    rec.dim = job.dim;
    rec.classifier = job.classifier;
    rec.repeat = job.repeat;
    rec.scores = {accuracy(test_y, pred), f1_macro(test_y, pred), cohen_kappa(test_y, pred)};
  });

  std::vector<std::string> clf_names;
  for (auto c : config.classifiers) clf_names.emplace_back(to_string(c));
  report.config_echo = {{"classifiers", clf_names},
                        {"repeats", config.repeats},
                        {"base_seed", config.base_seed},
                        {"train_fraction", config.train_fraction}};
  report.aggregate();
  return report;
}

}  // namespace qkpca
