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
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qkpca/csv.hpp"
#include "qkpca/error.hpp"
#include "qkpca/matrix.hpp"
#include "qkpca/rng.hpp"

namespace qkpca {

/// Labelled feature table. Labels are contiguous ids 0..num_classes()-1.
struct Dataset {
  Matrix features;
  std::vector<int> labels;
  /// Original label text per class id; may be empty.
  std::vector<std::string> class_names;
  /// Names of the feature columns; may be empty.
  std::vector<std::string> feature_names;
  /// Raw response before thresholding (synthetic data only).
  std::vector<double> targets;
  nlohmann::json provenance = nlohmann::json::object();

  std::size_t size() const noexcept { return labels.size(); }
  std::size_t dims() const noexcept { return static_cast<std::size_t>(features.cols()); }

  std::size_t num_classes() const {
    int top = -1;
    for (int y : labels) top = std::max(top, y);
    return static_cast<std::size_t>(top + 1);
  }

  void validate() const {
    if (labels.empty()) throw DataError("dataset has no samples");
    if (static_cast<std::size_t>(features.rows()) != labels.size()) {
      throw DimensionError("dataset has " + std::to_string(features.rows()) + " feature rows but " +
                           std::to_string(labels.size()) + " labels");
    }
    if (!features.allFinite()) throw DataError("dataset contains non-finite feature values");
    for (int y : labels) {
      if (y < 0) throw DataError("negative class id " + std::to_string(y));
    }
  }

  std::string class_name(int id) const {
    if (id >= 0 && static_cast<std::size_t>(id) < class_names.size()) return class_names[id];
    return std::to_string(id);
  }
};

enum class SynthKind { Linear, Nonlinear };

inline std::string_view to_string(SynthKind kind) {
  return kind == SynthKind::Linear ? "linear" : "nonlinear";
}

inline SynthKind parse_synth_kind(std::string_view name) {
  if (name == "linear") return SynthKind::Linear;
  if (name == "nonlinear") return SynthKind::Nonlinear;
  throw ConfigError("unknown synthetic data kind '" + std::string(name) +
                    "' (expected linear or nonlinear)");
}

struct SynthConfig {
  std::size_t n = 300;
  std::size_t d = 7;
  /// Noise variance 0.1.
  double noise_sigma = 0.31622776601683794;
  SynthKind kind = SynthKind::Nonlinear;
  std::uint64_t seed = 0;

  void validate() const {
    if (n < 10) throw ConfigError("synthetic n must be >= 10, got " + std::to_string(n));
    if (d < 1) throw ConfigError("synthetic d must be >= 1");
    if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) {
      throw ConfigError("noise sigma must be finite and >= 0");
    }
  }
};

inline void to_json(nlohmann::json& j, const SynthConfig& c) {
  j = nlohmann::json{{"n", c.n},
                     {"d", c.d},
                     {"noise_sigma", c.noise_sigma},
                     {"kind", std::string(to_string(c.kind))},
                     {"seed", c.seed}};
}

inline void from_json(const nlohmann::json& j, SynthConfig& c) {
  SynthConfig defaults;
  c.n = j.value("n", defaults.n);
  c.d = j.value("d", defaults.d);
  c.noise_sigma = j.value("noise_sigma", defaults.noise_sigma);
  c.kind = parse_synth_kind(j.value("kind", std::string(to_string(defaults.kind))));
  c.seed = j.value("seed", defaults.seed);
}

/// Step labelling: 0 below the threshold 0, 1 otherwise (zero itself maps to 1).
inline int step_label(double response) { return response < 0.0 ? 0 : 1; }

/// Nonlinear response of the projection s = w.x.
inline double nonlinear_response(double s) {
  return std::sin(s) + std::cos(s) + std::exp(-s) + std::log(std::abs(s) + 1.0);
}

/// Column-wise z-score with population variance; constant columns become 0.
inline void standardize_columns(Matrix& x) {
  const double n = static_cast<double>(x.rows());
  if (n == 0.0) return;
  for (Eigen::Index c = 0; c < x.cols(); ++c) {
    const double mean = x.col(c).sum() / n;
    const double var = (x.col(c).array() - mean).square().sum() / n;
    const double sd = std::sqrt(var);
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
      x(r, c) = sd > 0.0 ? (x(r, c) - mean) / sd : 0.0;
    }
  }
}

/// Gaussian low-entropy dataset.
///
/// Draw order from the seeded stream: X row-major, then w, then the noise
/// vector. Labels are thresholded on the raw response, after which the
/// features are standardized.
inline Dataset synthesize(const SynthConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed);
  const auto n = static_cast<Eigen::Index>(cfg.n);
  const auto d = static_cast<Eigen::Index>(cfg.d);

  Matrix x(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) x(i, j) = rng.gaussian();
  }
  std::vector<double> w(cfg.d);
  for (auto& wi : w) wi = rng.gaussian();

  Dataset ds;
  ds.targets.resize(cfg.n);
  ds.labels.resize(cfg.n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double s = 0.0;
    for (Eigen::Index j = 0; j < d; ++j) s += w[static_cast<std::size_t>(j)] * x(i, j);
    const double noise = cfg.noise_sigma * rng.gaussian();
    const double y = (cfg.kind == SynthKind::Linear ? s : nonlinear_response(s)) + noise;
    ds.targets[static_cast<std::size_t>(i)] = y;
    ds.labels[static_cast<std::size_t>(i)] = step_label(y);
  }
  standardize_columns(x);
  ds.features = std::move(x);
  ds.class_names = {"0", "1"};
  for (std::size_t j = 0; j < cfg.d; ++j) ds.feature_names.push_back("x_" + std::to_string(j + 1));
  ds.provenance = {{"source", "synthetic"},
                   {"config", cfg},
                   {"generator", std::string(Rng::kAlgorithm)},
                   {"weights", w}};
  return ds;
}

inline Dataset synth_linear(SynthConfig cfg) {
  cfg.kind = SynthKind::Linear;
  return synthesize(cfg);
}

inline Dataset synth_nonlinear(SynthConfig cfg) {
  cfg.kind = SynthKind::Nonlinear;
  return synthesize(cfg);
}

/// Reads selected numeric feature columns and one label column from a CSV with a header.
/// Labels are mapped to ids in order of first appearance.
inline Dataset load_csa_csv(const std::filesystem::path& path,
                            const std::vector<std::string>& feature_columns,
                            const std::string& label_column) {
  const auto table = csv::read_table(path);
  if (table.rows.empty()) throw DataError("'" + path.string() + "' has no data rows");
  if (feature_columns.empty()) throw ConfigError("no feature columns requested");

  std::vector<std::size_t> cols;
  for (const auto& name : feature_columns) {
    const auto c = table.column(name);
    if (c == csv::Table::npos) {
      throw DataError("missing column '" + name + "' in '" + path.string() + "'");
    }
    cols.push_back(c);
  }
  const auto label_col = table.column(label_column);
  if (label_col == csv::Table::npos) {
    throw DataError("missing label column '" + label_column + "' in '" + path.string() + "'");
  }

  Dataset ds;
  ds.features.resize(static_cast<Eigen::Index>(table.rows.size()),
                     static_cast<Eigen::Index>(cols.size()));
  std::map<std::string, int> ids;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    for (std::size_t k = 0; k < cols.size(); ++k) {
      double v = 0.0;
      if (!csv::parse_double(row[cols[k]], v) || !std::isfinite(v)) {
        throw DataError("non-numeric value '" + row[cols[k]] + "' at row " + std::to_string(r + 1) +
                        ", column '" + feature_columns[k] + "' in '" + path.string() + "'");
      }
      ds.features(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k)) = v;
    }
    const auto& name = row[label_col];
    auto [it, inserted] = ids.emplace(name, static_cast<int>(ds.class_names.size()));
    if (inserted) ds.class_names.push_back(name);
    ds.labels.push_back(it->second);
  }
  ds.feature_names = feature_columns;
  ds.provenance = {{"source", "csv"},
                   {"path", path.string()},
                   {"features", feature_columns},
                   {"label", label_column}};
  return ds;
}

/// Loads a CSV where every column except `label_column` is a feature.
inline Dataset load_labelled_csv(const std::filesystem::path& path,
                                 const std::string& label_column = "label") {
  const auto table = csv::read_table(path);
  std::vector<std::string> features;
  for (const auto& h : table.header) {
    if (h != label_column) features.push_back(h);
  }
  return load_csa_csv(path, features, label_column);
}

/// Per-feature z-score (population variance) followed by an affine rescale to [0, pi].
/// Constant features map to pi/2.
inline Dataset preprocess(const Dataset& ds) {
  Dataset out = ds;
  Matrix& x = out.features;
  const double n = static_cast<double>(x.rows());
  for (Eigen::Index c = 0; c < x.cols(); ++c) {
    const double mean = x.col(c).sum() / n;
    const double sd = std::sqrt((x.col(c).array() - mean).square().sum() / n);
    if (!(sd > 0.0)) {
      x.col(c).setConstant(std::numbers::pi / 2.0);
      continue;
    }
    x.col(c) = ((x.col(c).array() - mean) / sd).matrix();
    const double lo = x.col(c).minCoeff();
    const double hi = x.col(c).maxCoeff();
    if (!(hi > lo)) {
      x.col(c).setConstant(std::numbers::pi / 2.0);
      continue;
    }
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
      x(r, c) = std::clamp((x(r, c) - lo) / (hi - lo) * std::numbers::pi, 0.0, std::numbers::pi);
    }
  }
  out.provenance["preprocess"] = "zscore+minmax[0,pi]";
  return out;
}

struct SplitPlan {
  std::vector<std::size_t> train_indices;
  std::vector<std::size_t> test_indices;
  std::uint64_t seed = 0;
  double train_fraction = 0.8;
  std::vector<std::string> warnings;

  bool operator==(const SplitPlan&) const = default;
};

/// Per-class shuffled split. Each class with >= 2 members sends
/// round(count * (1 - fraction)) samples to test, at least 1 and at most count - 1;
/// singleton classes stay in train and are reported in `warnings`.
inline SplitPlan stratified_split(std::span<const int> labels, double train_fraction,
                                  std::uint64_t seed) {
  if (labels.empty()) throw DataError("cannot split an empty dataset");
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw ConfigError("train fraction must be in (0, 1)");
  }
  std::map<int, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);

  SplitPlan plan;
  plan.seed = seed;
  plan.train_fraction = train_fraction;
  Rng rng(seed);
  for (auto& [label, members] : by_class) {
    const std::size_t count = members.size();
    if (count == 1) {
      plan.train_indices.push_back(members.front());
      plan.warnings.push_back("class " + std::to_string(label) +
                              " has a single member; kept in the training set");
      continue;
    }
    rng.shuffle(std::span<std::size_t>(members));
    auto n_test = static_cast<std::size_t>(
        std::llround(static_cast<double>(count) * (1.0 - train_fraction)));
    n_test = std::clamp<std::size_t>(n_test, 1, count - 1);
    plan.test_indices.insert(plan.test_indices.end(), members.begin(),
                             members.begin() + static_cast<std::ptrdiff_t>(n_test));
    plan.train_indices.insert(plan.train_indices.end(),
                              members.begin() + static_cast<std::ptrdiff_t>(n_test), members.end());
  }
  std::sort(plan.train_indices.begin(), plan.train_indices.end());
  std::sort(plan.test_indices.begin(), plan.test_indices.end());
  return plan;
}

inline SplitPlan stratified_split(const Dataset& ds, double train_fraction, std::uint64_t seed) {
  if (ds.labels.empty()) throw DataError("cannot split an empty dataset");
  return stratified_split(std::span<const int>(ds.labels), train_fraction, seed);
}

/// Row subset of a matrix.
inline Matrix take_rows(const Matrix& x, std::span<const std::size_t> rows) {
  Matrix out(static_cast<Eigen::Index>(rows.size()), x.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) = x.row(static_cast<Eigen::Index>(rows[i]));
  }
  return out;
}

inline std::vector<int> take(std::span<const int> values, std::span<const std::size_t> rows) {
  std::vector<int> out;
  out.reserve(rows.size());
  for (auto r : rows) out.push_back(values[r]);
  return out;
}

/// Writes features + label (class name) as CSV, and the provenance JSON next to it.
inline void write_dataset_csv(const std::filesystem::path& path, const Dataset& ds) {
  std::string out;
  for (std::size_t j = 0; j < ds.dims(); ++j) {
    out += j < ds.feature_names.size() ? ds.feature_names[j] : "x_" + std::to_string(j + 1);
    out.push_back(',');
  }
  out += "label\n";
  for (std::size_t i = 0; i < ds.size(); ++i) {
    for (std::size_t j = 0; j < ds.dims(); ++j) {
      out += csv::format_double(ds.features(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
      out.push_back(',');
    }
    out += ds.class_name(ds.labels[i]);
    out.push_back('\n');
  }
  csv::write_file(path, out);
  auto side = path;
  side.replace_extension(".json");
  csv::write_file(side, ds.provenance.dump(2) + "\n");
}

}  // namespace qkpca
