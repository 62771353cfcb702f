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

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "qkpca/csv.hpp"
#include "qkpca/datasets.hpp"
#include "qkpca/error.hpp"
#include "qkpca/feature_map.hpp"
#include "qkpca/kernels.hpp"
#include "qkpca/matrix.hpp"
#include "qkpca/rng.hpp"

namespace qkpca {

/// SPSA settings for alignment training.
struct TrainConfig {
  int iterations = 100;
  double spsa_a = 0.1;
  double spsa_c = 0.1;
  double spsa_alpha = 0.602;
  double spsa_gamma = 0.101;
  /// Rows per alignment evaluation; nullopt uses the full data every step.
  std::optional<std::size_t> minibatch = 100;
  std::uint64_t seed = 0;

  void validate() const {
    if (iterations < 1) {
      throw ConfigError("iterations must be >= 1, got " + std::to_string(iterations));
    }
    if (!(spsa_a > 0.0) || !(spsa_c > 0.0)) throw ConfigError("spsa_a and spsa_c must be > 0");
    if (!std::isfinite(spsa_alpha) || !std::isfinite(spsa_gamma)) {
      throw ConfigError("spsa exponents must be finite");
    }
    if (minibatch && *minibatch < 2) throw ConfigError("minibatch must be >= 2 when set");
  }

  void validate(std::size_t n) const {
    validate();
    if (minibatch && *minibatch > n) {
      throw ConfigError("minibatch " + std::to_string(*minibatch) + " exceeds sample count " +
                        std::to_string(n));
    }
  }
};

inline void to_json(nlohmann::json& j, const TrainConfig& c) {
  j = nlohmann::json{{"iterations", c.iterations}, {"spsa_a", c.spsa_a},
                     {"spsa_c", c.spsa_c},         {"spsa_alpha", c.spsa_alpha},
                     {"spsa_gamma", c.spsa_gamma}, {"seed", c.seed}};
  j["minibatch"] = c.minibatch ? nlohmann::json(*c.minibatch) : nlohmann::json(nullptr);
}

inline void from_json(const nlohmann::json& j, TrainConfig& c) {
  TrainConfig d;
  c.iterations = j.value("iterations", d.iterations);
  c.spsa_a = j.value("spsa_a", d.spsa_a);
  c.spsa_c = j.value("spsa_c", d.spsa_c);
  c.spsa_alpha = j.value("spsa_alpha", d.spsa_alpha);
  c.spsa_gamma = j.value("spsa_gamma", d.spsa_gamma);
  c.seed = j.value("seed", d.seed);
  c.minibatch = d.minibatch;
  if (j.contains("minibatch")) {
    if (j.at("minibatch").is_null()) {
      c.minibatch.reset();
    } else {
      c.minibatch = j.at("minibatch").get<std::size_t>();
    }
  }
}

struct TrainHistory {
  /// Minibatch alignment after each update, one entry per iteration.
  std::vector<double> alignments;
  std::vector<double> theta_start;
  std::vector<double> theta_end;
  /// Full-data alignment before and after training.
  double initial_alignment = 0.0;
  double final_alignment = 0.0;

  bool operator==(const TrainHistory&) const = default;

  /// CSV with header iteration,alignment (1-based iterations).
  std::string to_csv() const {
    std::string out = "iteration,alignment\n";
    for (std::size_t i = 0; i < alignments.size(); ++i) {
      out += std::to_string(i + 1) + "," + csv::format_double(alignments[i]) + "\n";
    }
    return out;
  }
};

struct TrainResult {
  SaqkParams params;
  TrainHistory history;
};

/// Alignment of the SAQK Gram matrix on `x` for the given parameters.
inline double saqk_alignment(const Matrix& x, std::span<const int> labels, const SaqkParams& params,
                             int threads = 1) {
  const auto k = quantum_kernel(x, FeatureMapSpec::saqk(params), threads);
  return alignment(k.values, labels);
}

/// Maximizes kernel-target alignment over the SAQK rotation multipliers with SPSA.
///
/// Step k (1-based): a_k = a / k^alpha, c_k = c / k^gamma, Delta in {-1,+1}^d,
/// g = (A(theta + c_k Delta) - A(theta - c_k Delta)) / (2 c_k) * Delta,
/// theta <- theta + a_k g. Each step draws a fresh minibatch (containing at
/// least two classes) and then Delta from one seeded stream. theta starts at ones.
inline TrainResult train_saqk(const Matrix& x, std::span<const int> labels,
                              const TrainConfig& config, int threads = 1) {
  const auto n = static_cast<std::size_t>(x.rows());
  if (labels.size() != n) {
    throw DimensionError("training data has " + std::to_string(n) + " rows but " +
                         std::to_string(labels.size()) + " labels");
  }
  config.validate(n);
  if (n < 4) throw TrainingError("training needs at least 4 samples, got " + std::to_string(n));
  bool two_classes = false;
  for (std::size_t i = 1; i < n && !two_classes; ++i) two_classes = labels[i] != labels[0];
  if (!two_classes) throw TrainingError("training needs at least two classes in the labels");

  const auto d = static_cast<std::size_t>(x.cols());
  SaqkParams theta = SaqkParams::ones(d);
  FeatureMapSpec::saqk(theta).validate(d);

  TrainResult result;
  auto& hist = result.history;
  hist.theta_start = theta.theta;
  hist.initial_alignment = saqk_alignment(x, labels, theta, threads);
  hist.alignments.reserve(static_cast<std::size_t>(config.iterations));

  auto checked = [](double value, int step, const char* what) {
    if (!std::isfinite(value)) {
      throw TrainingError("non-finite " + std::string(what) + " at SPSA step " +
                          std::to_string(step));
    }
    return value;
  };

  Rng rng(config.seed);
  Matrix batch_x = x;
  std::vector<int> batch_y(labels.begin(), labels.end());
  for (int step = 1; step <= config.iterations; ++step) {
    if (config.minibatch) {
      bool ok = false;
      for (int attempt = 0; attempt < 100 && !ok; ++attempt) {
        auto rows = rng.sample_indices(n, *config.minibatch);
        batch_y = take(labels, rows);
        for (std::size_t i = 1; i < batch_y.size() && !ok; ++i) ok = batch_y[i] != batch_y[0];
        if (ok) batch_x = take_rows(x, rows);
      }
      if (!ok) throw TrainingError("could not draw a minibatch containing two classes");
    }

    std::vector<double> delta(d);
    for (auto& v : delta) v = rng.sign();

    const double k = static_cast<double>(step);
    const double a_k = config.spsa_a / std::pow(k, config.spsa_alpha);
    const double c_k = config.spsa_c / std::pow(k, config.spsa_gamma);

    SaqkParams plus = theta, minus = theta;
    for (std::size_t i = 0; i < d; ++i) {
      plus.theta[i] += c_k * delta[i];
      minus.theta[i] -= c_k * delta[i];
    }
    const double a_plus = checked(saqk_alignment(batch_x, batch_y, plus, threads), step, "alignment");
    const double a_minus = checked(saqk_alignment(batch_x, batch_y, minus, threads), step, "alignment");
    const double slope = (a_plus - a_minus) / (2.0 * c_k);
    for (std::size_t i = 0; i < d; ++i) {
      theta.theta[i] += a_k * slope * delta[i];
      checked(theta.theta[i], step, "parameter");
    }
    hist.alignments.push_back(
        checked(saqk_alignment(batch_x, batch_y, theta, threads), step, "alignment"));
  }

  hist.theta_end = theta.theta;
  hist.final_alignment = saqk_alignment(x, labels, theta, threads);
  result.params = std::move(theta);
  return result;
}

}  // namespace qkpca
