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
#include <limits>
#include <numbers>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qkpca/error.hpp"
#include "qkpca/matrix.hpp"
#include "qkpca/rng.hpp"

namespace qkpca {

enum class ClassifierKind {
  LogisticRegression,
  KNearestNeighbors,
  GaussianNaiveBayes,
  RandomForest,
  ExtraTrees,
};

inline std::string_view to_string(ClassifierKind kind) {
  switch (kind) {
    case ClassifierKind::LogisticRegression: return "lr";
    case ClassifierKind::KNearestNeighbors: return "knn";
    case ClassifierKind::GaussianNaiveBayes: return "nb";
    case ClassifierKind::RandomForest: return "rf";
    case ClassifierKind::ExtraTrees: return "et";
  }
  return "unknown";
}

inline ClassifierKind parse_classifier_kind(std::string_view name) {
  if (name == "lr") return ClassifierKind::LogisticRegression;
  if (name == "knn") return ClassifierKind::KNearestNeighbors;
  if (name == "nb") return ClassifierKind::GaussianNaiveBayes;
  if (name == "rf") return ClassifierKind::RandomForest;
  if (name == "et") return ClassifierKind::ExtraTrees;
  throw ConfigError("unknown classifier '" + std::string(name) + "' (expected lr, knn, nb, rf, et)");
}

inline bool is_ensemble(ClassifierKind kind) {
  return kind == ClassifierKind::RandomForest || kind == ClassifierKind::ExtraTrees;
}

/// Hyperparameters for every classifier kind; each kind reads its own fields.
struct ClassifierParams {
  double lr_c = 1.0;           // inverse L2 strength
  int lr_max_epochs = 200;
  double lr_tol = 1e-4;        // stop when the loss changes by less than this
  std::size_t knn_k = 5;
  double nb_var_smoothing = 1e-9;
  std::size_t n_trees = 100;
  std::uint64_t seed = 0;

  void validate() const {
    if (!(lr_c > 0.0)) throw ConfigError("logistic regression C must be > 0");
    if (lr_max_epochs < 1) throw ConfigError("logistic regression needs >= 1 epoch");
    if (!(lr_tol >= 0.0)) throw ConfigError("logistic regression tolerance must be >= 0");
    if (knn_k < 1) throw ConfigError("knn k must be >= 1");
    if (!(nb_var_smoothing >= 0.0)) throw ConfigError("naive Bayes smoothing must be >= 0");
    if (n_trees < 1) throw ConfigError("ensembles need >= 1 tree");
  }
};

namespace detail {

inline int argmax_lowest(std::span<const double> scores) {
  int best = 0;
  for (std::size_t c = 1; c < scores.size(); ++c) {
    if (scores[c] > scores[static_cast<std::size_t>(best)]) best = static_cast<int>(c);
  }
  return best;
}

inline std::size_t class_count(std::span<const int> y) {
  int top = -1;
  for (int v : y) {
    if (v < 0) throw ArgumentError("class ids must be non-negative");
    top = std::max(top, v);
  }
  return static_cast<std::size_t>(top + 1);
}

}  // namespace detail

/// Multinomial softmax regression with L2 penalty, trained by full-batch
/// gradient descent with backtracking line search.
///
/// Objective: mean cross-entropy + |W|^2 / (2 C n) (bias unpenalized).
class LogisticRegression {
 public:
  explicit LogisticRegression(const ClassifierParams& p = {}) : params_(p) {}

  void fit(const Matrix& x, std::span<const int> y) {
    classes_ = detail::class_count(y);
    const Eigen::Index n = x.rows();
    const Eigen::Index d = x.cols();
    const auto k = static_cast<Eigen::Index>(classes_);
    weights_ = Matrix::Zero(k, d);
    bias_ = Vector::Zero(k);
    Matrix onehot = Matrix::Zero(n, k);
    for (Eigen::Index i = 0; i < n; ++i) onehot(i, y[static_cast<std::size_t>(i)]) = 1.0;
    const double l2 = 1.0 / (params_.lr_c * static_cast<double>(n));

    auto loss_and_grad = [&](const Matrix& w, const Vector& b, Matrix* gw, Vector* gb) {
      Matrix logits = x * w.transpose();
      logits.rowwise() += b.transpose();
      double loss = 0.0;
      Matrix prob(n, k);
      for (Eigen::Index i = 0; i < n; ++i) {
        const double top = logits.row(i).maxCoeff();
        const double z = (logits.row(i).array() - top).exp().sum();
        prob.row(i) = (logits.row(i).array() - top).exp() / z;
        loss -= (logits(i, y[static_cast<std::size_t>(i)]) - top - std::log(z));
      }
      loss = loss / static_cast<double>(n) + 0.5 * l2 * w.squaredNorm();
      if (gw) {
        const Matrix diff = (prob - onehot) / static_cast<double>(n);
        *gw = diff.transpose() * x + l2 * w;
        *gb = diff.colwise().sum().transpose();
      }
      return loss;
    };

    Matrix gw;
    Vector gb;
    double loss = loss_and_grad(weights_, bias_, &gw, &gb);
    double step = 1.0;
    for (int epoch = 0; epoch < params_.lr_max_epochs; ++epoch) {
      const double gnorm2 = gw.squaredNorm() + gb.squaredNorm();
      if (gnorm2 == 0.0) break;
      double next_loss = loss;
      Matrix w_next;
      Vector b_next;
      for (int tries = 0; tries < 60; ++tries) {
        w_next = weights_ - step * gw;
        b_next = bias_ - step * gb;
        next_loss = loss_and_grad(w_next, b_next, nullptr, nullptr);
        if (next_loss <= loss - 0.5 * step * gnorm2) break;
        step *= 0.5;
      }
      if (!(next_loss <= loss)) break;
      weights_ = std::move(w_next);
      bias_ = std::move(b_next);
      const double delta = loss - next_loss;
      loss = loss_and_grad(weights_, bias_, &gw, &gb);
      step *= 2.0;
      if (delta < params_.lr_tol) break;
    }
  }

  std::vector<int> predict(const Matrix& x) const {
    std::vector<int> out(static_cast<std::size_t>(x.rows()));
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      const Vector scores = weights_ * x.row(i).transpose() + bias_;
      out[static_cast<std::size_t>(i)] =
          detail::argmax_lowest(std::span<const double>(scores.data(), classes_));
    }
    return out;
  }

 private:
  ClassifierParams params_;
  std::size_t classes_ = 0;
  Matrix weights_;
  Vector bias_;
};

/// Majority vote among the k nearest training points (Euclidean).
/// Neighbours are ordered by (distance, training index); vote ties go to the lowest class id.
class KNearestNeighbors {
 public:
  explicit KNearestNeighbors(const ClassifierParams& p = {}) : params_(p) {}

  void fit(const Matrix& x, std::span<const int> y) {
    x_ = x;
    y_.assign(y.begin(), y.end());
    classes_ = detail::class_count(y);
  }

  std::vector<int> predict(const Matrix& x) const {
    const std::size_t n = y_.size();
    const std::size_t k = std::min(params_.knn_k, n);
    std::vector<int> out(static_cast<std::size_t>(x.rows()));
    std::vector<std::pair<double, std::size_t>> dist(n);
    std::vector<double> votes(classes_);
    for (Eigen::Index a = 0; a < x.rows(); ++a) {
      for (std::size_t i = 0; i < n; ++i) {
        dist[i] = {(x_.row(static_cast<Eigen::Index>(i)) - x.row(a)).squaredNorm(), i};
      }
      std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
      std::fill(votes.begin(), votes.end(), 0.0);
      for (std::size_t j = 0; j < k; ++j) votes[static_cast<std::size_t>(y_[dist[j].second])] += 1.0;
      out[static_cast<std::size_t>(a)] = detail::argmax_lowest(votes);
    }
    return out;
  }

 private:
  ClassifierParams params_;
  Matrix x_;
  std::vector<int> y_;
  std::size_t classes_ = 0;
};

/// Gaussian naive Bayes with variance smoothing eps = smoothing * max feature variance.
class GaussianNaiveBayes {
 public:
  explicit GaussianNaiveBayes(const ClassifierParams& p = {}) : params_(p) {}

  void fit(const Matrix& x, std::span<const int> y) {
    const std::size_t classes = detail::class_count(y);
    const Eigen::Index d = x.cols();
    const double n = static_cast<double>(x.rows());
    means_ = Matrix::Zero(static_cast<Eigen::Index>(classes), d);
    vars_ = Matrix::Zero(static_cast<Eigen::Index>(classes), d);
    log_prior_.assign(classes, -std::numeric_limits<double>::infinity());
    std::vector<double> counts(classes, 0.0);
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      const auto c = y[static_cast<std::size_t>(i)];
      counts[static_cast<std::size_t>(c)] += 1.0;
      means_.row(c) += x.row(i);
    }
    for (std::size_t c = 0; c < classes; ++c) {
      if (counts[c] > 0.0) means_.row(static_cast<Eigen::Index>(c)) /= counts[c];
    }
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      const auto c = y[static_cast<std::size_t>(i)];
      vars_.row(c) += (x.row(i) - means_.row(c)).array().square().matrix();
    }
    double max_var = 0.0;
    for (Eigen::Index j = 0; j < d; ++j) {
      const double mu = x.col(j).mean();
      max_var = std::max(max_var, (x.col(j).array() - mu).square().sum() / n);
    }
    const double eps = params_.nb_var_smoothing * max_var;
    for (std::size_t c = 0; c < classes; ++c) {
      if (counts[c] == 0.0) continue;
      vars_.row(static_cast<Eigen::Index>(c)) /= counts[c];
      vars_.row(static_cast<Eigen::Index>(c)).array() += eps;
      log_prior_[c] = std::log(counts[c] / n);
    }
  }

  std::vector<int> predict(const Matrix& x) const {
    const std::size_t classes = log_prior_.size();
    std::vector<int> out(static_cast<std::size_t>(x.rows()));
    std::vector<double> score(classes);
    for (Eigen::Index a = 0; a < x.rows(); ++a) {
      for (std::size_t c = 0; c < classes; ++c) {
        if (std::isinf(log_prior_[c])) {
          score[c] = -std::numeric_limits<double>::infinity();
          continue;
        }
        double s = log_prior_[c];
        for (Eigen::Index j = 0; j < x.cols(); ++j) {
          double var = vars_(static_cast<Eigen::Index>(c), j);
          if (!(var > 0.0)) var = std::numeric_limits<double>::min();
          const double diff = x(a, j) - means_(static_cast<Eigen::Index>(c), j);
          s -= 0.5 * (std::log(2.0 * std::numbers::pi * var) + diff * diff / var);
        }
        score[c] = s;
      }
      out[static_cast<std::size_t>(a)] = detail::argmax_lowest(score);
    }
    return out;
  }

 private:
  ClassifierParams params_;
  Matrix means_;
  Matrix vars_;
  std::vector<double> log_prior_;
};

/// Gini classification tree grown to purity.
///
/// At every node the features are visited in a random order; at least
/// `max_features` are examined and the search continues past that budget
/// until some feature yields a valid split. Best-split mode scans midpoints
/// between sorted distinct values; random-split mode draws one threshold
/// uniformly in [min, max) per feature.
class DecisionTree {
 public:
  void fit(const Matrix& x, std::span<const int> y, std::vector<std::size_t> samples,
           std::size_t classes, std::size_t max_features, bool random_splits, Rng& rng) {
    nodes_.clear();
    classes_ = classes;
    build(x, y, samples, max_features, random_splits, rng);
  }

  /// Class distribution of the leaf reached by `row`.
  std::span<const double> leaf_distribution(std::span<const double> row) const {
    std::size_t node = 0;
    while (nodes_[node].feature >= 0) {
      const auto& nd = nodes_[node];
      node = row[static_cast<std::size_t>(nd.feature)] <= nd.threshold ? nd.left : nd.right;
    }
    return nodes_[node].distribution;
  }

  std::size_t node_count() const noexcept { return nodes_.size(); }

 private:
  struct Node {
    int feature = -1;
    double threshold = 0.0;
    std::size_t left = 0;
    std::size_t right = 0;
    std::vector<double> distribution;
  };

  struct Split {
    int feature = -1;
    double threshold = 0.0;
    double impurity = std::numeric_limits<double>::infinity();
  };

  static double gini_sum(std::span<const double> counts, double total) {
    // total * gini = total - sum(c^2) / total
    if (total <= 0.0) return 0.0;
    double sq = 0.0;
    for (double c : counts) sq += c * c;
    return total - sq / total;
  }

  std::size_t build(const Matrix& x, std::span<const int> y, std::vector<std::size_t>& samples,
                    std::size_t max_features, bool random_splits, Rng& rng) {
    const std::size_t id = nodes_.size();
    nodes_.emplace_back();
    std::vector<double> counts(classes_, 0.0);
    for (auto s : samples) counts[static_cast<std::size_t>(y[s])] += 1.0;
    const double total = static_cast<double>(samples.size());

    std::size_t nonzero = 0;
    for (double c : counts) nonzero += c > 0.0;
    if (nonzero <= 1 || samples.size() < 2) {
      make_leaf(id, counts, total);
      return id;
    }

    const Split split = find_split(x, y, samples, max_features, random_splits, rng);
    if (split.feature < 0) {
      make_leaf(id, counts, total);
      return id;
    }

    std::vector<std::size_t> left, right;
    for (auto s : samples) {
      (x(static_cast<Eigen::Index>(s), split.feature) <= split.threshold ? left : right).push_back(s);
    }
    samples.clear();
    samples.shrink_to_fit();
    nodes_[id].feature = split.feature;
    nodes_[id].threshold = split.threshold;
    const std::size_t l = build(x, y, left, max_features, random_splits, rng);
    const std::size_t r = build(x, y, right, max_features, random_splits, rng);
    nodes_[id].left = l;
    nodes_[id].right = r;
    return id;
  }

  void make_leaf(std::size_t id, std::vector<double>& counts, double total) {
    for (double& c : counts) c /= total;
    nodes_[id].distribution = std::move(counts);
  }

  Split find_split(const Matrix& x, std::span<const int> y, const std::vector<std::size_t>& samples,
                   std::size_t max_features, bool random_splits, Rng& rng) const {
    std::vector<int> order(static_cast<std::size_t>(x.cols()));
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(std::span<int>(order));

    Split best;
    std::vector<std::pair<double, int>> column(samples.size());
    std::vector<double> left_counts(classes_), right_counts(classes_);
    const double total = static_cast<double>(samples.size());

    for (std::size_t visited = 0; visited < order.size(); ++visited) {
      if (visited >= max_features && best.feature >= 0) break;
      const int f = order[visited];
      for (std::size_t i = 0; i < samples.size(); ++i) {
        column[i] = {x(static_cast<Eigen::Index>(samples[i]), f), y[samples[i]]};
      }
      if (random_splits) {
        double lo = column[0].first, hi = column[0].first;
        for (const auto& [v, c] : column) {
          lo = std::min(lo, v);
          hi = std::max(hi, v);
        }
        if (!(hi > lo)) continue;
        double t = rng.uniform(lo, hi);
        if (t >= hi) t = lo;
        std::fill(left_counts.begin(), left_counts.end(), 0.0);
        std::fill(right_counts.begin(), right_counts.end(), 0.0);
        double nl = 0.0;
        for (const auto& [v, c] : column) {
          if (v <= t) {
            left_counts[static_cast<std::size_t>(c)] += 1.0;
            nl += 1.0;
          } else {
            right_counts[static_cast<std::size_t>(c)] += 1.0;
          }
        }
        const double imp = gini_sum(left_counts, nl) + gini_sum(right_counts, total - nl);
        if (imp < best.impurity) best = {f, t, imp};
        continue;
      }

      std::sort(column.begin(), column.end());
      if (!(column.back().first > column.front().first)) continue;
      std::fill(left_counts.begin(), left_counts.end(), 0.0);
      std::fill(right_counts.begin(), right_counts.end(), 0.0);
      for (const auto& [v, c] : column) right_counts[static_cast<std::size_t>(c)] += 1.0;
      for (std::size_t i = 0; i + 1 < column.size(); ++i) {
        const auto c = static_cast<std::size_t>(column[i].second);
        left_counts[c] += 1.0;
        right_counts[c] -= 1.0;
        if (!(column[i + 1].first > column[i].first)) continue;
        const double nl = static_cast<double>(i + 1);
        const double imp = gini_sum(left_counts, nl) + gini_sum(right_counts, total - nl);
        if (imp < best.impurity) {
          double t = column[i].first + (column[i + 1].first - column[i].first) / 2.0;
          if (!(t < column[i + 1].first)) t = column[i].first;
          best = {f, t, imp};
        }
      }
    }
    return best;
  }

  std::vector<Node> nodes_;
  std::size_t classes_ = 0;
};

/// Bagged trees (random forest) or extremely randomized trees, soft-voted.
class TreeEnsemble {
 public:
  TreeEnsemble(const ClassifierParams& p, bool extra_trees) : params_(p), extra_(extra_trees) {}

  void fit(const Matrix& x, std::span<const int> y) {
    classes_ = detail::class_count(y);
    const auto n = static_cast<std::size_t>(x.rows());
    const auto d = static_cast<std::size_t>(x.cols());
    const std::size_t max_features =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(static_cast<double>(d))));
    Rng master(params_.seed);
    trees_.assign(params_.n_trees, DecisionTree{});
    for (auto& tree : trees_) {
      Rng rng(master.next_u64());
      std::vector<std::size_t> samples(n);
      if (extra_) {
        std::iota(samples.begin(), samples.end(), std::size_t{0});
      } else {
        for (auto& s : samples) s = rng.below(n);
      }
      tree.fit(x, y, std::move(samples), classes_, max_features, extra_, rng);
    }
  }

  std::vector<int> predict(const Matrix& x) const {
    std::vector<int> out(static_cast<std::size_t>(x.rows()));
    std::vector<double> proba(classes_);
    for (Eigen::Index a = 0; a < x.rows(); ++a) {
      std::fill(proba.begin(), proba.end(), 0.0);
      for (const auto& tree : trees_) {
        const auto dist = tree.leaf_distribution(row_span(x, a));
        for (std::size_t c = 0; c < classes_; ++c) proba[c] += dist[c];
      }
      out[static_cast<std::size_t>(a)] = detail::argmax_lowest(proba);
    }
    return out;
  }

 private:
  ClassifierParams params_;
  bool extra_;
  std::size_t classes_ = 0;
  std::vector<DecisionTree> trees_;
};

/// Trains one classifier and predicts the test rows.
inline std::vector<int> fit_predict(ClassifierKind kind, const ClassifierParams& params,
                                    const Matrix& train_x, std::span<const int> train_y,
                                    const Matrix& test_x) {
  params.validate();
  if (train_y.empty() || train_x.rows() == 0) throw ArgumentError("empty training set");
  if (static_cast<std::size_t>(train_x.rows()) != train_y.size()) {
    throw DimensionError("training set has " + std::to_string(train_x.rows()) + " rows but " +
                         std::to_string(train_y.size()) + " labels");
  }
  if (test_x.rows() > 0 && test_x.cols() != train_x.cols()) {
    throw DimensionError("test features have " + std::to_string(test_x.cols()) +
                         " columns, training has " + std::to_string(train_x.cols()));
  }
  auto run = [&](auto model) {
    model.fit(train_x, train_y);
    return model.predict(test_x);
  };
  switch (kind) {
    case ClassifierKind::LogisticRegression: return run(LogisticRegression(params));
    case ClassifierKind::KNearestNeighbors: return run(KNearestNeighbors(params));
    case ClassifierKind::GaussianNaiveBayes: return run(GaussianNaiveBayes(params));
    case ClassifierKind::RandomForest: return run(TreeEnsemble(params, false));
    case ClassifierKind::ExtraTrees: return run(TreeEnsemble(params, true));
  }
  throw ConfigError("unhandled classifier kind");
}

}  // namespace qkpca
