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

#include "qkpca/classifiers.hpp"

#include <gtest/gtest.h>

#include <random>

#include "qkpca/metrics.hpp"

using namespace qkpca;

namespace {

struct Blobs {
  Matrix x;
  std::vector<int> y;
};

// Gaussian blobs centered at (4c, -4c) for class c.
Blobs blobs(std::uint64_t seed, int per_class, int classes, double spread = 1.0) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> g(0.0, spread);
  Blobs b;
  b.x.resize(per_class * classes, 2);
  for (int c = 0; c < classes; ++c) {
    for (int i = 0; i < per_class; ++i) {
      const int r = c * per_class + i;
      b.x(r, 0) = 4.0 * c + g(gen);
      b.x(r, 1) = -4.0 * c + g(gen);
      b.y.push_back(c);
    }
  }
  return b;
}

constexpr ClassifierKind kAll[] = {ClassifierKind::LogisticRegression, ClassifierKind::KNearestNeighbors,
                                   ClassifierKind::GaussianNaiveBayes, ClassifierKind::RandomForest,
                                   ClassifierKind::ExtraTrees};

}  // namespace

TEST(Classifiers, knn_recovers_training_point_class) {
  const auto b = blobs(1, 20, 2);
  const Matrix probe = b.x.row(3);
  EXPECT_EQ(fit_predict(ClassifierKind::KNearestNeighbors, {}, b.x, b.y, probe), (std::vector<int>{0}));
}

TEST(Classifiers, knn_with_one_neighbor_memorizes) {
  const auto b = blobs(2, 15, 3, 3.0);
  ClassifierParams p;
  p.knn_k = 1;
  EXPECT_EQ(accuracy(b.y, fit_predict(ClassifierKind::KNearestNeighbors, p, b.x, b.y, b.x)), 1.0);
}

TEST(Classifiers, knn_tie_goes_to_lowest_class) {
  Matrix x(2, 1);
  x << -1, 1;
  ClassifierParams p;
  p.knn_k = 2;
  const Matrix probe = Matrix::Zero(1, 1);
  EXPECT_EQ(fit_predict(ClassifierKind::KNearestNeighbors, p, x, std::vector<int>{1, 0}, probe),
            (std::vector<int>{0}));
}

TEST(Classifiers, naive_bayes_separated_gaussians) {
  std::mt19937_64 gen(3);
  std::normal_distribution<double> g;
  Matrix x(200, 1);
  std::vector<int> y;
  for (int i = 0; i < 200; ++i) {
    x(i, 0) = (i < 100 ? -10.0 : 10.0) + g(gen);
    y.push_back(i < 100 ? 0 : 1);
  }
  Matrix probe(2, 1);
  probe << 10, -10;
  EXPECT_EQ(fit_predict(ClassifierKind::GaussianNaiveBayes, {}, x, y, probe), (std::vector<int>{1, 0}));
}

TEST(Classifiers, all_kinds_separate_blobs) {
  const auto train = blobs(4, 40, 3);
  const auto test = blobs(5, 20, 3);
  for (auto kind : kAll) {
    const auto pred = fit_predict(kind, {}, train.x, train.y, test.x);
    EXPECT_GT(accuracy(test.y, pred), 0.9) << to_string(kind);
  }
}

TEST(Classifiers, deterministic_given_seed) {
  const auto train = blobs(6, 30, 2, 2.5);
  const auto test = blobs(7, 30, 2, 2.5);
  for (auto kind : kAll) {
    ClassifierParams p;
    p.seed = 99;
    EXPECT_EQ(fit_predict(kind, p, train.x, train.y, test.x), fit_predict(kind, p, train.x, train.y, test.x))
        << to_string(kind);
  }
  ClassifierParams a, b;
  a.seed = 1;
  b.seed = 2;
  EXPECT_NE(fit_predict(ClassifierKind::ExtraTrees, a, train.x, train.y, test.x),
            fit_predict(ClassifierKind::ExtraTrees, b, train.x, train.y, test.x));
}

TEST(Classifiers, single_class_training_predicts_that_class) {
  const Matrix x = Matrix::Random(10, 2);
  const std::vector<int> y(10, 1);
  for (auto kind : kAll) {
    const auto pred = fit_predict(kind, {}, x, y, x.topRows(3));
    EXPECT_EQ(pred, (std::vector<int>{1, 1, 1})) << to_string(kind);
  }
}

TEST(Classifiers, errors_and_names) {
  const auto b = blobs(8, 5, 2);
  EXPECT_THROW(fit_predict(ClassifierKind::RandomForest, {}, b.x, std::vector<int>{0, 1}, b.x), DimensionError);
  EXPECT_THROW(fit_predict(ClassifierKind::KNearestNeighbors, {}, b.x, b.y, Matrix::Zero(1, 3)), DimensionError);
  ClassifierParams bad;
  bad.n_trees = 0;
  EXPECT_THROW(fit_predict(ClassifierKind::RandomForest, bad, b.x, b.y, b.x), ConfigError);
  for (auto kind : kAll) EXPECT_EQ(parse_classifier_kind(to_string(kind)), kind);
  EXPECT_THROW(parse_classifier_kind("svm"), ConfigError);
  EXPECT_TRUE(is_ensemble(ClassifierKind::ExtraTrees));
  EXPECT_FALSE(is_ensemble(ClassifierKind::LogisticRegression));
}
