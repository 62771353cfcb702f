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

#include "qkpca/benchmark.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "qkpca/kpca.hpp"

using namespace qkpca;

namespace {

struct Fixture {
  Dataset ds;
  Embeddings embeddings;
};

const Fixture& fixture() {
  static const Fixture f = [] {
    Fixture out;
    out.ds = preprocess(synth_linear({.n = 80, .d = 4, .seed = 3}));
    const std::vector<std::size_t> dims = {4, 3, 2};
    out.embeddings["rbf"] = sweep(out.ds.features, KernelSpec::rbf(default_rbf_sigma(out.ds.features)), dims);
    out.embeddings["zmap"] = sweep(out.ds.features, KernelSpec::quantum(FeatureMapSpec::z_map()), dims);
    return out;
  }();
  return f;
}

BenchmarkConfig config(std::vector<ClassifierKind> classifiers, int repeats) {
  BenchmarkConfig c;
  c.classifiers = std::move(classifiers);
  c.repeats = repeats;
  c.base_seed = 40;
  c.params.n_trees = 20;
  return c;
}

}  // namespace

TEST(Benchmark, single_cell_matches_manual_evaluation) {
  const auto& f = fixture();
  Embeddings one{{"rbf", {{2, f.embeddings.at("rbf").at(2)}}}};
  const auto report = run_benchmark(one, f.ds.labels, config({ClassifierKind::KNearestNeighbors}, 1));
  ASSERT_EQ(report.records.size(), 1u);
  EXPECT_EQ(report.count("rbf", 2, ClassifierKind::KNearestNeighbors), 1u);

  const auto split = stratified_split(f.ds.labels, 0.8, 40);
  const auto& x = one.at("rbf").at(2);
  const auto test_y = take(f.ds.labels, split.test_indices);
  const auto pred = fit_predict(ClassifierKind::KNearestNeighbors, {}, take_rows(x, split.train_indices),
                                take(f.ds.labels, split.train_indices), take_rows(x, split.test_indices));
  const auto s = report.summary("rbf", 2, ClassifierKind::KNearestNeighbors, Metric::Accuracy);
  EXPECT_EQ(s.mean, accuracy(test_y, pred));
  EXPECT_EQ(s.std, 0.0);
  EXPECT_FALSE(report.collapse("rbf", ClassifierKind::KNearestNeighbors, Metric::Accuracy).has_value());
}

TEST(Benchmark, splits_are_shared_and_deterministic) {
  const auto& f = fixture();
  const auto cfg = config({ClassifierKind::LogisticRegression, ClassifierKind::RandomForest}, 4);
  const auto a = run_benchmark(f.embeddings, f.ds.labels, cfg);
  ASSERT_EQ(a.splits.size(), 4u);
  for (int r = 0; r < 4; ++r) EXPECT_EQ(a.splits[static_cast<std::size_t>(r)], stratified_split(f.ds.labels, 0.8, 40u + static_cast<std::uint64_t>(r)));
  EXPECT_EQ(a.records.size(), 2u * 3u * 2u * 4u);

  auto threaded = cfg;
  threaded.threads = 4;
  const auto b = run_benchmark(f.embeddings, f.ds.labels, threaded);
  EXPECT_EQ(a.to_csv(), b.to_csv());
  EXPECT_EQ(a.to_json().dump(), b.to_json().dump());
}

TEST(Benchmark, aggregates_use_population_std) {
  EvalReport r;
  r.repeats = 2;
  for (int rep = 0; rep < 2; ++rep) {
    for (std::size_t dim : {3u, 2u}) {
      ScoreRecord rec;
      rec.kernel = "k";
      rec.dim = dim;
      rec.classifier = ClassifierKind::RandomForest;
      rec.repeat = rep;
      const double acc = dim == 3 ? 0.8 : (rep == 0 ? 0.5 : 0.7);
      rec.scores = {acc, acc, acc};
      r.records.push_back(rec);
    }
  }
  r.aggregate();
  const auto s = r.summary("k", 2, ClassifierKind::RandomForest, Metric::Accuracy);
  EXPECT_NEAR(s.mean, 0.6, 1e-15);
  EXPECT_NEAR(s.std, 0.1, 1e-15);
  // One step from 0.8 to 0.6.
  EXPECT_NEAR(*r.collapse("k", ClassifierKind::RandomForest, Metric::Accuracy), 0.25, 1e-15);
  EXPECT_EQ(r.best_ensemble("k"), ClassifierKind::RandomForest);
  EXPECT_FALSE(r.best_ensemble("other").has_value());
}

TEST(Benchmark, report_serialization) {
  const auto& f = fixture();
  const auto report = run_benchmark(f.embeddings, f.ds.labels,
                                    config({ClassifierKind::GaussianNaiveBayes, ClassifierKind::ExtraTrees}, 2));
  const auto csv = report.to_csv();
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "kernel,dim,classifier,repeat,accuracy,f1_macro,kappa");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1 + 2 * 3 * 2 * 2);
  const auto j = report.to_json();
  EXPECT_EQ(j.at("cells").size(), 2u * 3u * 2u);
  EXPECT_EQ(j.at("best_ensemble").at("rbf"), "et");
  EXPECT_EQ(j.at("repeats"), 2);
}

TEST(Benchmark, errors) {
  const auto& f = fixture();
  std::vector<int> short_labels(f.ds.labels.begin(), f.ds.labels.end() - 1);
  EXPECT_THROW(run_benchmark(f.embeddings, short_labels, config({ClassifierKind::KNearestNeighbors}, 1)),
               DimensionError);
  EXPECT_THROW(run_benchmark(f.embeddings, f.ds.labels, config({}, 1)), ConfigError);
  EXPECT_THROW(run_benchmark(f.embeddings, f.ds.labels, config({ClassifierKind::KNearestNeighbors}, 0)),
               ConfigError);
}
