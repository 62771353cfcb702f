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

#include "qkpca/datasets.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <numbers>
#include <set>

using namespace qkpca;
using std::numbers::pi;

namespace {

class TempDir {
 public:
  explicit TempDir(const std::string& name) : path_(std::filesystem::temp_directory_path() / name) {
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

std::filesystem::path write(const TempDir& dir, const std::string& name, const std::string& text) {
  const auto p = dir.path() / name;
  csv::write_file(p, text);
  return p;
}

}  // namespace

TEST(Csv, number_round_trip) {
  for (double v : {0.1, -1e-300, 3.141592653589793, 1e22, 0.0}) {
    double back = 0;
    ASSERT_TRUE(csv::parse_double(csv::format_double(v), back));
    EXPECT_EQ(back, v);
  }
  double v = 0;
  EXPECT_TRUE(csv::parse_double(" +2.5 ", v));
  EXPECT_EQ(v, 2.5);
  EXPECT_FALSE(csv::parse_double("abc", v));
  EXPECT_FALSE(csv::parse_double("", v));
}

TEST(Csv, quoted_fields) {
  const auto f = csv::split_record(R"(a,"b,c","d""e")");
  ASSERT_EQ(f.size(), 3u);
  EXPECT_EQ(f[1], "b,c");
  EXPECT_EQ(f[2], "d\"e");
}

TEST(LoadCsv, remaps_labels_by_first_appearance) {
  TempDir dir("qkpca_ds_load");
  const auto p = write(dir, "small.csv", "a,b,label\n1,2,zeta\n3,4,alpha\n5,6,zeta\n");
  const auto ds = load_csa_csv(p, {"a", "b"}, "label");
  EXPECT_EQ(ds.features.rows(), 3);
  EXPECT_EQ(ds.features.cols(), 2);
  EXPECT_EQ(ds.labels, (std::vector<int>{0, 1, 0}));
  EXPECT_EQ(ds.class_names, (std::vector<std::string>{"zeta", "alpha"}));
  EXPECT_EQ(ds.features(2, 1), 6.0);
}

TEST(LoadCsv, errors) {
  TempDir dir("qkpca_ds_errors");
  const auto p = write(dir, "small.csv", "a,b,label\n1,2,x\n3,oops,y\n");
  try {
    (void)load_csa_csv(p, {"a", "4-BBM"}, "label");
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("4-BBM"), std::string::npos);
  }
  try {
    (void)load_csa_csv(p, {"a", "b"}, "label");
    FAIL();
  } catch (const DataError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("row 2"), std::string::npos);
    EXPECT_NE(msg.find("'b'"), std::string::npos);
  }
  EXPECT_THROW((void)load_csa_csv(dir.path() / "absent.csv", {"a"}, "label"), DataError);
}

TEST(Preprocess, examples) {
  Dataset ds;
  ds.features.resize(3, 2);
  ds.features << 0, 5, 1, 5, 2, 5;
  ds.labels = {0, 1, 0};
  const auto out = preprocess(ds);
  EXPECT_NEAR(out.features(0, 0), 0.0, 1e-15);
  EXPECT_NEAR(out.features(1, 0), pi / 2, 1e-15);
  EXPECT_NEAR(out.features(2, 0), pi, 1e-15);
  for (int r = 0; r < 3; ++r) EXPECT_EQ(out.features(r, 1), pi / 2);
}

TEST(Preprocess, range_and_idempotence) {
  const auto ds = synth_linear({.n = 50, .d = 4, .seed = 3});
  const auto once = preprocess(ds);
  EXPECT_GE(once.features.minCoeff(), 0.0);
  EXPECT_LE(once.features.maxCoeff(), pi);
  const auto twice = preprocess(once);
  EXPECT_LT((twice.features - once.features).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Synth, label_rules) {
  EXPECT_EQ(step_label(0.5), 1);
  EXPECT_EQ(step_label(0.0), 1);
  EXPECT_EQ(step_label(-1e-12), 0);
  EXPECT_DOUBLE_EQ(nonlinear_response(0.0), 2.0);
}

TEST(Synth, deterministic_and_labelled_from_targets) {
  const SynthConfig cfg{.n = 300, .d = 7, .seed = 42};
  for (auto kind : {SynthKind::Linear, SynthKind::Nonlinear}) {
    auto c = cfg;
    c.kind = kind;
    const auto a = synthesize(c);
    const auto b = synthesize(c);
    EXPECT_TRUE(a.features == b.features);
    EXPECT_EQ(a.labels, b.labels);
    ASSERT_EQ(a.targets.size(), 300u);
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a.labels[i], step_label(a.targets[i]));
    EXPECT_NEAR(a.features.col(0).mean(), 0.0, 1e-12);
  }
  auto other = cfg;
  other.seed = 43;
  EXPECT_FALSE(synthesize(other).features == synthesize(cfg).features);
}

TEST(Synth, noiseless_labels_depend_only_on_projection) {
  const auto ds = synth_nonlinear({.n = 200, .d = 3, .noise_sigma = 0.0, .seed = 5});
  for (std::size_t i = 0; i < ds.size(); ++i) {
    EXPECT_EQ(ds.labels[i], step_label(ds.targets[i]));
  }
  const std::vector<double> w = ds.provenance.at("weights");
  ASSERT_EQ(w.size(), 3u);
}

// The quadratic response is positive for most of its support, so class 0 is rare.
TEST(Synth, recorded_class_balance) {
  auto count0 = [](const Dataset& ds) { return std::count(ds.labels.begin(), ds.labels.end(), 0); };
  EXPECT_EQ(count0(synth_nonlinear({.n = 300, .d = 7, .seed = 1})), 2);
  EXPECT_EQ(count0(synth_nonlinear({.n = 120, .d = 4, .seed = 7})), 3);
  EXPECT_EQ(count0(synth_linear({.n = 300, .d = 7, .seed = 1})), 159);
}

TEST(Synth, config_validation) {
  EXPECT_THROW(synthesize({.n = 0}), ConfigError);
  EXPECT_THROW(synthesize({.d = 0}), ConfigError);
  EXPECT_THROW(synthesize({.noise_sigma = -1}), ConfigError);
  EXPECT_EQ(parse_synth_kind("linear"), SynthKind::Linear);
  EXPECT_THROW(parse_synth_kind("cubic"), ConfigError);
}

TEST(StratifiedSplit, rounding_example) {
  std::vector<int> labels = {0, 0, 0, 0, 0, 1, 1, 1, 1, 1};
  const auto plan = stratified_split(labels, 0.8, 11);
  ASSERT_EQ(plan.test_indices.size(), 2u);
  EXPECT_EQ(labels[plan.test_indices[0]], 0);
  EXPECT_EQ(labels[plan.test_indices[1]], 1);
  EXPECT_EQ(plan, stratified_split(labels, 0.8, 11));
  EXPECT_TRUE(plan.warnings.empty());
}

TEST(StratifiedSplit, singleton_class_stays_in_train) {
  std::vector<int> labels = {0, 0, 0, 1, 0, 0};
  const auto plan = stratified_split(labels, 0.8, 2);
  EXPECT_NE(std::find(plan.train_indices.begin(), plan.train_indices.end(), 3u), plan.train_indices.end());
  ASSERT_EQ(plan.warnings.size(), 1u);
}

TEST(StratifiedSplit, partition_property) {
  const auto ds = synth_linear({.n = 97, .d = 2, .seed = 9});
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto plan = stratified_split(ds, 0.8, seed);
    std::set<std::size_t> all(plan.train_indices.begin(), plan.train_indices.end());
    for (auto i : plan.test_indices) EXPECT_TRUE(all.insert(i).second);
    EXPECT_EQ(all.size(), ds.size());
    std::set<int> train_classes, test_classes;
    for (auto i : plan.train_indices) train_classes.insert(ds.labels[i]);
    for (auto i : plan.test_indices) test_classes.insert(ds.labels[i]);
    EXPECT_EQ(train_classes.size(), 2u);
    EXPECT_EQ(test_classes.size(), 2u);
  }
  EXPECT_THROW(stratified_split(ds, 1.0, 0), ConfigError);
}

TEST(WriteDataset, csv_and_provenance) {
  TempDir dir("qkpca_ds_write");
  const auto ds = synth_linear({.n = 12, .d = 2, .seed = 1});
  write_dataset_csv(dir.path() / "d.csv", ds);
  EXPECT_TRUE(std::filesystem::exists(dir.path() / "d.json"));
  const auto back = load_labelled_csv(dir.path() / "d.csv");
  EXPECT_TRUE(back.features == ds.features);
  for (std::size_t i = 0; i < ds.size(); ++i) EXPECT_EQ(back.class_names[back.labels[i]], ds.class_name(ds.labels[i]));
}
