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

#include "qkpca/kernels.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>

#include "oracles.hpp"

using namespace qkpca;
using std::numbers::pi;

namespace {

Matrix sample_points(std::uint64_t seed, Eigen::Index n, Eigen::Index d) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(0.0, pi);
  Matrix x(n, d);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < d; ++j) x(i, j) = u(gen);
  return x;
}

std::vector<KernelSpec> all_specs(std::size_t d) {
  return {KernelSpec::rbf(1.3), KernelSpec::quantum(FeatureMapSpec::pauli_x()),
          KernelSpec::quantum(FeatureMapSpec::z_map()), KernelSpec::quantum(FeatureMapSpec::zz_map()),
          KernelSpec::quantum(FeatureMapSpec::saqk(SaqkParams{std::vector<double>(d, 0.8)}))};
}

}  // namespace

TEST(RbfKernel, examples) {
  Matrix x(3, 2);
  x << 0, 0, 1, 1, 5, -2;
  const double sigma = 1.0;  // |x0 - x1|^2 = 2 = 2 sigma^2
  const auto k = rbf_kernel(x, sigma);
  EXPECT_DOUBLE_EQ(k.values(0, 0), 1.0);
  EXPECT_NEAR(k.values(0, 1), std::exp(-1.0), 1e-15);
  EXPECT_NEAR(k.values(0, 1), 0.367879, 1e-6);
  EXPECT_EQ(k.kind(), KernelKind::Rbf);

  const auto wide = rbf_kernel(x, 1e6);
  EXPECT_LT((wide.values.array() - 1.0).abs().maxCoeff(), 1e-6);

  EXPECT_THROW(rbf_kernel(x, 0.0), ConfigError);
  EXPECT_THROW(rbf_kernel(x, -1.0), ConfigError);
}

TEST(RbfKernel, default_sigma_matches_scale_rule) {
  Matrix x(2, 2);
  x << 0, 2, 4, 6;  // mean 3, var 5
  EXPECT_NEAR(default_rbf_sigma(x), std::sqrt(2 * 5.0 / 2), 1e-12);
  Matrix flat = Matrix::Constant(3, 2, 4.0);
  EXPECT_NEAR(default_rbf_sigma(flat), std::sqrt(0.5), 1e-15);
}

TEST(QuantumKernel, examples) {
  Matrix x(3, 1);
  x << 0, pi / 4, pi / 2;
  const auto k = quantum_kernel(x, FeatureMapSpec::z_map(1));
  Matrix want(3, 3);
  want << 1, .5, 0, .5, 1, .5, 0, .5, 1;
  EXPECT_LT((k.values - want).cwiseAbs().maxCoeff(), 1e-12);

  const auto ones = quantum_kernel(sample_points(1, 6, 3), FeatureMapSpec::saqk(SaqkParams::zeros(3)));
  EXPECT_LT((ones.values.array() - 1.0).abs().maxCoeff(), 1e-12);

  const auto single = quantum_kernel(sample_points(2, 1, 4), FeatureMapSpec::zz_map());
  ASSERT_EQ(single.size(), 1);
  EXPECT_NEAR(single.values(0, 0), 1.0, 1e-12);

  EXPECT_THROW(quantum_kernel(sample_points(3, 4, 2), FeatureMapSpec::saqk(SaqkParams::ones(3))), DimensionError);
}

TEST(QuantumKernel, matches_dense_oracle_fidelities) {
  for (int trial = 0; trial < 5; ++trial) {
    const Eigen::Index d = 1 + trial % 3;
    const auto x = sample_points(40 + static_cast<std::uint64_t>(trial), 10, d);
    const auto k = quantum_kernel(x, FeatureMapSpec::pauli_x());
    std::vector<std::vector<oracle::cd>> states;
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      std::vector<oracle::cd> v(std::size_t{1} << d);
      v[0] = 1.0;
      for (int q = 0; q < d; ++q) v = oracle::matvec(oracle::embed(oracle::rx(x(i, q)), q, static_cast<int>(d)), v);
      states.push_back(v);
    }
    for (Eigen::Index i = 0; i < x.rows(); ++i)
      for (Eigen::Index j = 0; j < x.rows(); ++j)
        EXPECT_NEAR(k.values(i, j), oracle::fidelity(states[i], states[j]), 1e-10);
  }
}

TEST(KernelMatrix, invariants_for_all_kinds) {
  const auto x = sample_points(99, 50, 7);
  for (const auto& spec : all_specs(7)) {
    const auto k = gram(x, spec);
    SCOPED_TRACE(std::string(to_string(spec.kind)));
    for (Eigen::Index i = 0; i < 50; ++i) {
      EXPECT_NEAR(k.values(i, i), 1.0, 1e-9);
      for (Eigen::Index j = 0; j < 50; ++j) {
        EXPECT_LT(std::abs(k.values(i, j) - k.values(j, i)), 1e-12);
        EXPECT_GE(k.values(i, j), -1e-12);
        EXPECT_LE(k.values(i, j), 1.0 + 1e-12);
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Eigen::MatrixXd(k.values));
    EXPECT_GE(es.eigenvalues().minCoeff(), -1e-8);
  }
}

TEST(KernelMatrix, permutation_equivariance) {
  const auto x = sample_points(5, 12, 3);
  std::vector<Eigen::Index> perm(12);
  for (Eigen::Index i = 0; i < 12; ++i) perm[static_cast<std::size_t>(i)] = (i * 5 + 3) % 12;
  Matrix px(12, 3);
  for (Eigen::Index i = 0; i < 12; ++i) px.row(i) = x.row(perm[static_cast<std::size_t>(i)]);
  for (const auto& spec : all_specs(3)) {
    const auto k = gram(x, spec);
    const auto pk = gram(px, spec);
    for (Eigen::Index i = 0; i < 12; ++i)
      for (Eigen::Index j = 0; j < 12; ++j)
        EXPECT_EQ(pk.values(i, j), k.values(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]));
  }
}

TEST(KernelMatrix, parallel_equals_serial_bitwise) {
  const auto x = sample_points(6, 40, 5);
  for (const auto& spec : all_specs(5)) {
    const auto serial = gram(x, spec, 1);
    const auto parallel = gram(x, spec, 4);
    EXPECT_TRUE(serial.values == parallel.values) << to_string(spec.kind);
  }
}

TEST(CrossKernel, consistency) {
  const auto x = sample_points(7, 9, 3);
  for (const auto& spec : all_specs(3)) {
    const auto square = gram(x, spec);
    const auto cross = cross_kernel(x, x, spec);
    EXPECT_LT((cross - square.values).cwiseAbs().maxCoeff(), 1e-12);

    const Matrix one = x.row(4);
    const auto row = cross_kernel(one, x, spec);
    EXPECT_LT((row.row(0) - square.values.row(4)).cwiseAbs().maxCoeff(), 1e-12);

    const auto empty = cross_kernel(Matrix(0, 3), x, spec);
    EXPECT_EQ(empty.rows(), 0);
    EXPECT_EQ(empty.cols(), 9);
  }
  EXPECT_THROW(cross_kernel(sample_points(1, 2, 2), x, KernelSpec::rbf(1.0)), DimensionError);
}

TEST(Alignment, examples) {
  const std::vector<int> y = {0, 0, 1, 1, 2, 0};
  Matrix ky(6, 6);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) ky(i, j) = y[i] == y[j] ? 1.0 : 0.0;
  EXPECT_NEAR(alignment(ky, y), 1.0, 1e-15);

  const std::vector<int> balanced = {0, 1, 0, 1, 0, 1, 0, 1};
  EXPECT_NEAR(alignment(Matrix::Ones(8, 8), balanced), 1.0 / std::sqrt(2.0), 1e-15);

  // Block-diagonal kernel matching contiguous class blocks.
  const std::vector<int> blocks = {0, 0, 0, 1, 1};
  Matrix bd = Matrix::Zero(5, 5);
  bd.topLeftCorner(3, 3).setConstant(0.7);
  bd.bottomRightCorner(2, 2).setConstant(0.7);
  EXPECT_NEAR(alignment(bd, blocks), 1.0, 1e-15);
}

TEST(Alignment, errors) {
  EXPECT_THROW(alignment(Matrix::Ones(3, 3), std::vector<int>{1, 1, 1}), AlignmentError);
  EXPECT_THROW(alignment(Matrix::Zero(2, 2), std::vector<int>{0, 1}), AlignmentError);
  EXPECT_THROW(alignment(Matrix::Ones(3, 3), std::vector<int>{0, 1}), DimensionError);
}

TEST(KernelCache, csv_and_sidecar_round_trip) {
  const auto dir = std::filesystem::temp_directory_path() / "qkpca_kernel_cache_test";
  std::filesystem::remove_all(dir);
  const auto x = sample_points(8, 6, 3);
  const auto k = quantum_kernel(x, FeatureMapSpec::saqk(SaqkParams{{0.3, 1.7, -0.2}}));
  write_kernel_csv(dir / "kernel_saqk.csv", k);
  ASSERT_TRUE(std::filesystem::exists(dir / "kernel_saqk.json"));
  const auto side = nlohmann::json::parse(csv::read_file(dir / "kernel_saqk.json"));
  EXPECT_EQ(side.at("kind"), "saqk");
  EXPECT_EQ(side.at("n"), 6);
  const auto back = read_kernel_csv(dir / "kernel_saqk.csv");
  EXPECT_TRUE(back.values == k.values);
  EXPECT_EQ(back.spec, k.spec);
  std::filesystem::remove_all(dir);
}
