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
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "qkpca/csv.hpp"
#include "qkpca/error.hpp"
#include "qkpca/kernels.hpp"
#include "qkpca/matrix.hpp"

namespace qkpca {

/// Double-centers a Gram matrix: K - 1K - K1 + 1K1 with 1 the n x n matrix of 1/n.
inline Matrix center_kernel(const Matrix& k) {
  if (k.rows() != k.cols()) {
    throw DimensionError("center_kernel needs a square matrix, got " + std::to_string(k.rows()) +
                         " x " + std::to_string(k.cols()));
  }
  const Eigen::Index n = k.rows();
  if (n == 0) return k;
  const Vector row_means = k.rowwise().mean();
  const Eigen::RowVectorXd col_means = k.colwise().mean();
  const double total = k.mean();
  Matrix out(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      out(i, j) = k(i, j) - row_means(i) - col_means(j) + total;
    }
  }
  return out;
}

/// Fitted kernel-PCA state.
struct PcaModel {
  std::size_t k = 0;
  /// Top-k eigenvalues of the centered Gram matrix, descending.
  std::vector<double> eigenvalues;
  /// n x k; column j is v_j / sqrt(lambda_j) for unit eigenvector v_j.
  Matrix alphas;
  /// n x k projections of the fit set.
  Matrix projections;
  Vector fit_row_means;
  double fit_total_mean = 0.0;
  KernelSpec kernel;

  std::size_t fit_size() const noexcept { return static_cast<std::size_t>(alphas.rows()); }
};

namespace detail {

/// Relative threshold below which eigenvalues count as numerically zero.
inline constexpr double kRankTolerance = 1e-10;

struct Eigenbasis {
  std::vector<double> values;  // descending, all above threshold
  Matrix vectors;              // n x values.size(), unit columns
  Vector row_means;
  double total_mean = 0.0;
};

inline Eigenbasis eigenbasis(const Matrix& k, std::size_t max_components) {
  const Eigen::Index n = k.rows();
  if (k.rows() != k.cols()) throw DimensionError("kernel matrix must be square");
  if (max_components < 1 || static_cast<Eigen::Index>(max_components) > n - 1) {
    throw ArgumentError("component count must be in [1, n-1] = [1, " + std::to_string(n - 1) +
                        "], got " + std::to_string(max_components));
  }
  const Matrix centered = center_kernel(k);
  Eigen::MatrixXd sym = centered;
  // Symmetrize so round-off in the centering cannot make the solver see an asymmetric input.
  sym = (0.5 * (sym + sym.transpose())).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
  if (solver.info() != Eigen::Success) throw Error("symmetric eigensolver did not converge");

  const auto& values = solver.eigenvalues();  // ascending
  const double lambda_max = values(n - 1);
  const double threshold = kRankTolerance * std::max(lambda_max, 0.0);
  std::size_t usable = 0;
  for (Eigen::Index i = n - 1; i >= 0; --i) {
    if (values(i) > threshold && values(i) > 0.0) ++usable;
  }
  if (usable < max_components) {
    throw RankDeficiencyError("centered kernel supports at most " + std::to_string(usable) +
                                  " components, requested " + std::to_string(max_components),
                              usable);
  }

  Eigenbasis basis;
  basis.values.resize(max_components);
  basis.vectors.resize(n, static_cast<Eigen::Index>(max_components));
  for (std::size_t j = 0; j < max_components; ++j) {
    const Eigen::Index src = n - 1 - static_cast<Eigen::Index>(j);
    basis.values[j] = values(src);
    Vector v = solver.eigenvectors().col(src);
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v(arg) < 0.0) v = -v;
    basis.vectors.col(static_cast<Eigen::Index>(j)) = v;
  }
  basis.row_means = k.rowwise().mean();
  basis.total_mean = k.mean();
  return basis;
}

inline PcaModel model_from_basis(const Eigenbasis& basis, const Matrix& k, std::size_t dims,
                                 const KernelSpec& spec) {
  const Eigen::Index n = k.rows();
  PcaModel m;
  m.k = dims;
  m.eigenvalues.assign(basis.values.begin(), basis.values.begin() + static_cast<std::ptrdiff_t>(dims));
  m.alphas.resize(n, static_cast<Eigen::Index>(dims));
  m.projections.resize(n, static_cast<Eigen::Index>(dims));
  for (std::size_t j = 0; j < dims; ++j) {
    const auto c = static_cast<Eigen::Index>(j);
    const double root = std::sqrt(basis.values[j]);
    m.alphas.col(c) = basis.vectors.col(c) / root;
    // K' alpha_j = lambda_j v_j / sqrt(lambda_j).
    m.projections.col(c) = basis.vectors.col(c) * root;
  }
  m.fit_row_means = basis.row_means;
  m.fit_total_mean = basis.total_mean;
  m.kernel = spec;
  return m;
}

}  // namespace detail

/// Kernel PCA on a Gram matrix, keeping the top `k` components.
/// Each alpha column is sign-normalized so its largest-magnitude entry is positive.
inline PcaModel fit(const KernelMatrix& kernel, std::size_t k) {
  const auto basis = detail::eigenbasis(kernel.values, k);
  return detail::model_from_basis(basis, kernel.values, k, kernel.spec);
}

inline PcaModel fit(const Matrix& gram_values, std::size_t k) {
  return fit(KernelMatrix{gram_values, KernelSpec::precomputed()}, k);
}

/// Projects new points given their kernel rows against the fit set.
inline Matrix transform(const PcaModel& model, const Matrix& k_cross, const KernelSpec& cross_spec) {
  if (!(cross_spec == model.kernel)) {
    throw ProvenanceError("cross kernel was built with '" + std::string(to_string(cross_spec.kind)) +
                          "' but the model was fit with '" +
                          std::string(to_string(model.kernel.kind)) + "' (or different parameters)");
  }
  const auto n = static_cast<Eigen::Index>(model.fit_size());
  if (k_cross.rows() > 0 && k_cross.cols() != n) {
    throw DimensionError("cross kernel has " + std::to_string(k_cross.cols()) +
                         " columns, model was fit on " + std::to_string(n) + " points");
  }
  Matrix centered(k_cross.rows(), n);
  for (Eigen::Index a = 0; a < k_cross.rows(); ++a) {
    const double row_mean = k_cross.row(a).mean();
    for (Eigen::Index i = 0; i < n; ++i) {
      centered(a, i) = k_cross(a, i) - row_mean - model.fit_row_means(i) + model.fit_total_mean;
    }
  }
  return centered * model.alphas;
}

inline Matrix transform(const PcaModel& model, const Matrix& k_cross) {
  return transform(model, k_cross, model.kernel);
}

/// One eigendecomposition at max(dims); each smaller dim keeps the leading columns.
inline std::map<std::size_t, Matrix> sweep(const KernelMatrix& kernel, std::span<const std::size_t> dims) {
  if (dims.empty()) throw ArgumentError("sweep needs at least one dimension");
  const std::size_t top = *std::max_element(dims.begin(), dims.end());
  const auto basis = detail::eigenbasis(kernel.values, top);
  const auto model = detail::model_from_basis(basis, kernel.values, top, kernel.spec);
  std::map<std::size_t, Matrix> out;
  for (auto d : dims) {
    if (d < 1) throw ArgumentError("sweep dimension must be >= 1");
    out[d] = model.projections.leftCols(static_cast<Eigen::Index>(d));
  }
  return out;
}

inline std::map<std::size_t, Matrix> sweep(const Matrix& x, const KernelSpec& spec,
                                           std::span<const std::size_t> dims, int threads = 1) {
  return sweep(gram(x, spec, threads), dims);
}

/// Embedding CSV: header dim_1..dim_k,label; one row per sample.
inline std::string embedding_csv(const Matrix& coords, std::span<const std::string> labels) {
  std::string out;
  for (Eigen::Index j = 0; j < coords.cols(); ++j) out += "dim_" + std::to_string(j + 1) + ",";
  out += "label\n";
  for (Eigen::Index i = 0; i < coords.rows(); ++i) {
    for (Eigen::Index j = 0; j < coords.cols(); ++j) {
      out += csv::format_double(coords(i, j));
      out.push_back(',');
    }
    out += labels[static_cast<std::size_t>(i)];
    out.push_back('\n');
  }
  return out;
}

}  // namespace qkpca
