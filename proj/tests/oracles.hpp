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

// Test-only reference implementations. Nothing here calls into the library's
// gate application, kernel PCA, or eigensolver code paths.
#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

namespace qkpca::oracle {

using cd = std::complex<double>;
using Dense = std::vector<std::vector<cd>>;

inline Dense identity(std::size_t n) {
  Dense m(n, std::vector<cd>(n));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1.0;
  return m;
}

inline Dense kron(const Dense& a, const Dense& b) {
  const std::size_t ra = a.size(), rb = b.size();
  Dense out(ra * rb, std::vector<cd>(ra * rb));
  for (std::size_t i = 0; i < ra; ++i)
    for (std::size_t j = 0; j < ra; ++j)
      for (std::size_t k = 0; k < rb; ++k)
        for (std::size_t l = 0; l < rb; ++l) out[i * rb + k][j * rb + l] = a[i][j] * b[k][l];
  return out;
}

/// Textbook 2x2 matrices, written out independently of the library.
inline Dense rx(double t) {
  return {{std::cos(t / 2), cd(0, -std::sin(t / 2))}, {cd(0, -std::sin(t / 2)), std::cos(t / 2)}};
}
inline Dense rz(double t) { return {{std::exp(cd(0, -t / 2)), 0.0}, {0.0, std::exp(cd(0, t / 2))}}; }
inline Dense h() {
  const double r = 1.0 / std::sqrt(2.0);
  return {{r, r}, {r, -r}};
}
inline Dense p(double t) { return {{1.0, 0.0}, {0.0, std::exp(cd(0, t))}}; }

/// Full 2^n operator for a single-qubit gate on `qubit` (qubit 0 = least-significant bit).
/// Kronecker order: qubit n-1 is the leftmost factor.
inline Dense embed(const Dense& g, int qubit, int n) {
  Dense out = identity(1);
  for (int q = n - 1; q >= 0; --q) out = kron(out, q == qubit ? g : identity(2));
  return out;
}

/// CX as |0><0|_c (x) I + |1><1|_c (x) X_t, assembled from Kronecker products.
inline Dense cx(int control, int target, int n) {
  const Dense p0{{1.0, 0.0}, {0.0, 0.0}};
  const Dense p1{{0.0, 0.0}, {0.0, 1.0}};
  const Dense x{{0.0, 1.0}, {1.0, 0.0}};
  Dense a = identity(1), b = identity(1);
  for (int q = n - 1; q >= 0; --q) {
    a = kron(a, q == control ? p0 : identity(2));
    b = kron(b, q == control ? p1 : (q == target ? x : identity(2)));
  }
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) a[i][j] += b[i][j];
  return a;
}

inline std::vector<cd> matvec(const Dense& m, const std::vector<cd>& v) {
  std::vector<cd> out(v.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    cd s = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) s += m[i][j] * v[j];
    out[i] = s;
  }
  return out;
}

inline double fidelity(const std::vector<cd>& a, const std::vector<cd>& b) {
  cd s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return std::norm(s);
}

/// Cyclic Jacobi eigendecomposition of a small real symmetric matrix.
/// Returns eigenvalues (unsorted) and eigenvectors as columns of `vectors`.
struct JacobiResult {
  std::vector<double> values;
  std::vector<std::vector<double>> vectors;  // vectors[row][col]
};

inline JacobiResult jacobi_eigen(std::vector<std::vector<double>> a) {
  const std::size_t n = a.size();
  std::vector<std::vector<double>> v(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) v[i][i] = 1.0;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += a[i][j] * a[i][j];
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a[p][q]) < 1e-300) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v[k][p], vkq = v[k][q];
          v[k][p] = c * vkp - s * vkq;
          v[k][q] = s * vkp + c * vkq;
        }
      }
    }
  }
  JacobiResult r;
  for (std::size_t i = 0; i < n; ++i) r.values.push_back(a[i][i]);
  r.vectors = std::move(v);
  return r;
}

/// Classical PCA scores of the column-centered data (n x d), top `k` components,
/// computed from the d x d covariance with Jacobi.
inline std::vector<std::vector<double>> pca_scores(const std::vector<std::vector<double>>& x, std::size_t k) {
  const std::size_t n = x.size(), d = x[0].size();
  std::vector<double> mean(d, 0.0);
  for (const auto& row : x)
    for (std::size_t j = 0; j < d; ++j) mean[j] += row[j] / static_cast<double>(n);
  std::vector<std::vector<double>> xc = x;
  for (auto& row : xc)
    for (std::size_t j = 0; j < d; ++j) row[j] -= mean[j];
  std::vector<std::vector<double>> cov(d, std::vector<double>(d, 0.0));
  for (const auto& row : xc)
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) cov[i][j] += row[i] * row[j];
  auto eig = jacobi_eigen(cov);
  std::vector<std::size_t> order(d);
  for (std::size_t i = 0; i < d; ++i) order[i] = i;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j)
      if (eig.values[order[j]] > eig.values[order[i]]) std::swap(order[i], order[j]);
  std::vector<std::vector<double>> scores(n, std::vector<double>(k, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t c = 0; c < k; ++c)
      for (std::size_t j = 0; j < d; ++j) scores[i][c] += xc[i][j] * eig.vectors[j][order[c]];
  return scores;
}

}  // namespace qkpca::oracle
