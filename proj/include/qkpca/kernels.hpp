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
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qkpca/csv.hpp"
#include "qkpca/error.hpp"
#include "qkpca/feature_map.hpp"
#include "qkpca/matrix.hpp"
#include "qkpca/parallel.hpp"
#include "qkpca/statevector.hpp"

namespace qkpca {

enum class KernelKind { Rbf, PauliX, ZMap, ZZMap, Saqk, Precomputed };

inline std::string_view to_string(KernelKind kind) {
  switch (kind) {
    case KernelKind::Rbf: return "rbf";
    case KernelKind::PauliX: return "pauli-x";
    case KernelKind::ZMap: return "z-map";
    case KernelKind::ZZMap: return "zz-map";
    case KernelKind::Saqk: return "saqk";
    case KernelKind::Precomputed: return "precomputed";
  }
  return "unknown";
}

inline KernelKind parse_kernel_kind(std::string_view name) {
  if (name == "rbf") return KernelKind::Rbf;
  if (name == "precomputed") return KernelKind::Precomputed;
  switch (parse_feature_map_kind(name)) {
    case FeatureMapKind::PauliX: return KernelKind::PauliX;
    case FeatureMapKind::ZMap: return KernelKind::ZMap;
    case FeatureMapKind::ZZMap: return KernelKind::ZZMap;
    case FeatureMapKind::Saqk: return KernelKind::Saqk;
  }
  throw ConfigError("unknown kernel '" + std::string(name) + "'");
}

inline KernelKind kernel_kind_of(FeatureMapKind kind) {
  switch (kind) {
    case FeatureMapKind::PauliX: return KernelKind::PauliX;
    case FeatureMapKind::ZMap: return KernelKind::ZMap;
    case FeatureMapKind::ZZMap: return KernelKind::ZZMap;
    case FeatureMapKind::Saqk: return KernelKind::Saqk;
  }
  return KernelKind::Precomputed;
}

/// Full definition of a kernel function: RBF width or quantum feature map.
struct KernelSpec {
  KernelKind kind = KernelKind::Rbf;
  double sigma = 1.0;
  std::optional<FeatureMapSpec> feature_map;

  static KernelSpec rbf(double sigma) { return {KernelKind::Rbf, sigma, std::nullopt}; }
  static KernelSpec quantum(FeatureMapSpec spec) {
    const KernelKind kind = kernel_kind_of(spec.kind);
    return {kind, 0.0, std::move(spec)};
  }
  /// Externally supplied Gram matrix with no recomputable definition.
  static KernelSpec precomputed() { return {KernelKind::Precomputed, 0.0, std::nullopt}; }

  bool is_quantum() const noexcept { return feature_map.has_value(); }

  bool operator==(const KernelSpec&) const = default;
};

inline void to_json(nlohmann::json& j, const KernelSpec& s) {
  j = nlohmann::json{{"kind", std::string(to_string(s.kind))}};
  if (s.kind == KernelKind::Rbf) j["sigma"] = s.sigma;
  if (s.feature_map) j["feature_map"] = *s.feature_map;
}

inline void from_json(const nlohmann::json& j, KernelSpec& s) {
  s.kind = parse_kernel_kind(j.at("kind").get<std::string>());
  s.sigma = j.value("sigma", 0.0);
  s.feature_map.reset();
  if (j.contains("feature_map")) s.feature_map = j.at("feature_map").get<FeatureMapSpec>();
}

/// Symmetric Gram matrix tagged with the kernel that produced it.
struct KernelMatrix {
  Matrix values;
  KernelSpec spec;

  Eigen::Index size() const noexcept { return values.rows(); }
  KernelKind kind() const noexcept { return spec.kind; }
};

/// sigma^2 = d * Var(X) / 2, i.e. gamma = 1 / (d * Var(X)) over all entries of X.
/// Falls back to gamma = 1 when X has no spread.
inline double default_rbf_sigma(const Matrix& x) {
  const double count = static_cast<double>(x.size());
  if (count == 0.0) return std::sqrt(0.5);
  const double mean = x.sum() / count;
  const double var = (x.array() - mean).square().sum() / count;
  if (!(var > 0.0)) return std::sqrt(0.5);
  return std::sqrt(static_cast<double>(x.cols()) * var / 2.0);
}

namespace detail {

inline double rbf_value(std::span<const double> a, std::span<const double> b, double sigma) {
  double dist2 = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double diff = a[k] - b[k];
    dist2 += diff * diff;
  }
  return std::exp(-dist2 / (2.0 * sigma * sigma));
}

inline void check_sigma(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw ConfigError("rbf sigma must be positive and finite, got " + csv::format_double(sigma));
  }
}

inline void check_finite(const Matrix& x, std::string_view what) {
  if (!x.allFinite()) throw DataError(std::string(what) + " contains non-finite values");
}

inline std::vector<StateVector> prepare_states(const Matrix& x, const FeatureMapSpec& spec,
                                               int threads) {
  spec.validate(static_cast<std::size_t>(x.cols()));
  std::vector<StateVector> states(static_cast<std::size_t>(x.rows()), StateVector::zero(1));
  parallel_for(states.size(), threads, [&](std::size_t i) {
    states[i] = encode(row_span(x, static_cast<Eigen::Index>(i)), spec);
  });
  return states;
}

/// Fills the upper triangle (diagonal included) row by row and mirrors it.
template <class Entry>
Matrix symmetric_fill(Eigen::Index n, int threads, Entry&& entry) {
  Matrix k(n, n);
  parallel_for(static_cast<std::size_t>(n), threads, [&](std::size_t r) {
    const auto i = static_cast<Eigen::Index>(r);
    for (Eigen::Index j = i; j < n; ++j) k(i, j) = entry(i, j);
  });
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < i; ++j) k(i, j) = k(j, i);
  }
  return k;
}

}  // namespace detail

/// Gaussian kernel exp(-|x_i - x_j|^2 / (2 sigma^2)).
inline KernelMatrix rbf_kernel(const Matrix& x, double sigma, int threads = 1) {
  detail::check_sigma(sigma);
  detail::check_finite(x, "feature matrix");
  Matrix k = detail::symmetric_fill(x.rows(), threads, [&](Eigen::Index i, Eigen::Index j) {
    return detail::rbf_value(row_span(x, i), row_span(x, j), sigma);
  });
  return {std::move(k), KernelSpec::rbf(sigma)};
}

/// Fidelity kernel K_ij = |<psi(x_i)|psi(x_j)>|^2 with one state preparation per row.
inline KernelMatrix quantum_kernel(const Matrix& x, const FeatureMapSpec& spec, int threads = 1) {
  detail::check_finite(x, "feature matrix");
  const auto states = detail::prepare_states(x, spec, threads);
  Matrix k = detail::symmetric_fill(x.rows(), threads, [&](Eigen::Index i, Eigen::Index j) {
    return fidelity(states[static_cast<std::size_t>(i)], states[static_cast<std::size_t>(j)]);
  });
  return {std::move(k), KernelSpec::quantum(spec)};
}

inline KernelMatrix gram(const Matrix& x, const KernelSpec& spec, int threads = 1) {
  if (spec.kind == KernelKind::Rbf) return rbf_kernel(x, spec.sigma, threads);
  if (!spec.feature_map) {
    throw ConfigError("kernel '" + std::string(to_string(spec.kind)) +
                      "' cannot be evaluated from features");
  }
  return quantum_kernel(x, *spec.feature_map, threads);
}

/// Rectangular kernel between new points (rows) and a fit set (columns).
inline Matrix cross_kernel(const Matrix& x_new, const Matrix& x_fit, const KernelSpec& spec,
                           int threads = 1) {
  if (x_new.rows() > 0 && x_new.cols() != x_fit.cols()) {
    throw DimensionError("cross kernel feature mismatch: " + std::to_string(x_new.cols()) +
                         " vs " + std::to_string(x_fit.cols()));
  }
  const Eigen::Index m = x_new.rows();
  const Eigen::Index n = x_fit.rows();
  Matrix k(m, n);
  if (m == 0) return k;
  detail::check_finite(x_new, "feature matrix");
  detail::check_finite(x_fit, "feature matrix");
  if (spec.kind == KernelKind::Rbf) {
    detail::check_sigma(spec.sigma);
    parallel_for(static_cast<std::size_t>(m), threads, [&](std::size_t r) {
      const auto a = static_cast<Eigen::Index>(r);
      for (Eigen::Index i = 0; i < n; ++i) {
        k(a, i) = detail::rbf_value(row_span(x_new, a), row_span(x_fit, i), spec.sigma);
      }
    });
    return k;
  }
  if (!spec.feature_map) {
    throw ConfigError("kernel '" + std::string(to_string(spec.kind)) +
                      "' cannot be evaluated from features");
  }
  const auto fresh = detail::prepare_states(x_new, *spec.feature_map, threads);
  const auto fitted = detail::prepare_states(x_fit, *spec.feature_map, threads);
  parallel_for(static_cast<std::size_t>(m), threads, [&](std::size_t a) {
    for (Eigen::Index i = 0; i < n; ++i) {
      k(static_cast<Eigen::Index>(a), i) = fidelity(fresh[a], fitted[static_cast<std::size_t>(i)]);
    }
  });
  return k;
}

/// Kernel-target alignment <K, K_y>_F / (|K|_F |K_y|_F) with K_y[i][j] = [y_i == y_j].
inline double alignment(const Matrix& k, std::span<const int> labels) {
  const auto n = static_cast<Eigen::Index>(labels.size());
  if (k.rows() != k.cols() || k.rows() != n) {
    throw DimensionError("alignment needs an n x n kernel for " + std::to_string(n) +
                         " labels, got " + std::to_string(k.rows()) + " x " +
                         std::to_string(k.cols()));
  }
  if (n == 0) throw AlignmentError("alignment of an empty kernel is undefined");
  bool two_classes = false;
  for (Eigen::Index i = 1; i < n && !two_classes; ++i) two_classes = labels[i] != labels[0];
  if (!two_classes) throw AlignmentError("alignment needs at least two distinct classes");

  double inner = 0.0;
  double same_pairs = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (labels[i] == labels[j]) {
        inner += k(i, j);
        same_pairs += 1.0;
      }
    }
  }
  const double k_norm = k.norm();
  if (!(k_norm > 0.0)) throw AlignmentError("alignment undefined for a zero kernel matrix");
  return inner / (k_norm * std::sqrt(same_pairs));
}

/// Sidecar path for a kernel cache file: same stem, .json extension.
inline std::filesystem::path kernel_sidecar_path(const std::filesystem::path& csv_path) {
  auto p = csv_path;
  p.replace_extension(".json");
  return p;
}

/// Writes the Gram matrix as headerless CSV (17 significant digits) plus JSON sidecar.
inline void write_kernel_csv(const std::filesystem::path& path, const KernelMatrix& k) {
  std::string out;
  for (Eigen::Index i = 0; i < k.values.rows(); ++i) {
    for (Eigen::Index j = 0; j < k.values.cols(); ++j) {
      if (j) out.push_back(',');
      out += csv::format_double(k.values(i, j));
    }
    out.push_back('\n');
  }
  csv::write_file(path, out);
  nlohmann::json side{{"kind", std::string(to_string(k.kind()))}, {"n", k.size()}, {"spec", k.spec}};
  csv::write_file(kernel_sidecar_path(path), side.dump(2) + "\n");
}

inline KernelMatrix read_kernel_csv(const std::filesystem::path& path) {
  const auto side_path = kernel_sidecar_path(path);
  nlohmann::json side;
  try {
    side = nlohmann::json::parse(csv::read_file(side_path));
  } catch (const nlohmann::json::exception& e) {
    throw DataError("bad kernel sidecar '" + side_path.string() + "': " + e.what());
  }
  const auto n = side.at("n").get<Eigen::Index>();
  KernelMatrix k{Matrix(n, n), side.at("spec").get<KernelSpec>()};

  std::istringstream in(csv::read_file(path));
  std::string line;
  Eigen::Index row = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (row >= n) throw DataError(path.string() + ": more than " + std::to_string(n) + " rows");
    const auto fields = csv::split_record(line);
    if (static_cast<Eigen::Index>(fields.size()) != n) {
      throw DataError(path.string() + ": row " + std::to_string(row + 1) + " has " +
                      std::to_string(fields.size()) + " columns, expected " + std::to_string(n));
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!csv::parse_double(fields[static_cast<std::size_t>(j)], k.values(row, j))) {
        throw DataError(path.string() + ": non-numeric value at row " + std::to_string(row + 1) +
                        ", column " + std::to_string(j + 1));
      }
    }
    ++row;
  }
  if (row != n) throw DataError(path.string() + ": expected " + std::to_string(n) + " rows");
  return k;
}

}  // namespace qkpca
