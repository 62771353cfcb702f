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
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qkpca/error.hpp"
#include "qkpca/statevector.hpp"

namespace qkpca {

enum class FeatureMapKind { PauliX, ZMap, ZZMap, Saqk };

inline std::string_view to_string(FeatureMapKind kind) {
  switch (kind) {
    case FeatureMapKind::PauliX: return "pauli-x";
    case FeatureMapKind::ZMap: return "z-map";
    case FeatureMapKind::ZZMap: return "zz-map";
    case FeatureMapKind::Saqk: return "saqk";
  }
  return "unknown";
}

inline FeatureMapKind parse_feature_map_kind(std::string_view name) {
  if (name == "pauli-x") return FeatureMapKind::PauliX;
  if (name == "z-map") return FeatureMapKind::ZMap;
  if (name == "zz-map") return FeatureMapKind::ZZMap;
  if (name == "saqk") return FeatureMapKind::Saqk;
  throw ConfigError("unknown feature map '" + std::string(name) + "'");
}

/// Trainable per-qubit multipliers of the self-adaptive Rx layer.
struct SaqkParams {
  std::vector<double> theta;

  static SaqkParams ones(std::size_t d) { return {std::vector<double>(d, 1.0)}; }
  static SaqkParams zeros(std::size_t d) { return {std::vector<double>(d, 0.0)}; }

  std::size_t size() const noexcept { return theta.size(); }

  void validate() const {
    for (std::size_t i = 0; i < theta.size(); ++i) {
      if (!std::isfinite(theta[i])) {
        throw ConfigError("saqk theta[" + std::to_string(i) + "] is not finite");
      }
    }
  }

  bool operator==(const SaqkParams&) const = default;
};

inline void to_json(nlohmann::json& j, const SaqkParams& p) { j = nlohmann::json{{"theta", p.theta}}; }

inline void from_json(const nlohmann::json& j, SaqkParams& p) {
  if (!j.is_object() || !j.contains("theta") || !j.at("theta").is_array()) {
    throw DataError("saqk params JSON must be an object with a \"theta\" array");
  }
  p.theta = j.at("theta").get<std::vector<double>>();
  p.validate();
}

struct FeatureMapSpec {
  FeatureMapKind kind = FeatureMapKind::PauliX;
  /// Circuit repetitions; only meaningful for ZMap and ZZMap.
  int reps = 2;
  /// Required iff kind == Saqk.
  std::optional<SaqkParams> params;

  static FeatureMapSpec pauli_x() { return {FeatureMapKind::PauliX, 1, std::nullopt}; }
  static FeatureMapSpec z_map(int reps = 2) { return {FeatureMapKind::ZMap, reps, std::nullopt}; }
  static FeatureMapSpec zz_map(int reps = 2) { return {FeatureMapKind::ZZMap, reps, std::nullopt}; }
  static FeatureMapSpec saqk(SaqkParams params) { return {FeatureMapKind::Saqk, 1, std::move(params)}; }

  /// Checks the spec against a feature dimension.
  void validate(std::size_t d) const {
    if (reps < 1) throw ConfigError("feature map reps must be >= 1, got " + std::to_string(reps));
    if (d < 1 || d > static_cast<std::size_t>(StateVector::kMaxQubits)) {
      throw DimensionError("feature dimension " + std::to_string(d) + " outside [1, " +
                           std::to_string(StateVector::kMaxQubits) + "]");
    }
    if (kind == FeatureMapKind::Saqk) {
      if (!params) throw ConfigError("saqk feature map requires theta parameters");
      if (params->size() != d) {
        throw DimensionError("saqk theta has " + std::to_string(params->size()) +
                             " entries but data has " + std::to_string(d) + " features");
      }
      params->validate();
    } else if (params) {
      throw ConfigError("theta parameters are only valid for the saqk feature map");
    }
  }

  bool operator==(const FeatureMapSpec&) const = default;
};

inline void to_json(nlohmann::json& j, const FeatureMapSpec& s) {
  j = nlohmann::json{{"kind", std::string(to_string(s.kind))}, {"reps", s.reps}};
  if (s.params) j["theta"] = s.params->theta;
}

inline void from_json(const nlohmann::json& j, FeatureMapSpec& s) {
  s.kind = parse_feature_map_kind(j.at("kind").get<std::string>());
  s.reps = j.value("reps", 2);
  s.params.reset();
  if (j.contains("theta")) s.params = SaqkParams{j.at("theta").get<std::vector<double>>()};
}

namespace detail {

inline void hadamard_layer(StateVector& s) {
  for (int q = 0; q < s.num_qubits(); ++q) s.h(q);
}

inline void z_layer(StateVector& s, std::span<const double> x) {
  for (int q = 0; q < s.num_qubits(); ++q) s.phase(q, 2.0 * x[q]);
}

}  // namespace detail

/// Prepares the embedding |psi(x)> of a feature vector.
///
/// Circuits, with qubit i carrying feature i:
///   PauliX: Rx(x_i) on |0>.
///   ZMap:   reps x [H on all qubits; P(2 x_i)].
///   ZZMap:  reps x [H; P(2 x_i); for each adjacent pair (i, i+1):
///           CX(i, i+1) P(2 (pi - x_i)(pi - x_{i+1})) on i+1, CX(i, i+1)].
///   Saqk:   Rx(theta_i x_i) first, then Rz(x_i).
inline StateVector encode(std::span<const double> x, const FeatureMapSpec& spec) {
  spec.validate(x.size());
  const int d = static_cast<int>(x.size());
  StateVector s = StateVector::zero(d);
  switch (spec.kind) {
    case FeatureMapKind::PauliX:
      for (int q = 0; q < d; ++q) s.rx(q, x[q]);
      break;
    case FeatureMapKind::ZMap:
      for (int r = 0; r < spec.reps; ++r) {
        detail::hadamard_layer(s);
        detail::z_layer(s, x);
      }
      break;
    case FeatureMapKind::ZZMap:
      for (int r = 0; r < spec.reps; ++r) {
        detail::hadamard_layer(s);
        detail::z_layer(s, x);
        for (int q = 0; q + 1 < d; ++q) {
          const double angle = 2.0 * (std::numbers::pi - x[q]) * (std::numbers::pi - x[q + 1]);
          s.cx(q, q + 1);
          s.phase(q + 1, angle);
          s.cx(q, q + 1);
        }
      }
      break;
    case FeatureMapKind::Saqk: {
      const auto& theta = spec.params->theta;
      for (int q = 0; q < d; ++q) s.rx(q, theta[q] * x[q]);
      for (int q = 0; q < d; ++q) s.rz(q, x[q]);
      break;
    }
  }
  return s;
}

}  // namespace qkpca
