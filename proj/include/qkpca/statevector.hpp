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
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qkpca/error.hpp"

namespace qkpca {

using Amplitude = std::complex<double>;

/// Row-major 2x2 unitary: {m00, m01, m10, m11}.
using Gate2 = std::array<Amplitude, 4>;

namespace gates {

inline Gate2 rx(double angle) {
  const double c = std::cos(angle / 2.0);
  const double s = std::sin(angle / 2.0);
  return {Amplitude{c, 0.0}, Amplitude{0.0, -s}, Amplitude{0.0, -s}, Amplitude{c, 0.0}};
}

inline Gate2 rz(double angle) {
  return {std::polar(1.0, -angle / 2.0), Amplitude{}, Amplitude{}, std::polar(1.0, angle / 2.0)};
}

inline Gate2 h() {
  const double r = 1.0 / std::sqrt(2.0);
  return {Amplitude{r, 0.0}, Amplitude{r, 0.0}, Amplitude{r, 0.0}, Amplitude{-r, 0.0}};
}

inline Gate2 phase(double angle) {
  return {Amplitude{1.0, 0.0}, Amplitude{}, Amplitude{}, std::polar(1.0, angle)};
}

}  // namespace gates

/// Dense pure state of a small qubit register.
///
/// Basis index bit q holds qubit q (qubit 0 is the least-significant bit).
/// Gate methods mutate in place and return *this so circuits can be chained.
class StateVector {
 public:
  static constexpr int kMaxQubits = 12;

  /// |0...0> on `num_qubits` qubits.
  static StateVector zero(int num_qubits) {
    check_qubit_count(num_qubits);
    StateVector s(num_qubits);
    s.amplitudes_[0] = Amplitude{1.0, 0.0};
    return s;
  }

  /// Wraps raw amplitudes. No normalization is applied.
  static StateVector from_amplitudes(int num_qubits, std::vector<Amplitude> amplitudes) {
    check_qubit_count(num_qubits);
    if (amplitudes.size() != (std::size_t{1} << num_qubits)) {
      throw DimensionError("amplitude count " + std::to_string(amplitudes.size()) +
                           " does not match 2^" + std::to_string(num_qubits));
    }
    StateVector s(num_qubits);
    s.amplitudes_ = std::move(amplitudes);
    return s;
  }

  int num_qubits() const noexcept { return num_qubits_; }
  std::size_t dimension() const noexcept { return amplitudes_.size(); }
  std::span<const Amplitude> amplitudes() const noexcept { return amplitudes_; }
  const Amplitude& operator[](std::size_t index) const { return amplitudes_[index]; }

  double norm_squared() const {
    double total = 0.0;
    for (const auto& a : amplitudes_) total += std::norm(a);
    return total;
  }

  /// Applies an arbitrary single-qubit unitary to `qubit`.
  StateVector& apply(int qubit, const Gate2& g) {
    check_qubit(qubit);
    const std::size_t mask = std::size_t{1} << qubit;
    const std::size_t n = amplitudes_.size();
    for (std::size_t i = 0; i < n; ++i) {
      if (i & mask) continue;
      const Amplitude a0 = amplitudes_[i];
      const Amplitude a1 = amplitudes_[i | mask];
      amplitudes_[i] = g[0] * a0 + g[1] * a1;
      amplitudes_[i | mask] = g[2] * a0 + g[3] * a1;
    }
    return *this;
  }

  StateVector& rx(int qubit, double angle) { return apply(qubit, gates::rx(angle)); }

  // Diagonal gates only touch phases.
  StateVector& rz(int qubit, double angle) {
    return apply_diagonal(qubit, std::polar(1.0, -angle / 2.0), std::polar(1.0, angle / 2.0));
  }

  StateVector& phase(int qubit, double angle) {
    return apply_diagonal(qubit, Amplitude{1.0, 0.0}, std::polar(1.0, angle));
  }

  StateVector& h(int qubit) { return apply(qubit, gates::h()); }

  StateVector& cx(int control, int target) {
    check_qubit(control);
    check_qubit(target);
    if (control == target) {
      throw ArgumentError("cx control and target must differ (both " +
                          std::to_string(control) + ")");
    }
    const std::size_t cmask = std::size_t{1} << control;
    const std::size_t tmask = std::size_t{1} << target;
    for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
      if ((i & cmask) && !(i & tmask)) std::swap(amplitudes_[i], amplitudes_[i | tmask]);
    }
    return *this;
  }

 private:
  explicit StateVector(int num_qubits)
      : num_qubits_(num_qubits), amplitudes_(std::size_t{1} << num_qubits) {}

  static void check_qubit_count(int num_qubits) {
    if (num_qubits < 1 || num_qubits > kMaxQubits) {
      throw ConfigError("qubit count must be in [1, " + std::to_string(kMaxQubits) +
                        "], got " + std::to_string(num_qubits));
    }
  }

  void check_qubit(int qubit) const {
    if (qubit < 0 || qubit >= num_qubits_) {
      throw ArgumentError("qubit index " + std::to_string(qubit) + " out of range for " +
                          std::to_string(num_qubits_) + "-qubit register");
    }
  }

  StateVector& apply_diagonal(int qubit, Amplitude d0, Amplitude d1) {
    check_qubit(qubit);
    const std::size_t mask = std::size_t{1} << qubit;
    for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
      amplitudes_[i] *= (i & mask) ? d1 : d0;
    }
    return *this;
  }

  int num_qubits_;
  std::vector<Amplitude> amplitudes_;
};

inline StateVector new_zero_state(int num_qubits) { return StateVector::zero(num_qubits); }

inline StateVector apply_rx(StateVector s, int qubit, double angle) { return std::move(s.rx(qubit, angle)); }
inline StateVector apply_rz(StateVector s, int qubit, double angle) { return std::move(s.rz(qubit, angle)); }
inline StateVector apply_h(StateVector s, int qubit) { return std::move(s.h(qubit)); }
inline StateVector apply_phase(StateVector s, int qubit, double angle) { return std::move(s.phase(qubit, angle)); }
inline StateVector apply_cx(StateVector s, int control, int target) { return std::move(s.cx(control, target)); }

/// <a|b>.
inline Amplitude inner_product(const StateVector& a, const StateVector& b) {
  if (a.num_qubits() != b.num_qubits()) {
    throw DimensionError("register size mismatch: " + std::to_string(a.num_qubits()) +
                         " vs " + std::to_string(b.num_qubits()) + " qubits");
  }
  const auto x = a.amplitudes();
  const auto y = b.amplitudes();
  double re = 0.0;
  double im = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    re += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
    im += x[i].real() * y[i].imag() - x[i].imag() * y[i].real();
  }
  return {re, im};
}

/// Pure-state fidelity |<a|b>|^2, clamped to [0, 1].
inline double fidelity(const StateVector& a, const StateVector& b) {
  return std::clamp(std::norm(inner_product(a, b)), 0.0, 1.0);
}

}  // namespace qkpca
