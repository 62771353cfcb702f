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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qkpca {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration values (qubit counts, hyperparameters, CLI options).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Invalid call arguments: indices out of range, mismatched shapes.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public ArgumentError {
 public:
  using ArgumentError::ArgumentError;
};

/// A kernel-derived object was combined with data built from a different kernel.
class ProvenanceError : public ArgumentError {
 public:
  using ArgumentError::ArgumentError;
};

/// Malformed or missing input data (CSV ingest, cached matrices).
class DataError : public Error {
 public:
  using Error::Error;
};

class AlignmentError : public Error {
 public:
  using Error::Error;
};

class TrainingError : public Error {
 public:
  using Error::Error;
};

/// Requested more principal components than the centered kernel supports.
class RankDeficiencyError : public Error {
 public:
  RankDeficiencyError(const std::string& what, std::size_t achievable)
      : Error(what), achievable_k_(achievable) {}

  std::size_t achievable_k() const noexcept { return achievable_k_; }

 private:
  std::size_t achievable_k_;
};

}  // namespace qkpca
