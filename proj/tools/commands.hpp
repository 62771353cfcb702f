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

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qkpca/qkpca.hpp"

namespace qkpca::cli {

namespace fs = std::filesystem;

/// Error tagged with the pipeline stage that raised it.
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& cause, int exit_code)
      : Error("stage '" + stage + "' failed: " + cause), stage_(std::move(stage)), exit_code_(exit_code) {}

  const std::string& stage() const noexcept { return stage_; }
  int exit_code() const noexcept { return exit_code_; }

 private:
  std::string stage_;
  int exit_code_;
};

/// Exit code for an exception: 2 for usage/config problems, 1 otherwise.
inline int exit_code_for(const std::exception& e) {
  if (const auto* s = dynamic_cast<const StageError*>(&e)) return s->exit_code();
  if (dynamic_cast<const ConfigError*>(&e)) return 2;
  return 1;
}

/// Hex SHA-256 of a file's bytes.
std::string sha256_file(const fs::path& path);

/// Records every file a command writes so a failed run can remove them.
class OutputSet {
 public:
  explicit OutputSet(fs::path root) : root_(std::move(root)) {}

  const fs::path& root() const noexcept { return root_; }

  void write(const fs::path& relative, std::string_view contents) {
    const auto full = root_ / relative;
    csv::write_file(full, contents);
    remember(relative);
  }

  void remember(const fs::path& relative) {
    for (const auto& f : files_) {
      if (f == relative) return;
    }
    files_.push_back(relative);
  }

  const std::vector<fs::path>& files() const noexcept { return files_; }

  /// Deletes every recorded file, then any directories left empty under root.
  void remove_all() noexcept;

 private:
  fs::path root_;
  std::vector<fs::path> files_;
};

struct DataSource {
  std::optional<fs::path> csv;
  std::vector<std::string> features;
  std::string label = "label";
  std::optional<SynthConfig> synth;
};

struct PipelineConfig {
  DataSource data;
  std::vector<std::string> kernels = {"rbf", "saqk"};
  std::optional<double> sigma;
  int reps = 2;
  TrainConfig train;
  std::vector<std::size_t> dims = {7, 6, 5, 4, 3, 2};
  std::vector<std::string> classifiers = {"lr", "knn", "nb", "rf", "et"};
  int repeats = 10;
  std::uint64_t base_seed = 0;
  double train_fraction = 0.8;
  fs::path out = "qkpca_out";
  int threads = 1;

  /// Checks everything that does not need the data.
  void validate() const;
};

nlohmann::json to_json(const PipelineConfig& c);
PipelineConfig pipeline_config_from_json(const nlohmann::json& j);

/// Default output directory: $QKPCA_OUT_DIR or ./qkpca_out.
fs::path default_out_dir();

std::vector<std::string> split_list(const std::string& text);
std::vector<std::size_t> parse_dims(const std::string& text);

/// Builds the kernel spec for a named kernel on data with `d` features.
KernelSpec make_kernel_spec(const std::string& name, const Matrix& x, std::optional<double> sigma,
                            int reps, const std::optional<SaqkParams>& params);

struct SynthOptions {
  SynthConfig config;
  fs::path out;
};
void run_synth(const SynthOptions& opts);

struct IngestOptions {
  fs::path csv;
  std::vector<std::string> features;
  std::string label = "label";
  bool preprocess = true;
  fs::path out;
};
void run_ingest(const IngestOptions& opts);

struct KernelOptions {
  fs::path data;
  std::string label = "label";
  std::string kind = "rbf";
  std::optional<double> sigma;
  int reps = 2;
  std::optional<fs::path> params;
  std::vector<std::size_t> dims;  // pca only
  fs::path out;
  int threads = 1;
};
void run_kernel(const KernelOptions& opts);
void run_pca(const KernelOptions& opts);

struct TrainOptions {
  fs::path data;
  std::string label = "label";
  TrainConfig config;
  fs::path out;
  int threads = 1;
};
void run_train_kernel(const TrainOptions& opts);

struct BenchOptions {
  std::vector<fs::path> indexes;
  std::vector<std::string> classifiers;
  int repeats = 10;
  std::uint64_t base_seed = 0;
  double train_fraction = 0.8;
  fs::path out;
  int threads = 1;
};
void run_bench(const BenchOptions& opts);

/// Full ingest/synth -> preprocess -> train -> Gram -> kPCA sweep -> benchmark run.
/// Writes a manifest.json listing the resolved config and every output's hash.
void run_pipeline(const PipelineConfig& config);

}  // namespace qkpca::cli
