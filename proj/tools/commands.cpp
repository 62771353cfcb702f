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

#include "commands.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include <openssl/evp.h>

namespace qkpca::cli {

using json = nlohmann::json;

std::string sha256_file(const fs::path& path) {
  const std::string bytes = csv::read_file(path);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (ctx == nullptr || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx, bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx, digest, &len) != 1) {
    EVP_MD_CTX_free(ctx);
    throw Error("sha256 failed for '" + path.string() + "'");
  }
  EVP_MD_CTX_free(ctx);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xF]);
  }
  return out;
}

void OutputSet::remove_all() noexcept {
  std::error_code ec;
  std::set<fs::path> dirs;
  for (const auto& f : files_) {
    fs::remove(root_ / f, ec);
    for (auto p = f.parent_path(); !p.empty(); p = p.parent_path()) dirs.insert(root_ / p);
  }
  // Deepest first.
  for (auto it = dirs.rbegin(); it != dirs.rend(); ++it) {
    if (fs::is_directory(*it, ec) && fs::is_empty(*it, ec)) fs::remove(*it, ec);
  }
  files_.clear();
}

fs::path default_out_dir() {
  if (const char* env = std::getenv("QKPCA_OUT_DIR"); env != nullptr && *env != '\0') return env;
  return "qkpca_out";
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto first = item.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    const auto last = item.find_last_not_of(" \t");
    out.push_back(item.substr(first, last - first + 1));
  }
  return out;
}

std::vector<std::size_t> parse_dims(const std::string& text) {
  std::vector<std::size_t> dims;
  for (const auto& item : split_list(text)) {
    double v = 0.0;
    if (!csv::parse_double(item, v) || v < 1 || v != static_cast<double>(static_cast<std::size_t>(v))) {
      throw ConfigError("invalid dimension '" + item + "'");
    }
    dims.push_back(static_cast<std::size_t>(v));
  }
  if (dims.empty()) throw ConfigError("dimension list is empty");
  return dims;
}

void PipelineConfig::validate() const {
  if (!data.csv && !data.synth) throw ConfigError("no data source: give --csv or --synth");
  if (data.csv && data.synth) throw ConfigError("give either a CSV source or a synthetic source, not both");
  if (data.csv && data.features.empty()) throw ConfigError("CSV source needs --features");
  if (data.synth) data.synth->validate();
  if (kernels.empty()) throw ConfigError("at least one kernel is required");
  std::set<std::string> seen;
  for (const auto& k : kernels) {
    const auto kind = parse_kernel_kind(k);
    if (kind == KernelKind::Precomputed) throw ConfigError("kernel 'precomputed' cannot be used in a pipeline");
    if (!seen.insert(k).second) throw ConfigError("kernel '" + k + "' listed twice");
  }
  if (classifiers.empty()) throw ConfigError("at least one classifier is required");
  for (const auto& c : classifiers) parse_classifier_kind(c);
  if (dims.empty()) throw ConfigError("dims list is empty");
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (dims[i] < 1) throw ConfigError("dims must be >= 1");
    if (i > 0 && dims[i] >= dims[i - 1]) throw ConfigError("dims must be strictly descending");
  }
  if (sigma && !(*sigma > 0.0)) throw ConfigError("sigma must be > 0");
  if (reps < 1) throw ConfigError("reps must be >= 1");
  train.validate();
  if (repeats < 1) throw ConfigError("repeats must be >= 1");
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) throw ConfigError("train fraction must be in (0, 1)");
  if (threads < 1) throw ConfigError("threads must be >= 1");
}

json to_json(const PipelineConfig& c) {
  json data = json::object();
  if (c.data.csv) {
    data["csv"] = c.data.csv->string();
    data["features"] = c.data.features;
    data["label"] = c.data.label;
  }
  if (c.data.synth) data["synth"] = *c.data.synth;
  return {{"data", data},
          {"kernels", c.kernels},
          {"sigma", c.sigma ? json(*c.sigma) : json(nullptr)},
          {"reps", c.reps},
          {"train", c.train},
          {"dims", c.dims},
          {"classifiers", c.classifiers},
          {"repeats", c.repeats},
          {"base_seed", c.base_seed},
          {"train_fraction", c.train_fraction},
          {"out", c.out.string()}};
}

PipelineConfig pipeline_config_from_json(const json& j) {
  PipelineConfig c;
  try {
    if (!j.is_object()) throw ConfigError("pipeline config must be a JSON object");
    if (j.contains("data")) {
      const auto& d = j.at("data");
      if (d.contains("csv")) c.data.csv = d.at("csv").get<std::string>();
      if (d.contains("features")) c.data.features = d.at("features").get<std::vector<std::string>>();
      c.data.label = d.value("label", c.data.label);
      if (d.contains("synth")) c.data.synth = d.at("synth").get<SynthConfig>();
    }
    if (j.contains("kernels")) c.kernels = j.at("kernels").get<std::vector<std::string>>();
    if (j.contains("sigma") && !j.at("sigma").is_null()) c.sigma = j.at("sigma").get<double>();
    c.reps = j.value("reps", c.reps);
    if (j.contains("train")) c.train = j.at("train").get<TrainConfig>();
    if (j.contains("dims")) c.dims = j.at("dims").get<std::vector<std::size_t>>();
    if (j.contains("classifiers")) c.classifiers = j.at("classifiers").get<std::vector<std::string>>();
    c.repeats = j.value("repeats", c.repeats);
    c.base_seed = j.value("base_seed", c.base_seed);
    c.train_fraction = j.value("train_fraction", c.train_fraction);
    if (j.contains("out")) c.out = j.at("out").get<std::string>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad pipeline config: ") + e.what());
  }
  return c;
}

KernelSpec make_kernel_spec(const std::string& name, const Matrix& x, std::optional<double> sigma,
                            int reps, const std::optional<SaqkParams>& params) {
  switch (parse_kernel_kind(name)) {
    case KernelKind::Rbf: return KernelSpec::rbf(sigma ? *sigma : default_rbf_sigma(x));
    case KernelKind::PauliX: return KernelSpec::quantum(FeatureMapSpec::pauli_x());
    case KernelKind::ZMap: return KernelSpec::quantum(FeatureMapSpec::z_map(reps));
    case KernelKind::ZZMap: return KernelSpec::quantum(FeatureMapSpec::zz_map(reps));
    case KernelKind::Saqk:
      if (!params) throw ConfigError("saqk kernel needs trained parameters (--params)");
      return KernelSpec::quantum(FeatureMapSpec::saqk(*params));
    case KernelKind::Precomputed: break;
  }
  throw ConfigError("kernel '" + name + "' cannot be built from features");
}

namespace {

std::vector<std::string> row_labels(const Dataset& ds) {
  std::vector<std::string> out;
  out.reserve(ds.size());
  for (int y : ds.labels) out.push_back(ds.class_name(y));
  return out;
}

SaqkParams read_params(const fs::path& path) {
  try {
    return json::parse(csv::read_file(path)).get<SaqkParams>();
  } catch (const json::exception& e) {
    throw DataError("bad saqk params file '" + path.string() + "': " + e.what());
  }
}

std::string embedding_file_name(const std::string& kernel, std::size_t dim) {
  return "embedding_" + kernel + "_" + std::to_string(dim) + "d.csv";
}

/// Writes the sweep CSVs plus an embeddings.json index into `dir` (relative to `out`).
void write_embeddings(OutputSet& out, const fs::path& dir, const std::string& kernel,
                      const std::map<std::size_t, Matrix>& coords, const std::vector<std::string>& labels,
                      json& index) {
  for (auto it = coords.rbegin(); it != coords.rend(); ++it) {
    const auto name = embedding_file_name(kernel, it->first);
    out.write(dir / name, embedding_csv(it->second, labels));
    index["entries"].push_back({{"kernel", kernel}, {"dim", it->first}, {"file", name}});
  }
}

template <class Fn>
auto run_stage(const char* name, std::map<std::string, double>& timings, Fn&& fn) {
  const auto start = std::chrono::steady_clock::now();
  try {
    if constexpr (std::is_void_v<decltype(fn())>) {
      fn();
      timings[name] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    } else {
      auto result = fn();
      timings[name] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      return result;
    }
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(name, e.what(), exit_code_for(e));
  }
}

}  // namespace

void run_synth(const SynthOptions& opts) {
  const auto ds = synthesize(opts.config);
  const auto path = opts.out / ("synth_" + std::string(to_string(opts.config.kind)) + ".csv");
  write_dataset_csv(path, ds);
  std::cerr << "wrote " << path.string() << " (" << ds.size() << " x " << ds.dims() << ")\n";
}

void run_ingest(const IngestOptions& opts) {
  auto ds = load_csa_csv(opts.csv, opts.features, opts.label);
  ds.validate();
  if (opts.preprocess) ds = preprocess(ds);
  const auto path = opts.out / "dataset.csv";
  write_dataset_csv(path, ds);
  std::cerr << "wrote " << path.string() << " (" << ds.size() << " x " << ds.dims() << ", "
            << ds.num_classes() << " classes)\n";
}

void run_kernel(const KernelOptions& opts) {
  const auto ds = load_labelled_csv(opts.data, opts.label);
  std::optional<SaqkParams> params;
  if (opts.params) params = read_params(*opts.params);
  const auto spec = make_kernel_spec(opts.kind, ds.features, opts.sigma, opts.reps, params);
  const auto k = gram(ds.features, spec, opts.threads);
  const auto path = opts.out / ("kernel_" + opts.kind + ".csv");
  write_kernel_csv(path, k);
  std::cerr << "wrote " << path.string() << " (" << k.size() << " x " << k.size() << ")\n";
}

void run_pca(const KernelOptions& opts) {
  const auto ds = load_labelled_csv(opts.data, opts.label);
  std::optional<SaqkParams> params;
  if (opts.params) params = read_params(*opts.params);
  const auto spec = make_kernel_spec(opts.kind, ds.features, opts.sigma, opts.reps, params);
  const auto coords = sweep(ds.features, spec, opts.dims, opts.threads);
  OutputSet out(opts.out);
  json index{{"entries", json::array()}};
  write_embeddings(out, "", opts.kind, coords, row_labels(ds), index);
  out.write("embeddings.json", index.dump(2) + "\n");
  std::cerr << "wrote " << coords.size() << " embeddings to " << opts.out.string() << "\n";
}

void run_train_kernel(const TrainOptions& opts) {
  const auto ds = load_labelled_csv(opts.data, opts.label);
  const auto result = train_saqk(ds.features, ds.labels, opts.config, opts.threads);
  OutputSet out(opts.out);
  out.write("saqk_params.json", json(result.params).dump(2) + "\n");
  out.write("train_history.csv", result.history.to_csv());
  std::cerr << "alignment " << result.history.initial_alignment << " -> "
            << result.history.final_alignment << "; wrote " << (opts.out / "saqk_params.json").string()
            << "\n";
}

void run_bench(const BenchOptions& opts) {
  Embeddings embeddings;
  std::optional<std::vector<std::string>> reference;
  std::vector<int> labels;
  for (const auto& index_path : opts.indexes) {
    json index;
    try {
      index = json::parse(csv::read_file(index_path));
    } catch (const json::exception& e) {
      throw DataError("bad embeddings index '" + index_path.string() + "': " + e.what());
    }
    for (const auto& entry : index.at("entries")) {
      const auto file = index_path.parent_path() / entry.at("file").get<std::string>();
      const auto ds = load_labelled_csv(file, "label");
      const auto names = row_labels(ds);
      if (!reference) {
        reference = names;
        labels = ds.labels;
      } else if (*reference != names) {
        throw DimensionError("embedding '" + file.string() + "' has different samples or labels");
      }
      embeddings[entry.at("kernel").get<std::string>()][entry.at("dim").get<std::size_t>()] = ds.features;
    }
  }
  BenchmarkConfig cfg;
  for (const auto& c : opts.classifiers) cfg.classifiers.push_back(parse_classifier_kind(c));
  cfg.repeats = opts.repeats;
  cfg.base_seed = opts.base_seed;
  cfg.train_fraction = opts.train_fraction;
  cfg.threads = opts.threads;
  const auto report = run_benchmark(embeddings, labels, cfg);
  OutputSet out(opts.out);
  out.write("report.csv", report.to_csv());
  out.write("summary.json", report.to_json().dump(2) + "\n");
  std::cerr << "wrote " << report.records.size() << " score rows to " << (opts.out / "report.csv").string()
            << "\n";
}

void run_pipeline(const PipelineConfig& config) {
  config.validate();
  OutputSet out(config.out);
  std::map<std::string, double> timings;
  json inputs = json::array();
  try {
    Dataset ds = run_stage("ingest", timings, [&] {
      Dataset raw;
      if (config.data.csv) {
        raw = load_csa_csv(*config.data.csv, config.data.features, config.data.label);
        inputs.push_back({{"path", config.data.csv->string()}, {"sha256", sha256_file(*config.data.csv)}});
      } else {
        raw = synthesize(*config.data.synth);
      }
      raw.validate();
      return raw;
    });

    ds = run_stage("preprocess", timings, [&] {
      auto pre = preprocess(ds);
      write_dataset_csv(out.root() / "dataset.csv", pre);
      out.remember("dataset.csv");
      out.remember("dataset.json");
      return pre;
    });

    const std::size_t max_dim = config.dims.front();
    if (max_dim > ds.dims()) {
      throw StageError("preprocess",
                       "largest dim " + std::to_string(max_dim) + " exceeds feature count " +
                           std::to_string(ds.dims()),
                       2);
    }

    std::optional<SaqkParams> params;
    if (std::find(config.kernels.begin(), config.kernels.end(), "saqk") != config.kernels.end()) {
      params = run_stage("train-kernel", timings, [&] {
        const auto result = train_saqk(ds.features, ds.labels, config.train, config.threads);
        out.write("saqk_params.json", json(result.params).dump(2) + "\n");
        out.write("train_history.csv", result.history.to_csv());
        std::cerr << "saqk alignment " << result.history.initial_alignment << " -> "
                  << result.history.final_alignment << "\n";
        return result.params;
      });
    }

    const auto labels = row_labels(ds);
    Embeddings embeddings;
    json index{{"entries", json::array()}};
    for (const auto& name : config.kernels) {
      const std::string stage = "kernel:" + name;
      run_stage(stage.c_str(), timings, [&] {
        const auto spec = make_kernel_spec(name, ds.features, config.sigma, config.reps, params);
        const auto k = gram(ds.features, spec, config.threads);
        write_kernel_csv(out.root() / "kernels" / ("kernel_" + name + ".csv"), k);
        out.remember(fs::path("kernels") / ("kernel_" + name + ".csv"));
        out.remember(fs::path("kernels") / ("kernel_" + name + ".json"));
        embeddings[name] = sweep(k, config.dims);
        write_embeddings(out, "embeddings", name, embeddings[name], labels, index);
      });
    }
    out.write(fs::path("embeddings") / "embeddings.json", index.dump(2) + "\n");

    run_stage("bench", timings, [&] {
      BenchmarkConfig cfg;
      for (const auto& c : config.classifiers) cfg.classifiers.push_back(parse_classifier_kind(c));
      cfg.repeats = config.repeats;
      cfg.base_seed = config.base_seed;
      cfg.train_fraction = config.train_fraction;
      cfg.threads = config.threads;
      const auto report = run_benchmark(embeddings, ds.labels, cfg);
      out.write("report.csv", report.to_csv());
      out.write("summary.json", report.to_json().dump(2) + "\n");
    });

    json outputs = json::array();
    for (const auto& f : out.files()) {
      outputs.push_back({{"path", f.generic_string()}, {"sha256", sha256_file(out.root() / f)}});
    }
    json seeds{{"benchmark", config.base_seed}, {"train", config.train.seed}};
    if (config.data.synth) seeds["data"] = config.data.synth->seed;
    json manifest{{"tool", "qkpca"},
                  {"config", to_json(config)},
                  {"seeds", seeds},
                  {"inputs", inputs},
                  {"outputs", outputs},
                  {"threads", config.threads},
                  {"timing_seconds", timings}};
    out.write("manifest.json", manifest.dump(2) + "\n");
    std::cerr << "pipeline finished: " << out.files().size() << " files in " << config.out.string() << "\n";
  } catch (...) {
    out.remove_all();
    throw;
  }
}

}  // namespace qkpca::cli
