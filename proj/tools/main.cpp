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

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"

namespace {

using namespace qkpca;
using namespace qkpca::cli;

struct TrainFlags {
  CLI::Option* iterations = nullptr;
  CLI::Option* a = nullptr;
  CLI::Option* c = nullptr;
  CLI::Option* alpha = nullptr;
  CLI::Option* gamma = nullptr;
  CLI::Option* minibatch = nullptr;
  CLI::Option* seed = nullptr;
  int iterations_v = 100;
  double a_v = 0.1, c_v = 0.1, alpha_v = 0.602, gamma_v = 0.101;
  std::size_t minibatch_v = 100;
  std::uint64_t seed_v = 0;

  void add(CLI::App* app) {
    iterations = app->add_option("--iterations", iterations_v, "SPSA iterations (>= 1)")->capture_default_str();
    a = app->add_option("--spsa-a", a_v, "SPSA step-size numerator")->capture_default_str();
    c = app->add_option("--spsa-c", c_v, "SPSA perturbation numerator")->capture_default_str();
    alpha = app->add_option("--spsa-alpha", alpha_v, "step-size decay exponent")->capture_default_str();
    gamma = app->add_option("--spsa-gamma", gamma_v, "perturbation decay exponent")->capture_default_str();
    minibatch = app->add_option("--minibatch", minibatch_v, "rows per alignment evaluation (0 = all rows)")
                    ->capture_default_str();
    seed = app->add_option("--train-seed", seed_v, "seed for minibatches and perturbations")->capture_default_str();
  }

  /// Copies flags that were given on the command line over `cfg`.
  void apply(TrainConfig& cfg) const {
    if (iterations->count()) cfg.iterations = iterations_v;
    if (a->count()) cfg.spsa_a = a_v;
    if (c->count()) cfg.spsa_c = c_v;
    if (alpha->count()) cfg.spsa_alpha = alpha_v;
    if (gamma->count()) cfg.spsa_gamma = gamma_v;
    if (minibatch->count()) {
      if (minibatch_v == 0) {
        cfg.minibatch.reset();
      } else {
        cfg.minibatch = minibatch_v;
      }
    }
    if (seed->count()) cfg.seed = seed_v;
  }
};

const std::vector<std::string> kKernelNames = {"rbf", "pauli-x", "z-map", "zz-map", "saqk"};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qkpca: quantum-kernel PCA toolkit for compact sensor-array readout"};
  app.require_subcommand(1);
  int threads = default_thread_count();
  app.add_option("--threads", threads, "worker threads")->capture_default_str()->check(CLI::PositiveNumber);

  // synth
  auto* synth = app.add_subcommand("synth", "generate a low-entropy synthetic dataset");
  SynthOptions synth_opts;
  std::string synth_kind = "nonlinear";
  synth_opts.out = default_out_dir();
  synth->add_option("--kind", synth_kind, "linear or nonlinear")
      ->check(CLI::IsMember({"linear", "nonlinear"}))
      ->capture_default_str();
  synth->add_option("--n", synth_opts.config.n, "samples (>= 10)")->capture_default_str();
  synth->add_option("--d", synth_opts.config.d, "features")->capture_default_str();
  synth->add_option("--noise-sigma", synth_opts.config.noise_sigma, "noise standard deviation")->capture_default_str();
  synth->add_option("--seed", synth_opts.config.seed, "generator seed")->capture_default_str();
  synth->add_option("--out", synth_opts.out, "output directory (default $QKPCA_OUT_DIR)");

  // ingest
  auto* ingest = app.add_subcommand("ingest", "load sensor CSV columns and preprocess to [0, pi]");
  IngestOptions ingest_opts;
  std::string ingest_features;
  bool no_preprocess = false;
  ingest_opts.out = default_out_dir();
  ingest->add_option("--csv", ingest_opts.csv, "input CSV with header")->required();
  ingest->add_option("--features", ingest_features, "comma-separated feature columns")->required();
  ingest->add_option("--label", ingest_opts.label, "label column")->capture_default_str();
  ingest->add_flag("--no-preprocess", no_preprocess, "write the selected columns unchanged");
  ingest->add_option("--out", ingest_opts.out, "output directory");

  // kernel / pca share options
  KernelOptions kernel_opts;
  kernel_opts.out = default_out_dir();
  double sigma = 0.0;
  std::string params_path;
  std::string dims_text = "7,6,5,4,3,2";
  auto add_kernel_opts = [&](CLI::App* sub, CLI::Option*& sigma_opt, CLI::Option*& params_opt) {
    sub->add_option("--data", kernel_opts.data, "dataset CSV (features + label column)")->required();
    sub->add_option("--label", kernel_opts.label, "label column")->capture_default_str();
    sub->add_option("--kind", kernel_opts.kind, "rbf, pauli-x, z-map, zz-map or saqk")
        ->check(CLI::IsMember(kKernelNames))
        ->capture_default_str();
    sigma_opt = sub->add_option("--sigma", sigma, "RBF width (default from data variance)");
    sub->add_option("--reps", kernel_opts.reps, "z-map / zz-map repetitions")->capture_default_str();
    params_opt = sub->add_option("--params", params_path, "SAQK parameter JSON");
    sub->add_option("--out", kernel_opts.out, "output directory");
  };
  auto* kernel = app.add_subcommand("kernel", "compute a Gram matrix");
  CLI::Option *kernel_sigma = nullptr, *kernel_params = nullptr;
  add_kernel_opts(kernel, kernel_sigma, kernel_params);
  auto* pca = app.add_subcommand("pca", "kernel PCA dimension sweep");
  CLI::Option *pca_sigma = nullptr, *pca_params = nullptr;
  add_kernel_opts(pca, pca_sigma, pca_params);
  pca->add_option("--dims", dims_text, "comma-separated target dimensions")->capture_default_str();

  // train-kernel
  auto* train = app.add_subcommand("train-kernel", "train SAQK parameters by kernel-target alignment");
  TrainOptions train_opts;
  train_opts.out = default_out_dir();
  TrainFlags train_flags;
  train->add_option("--data", train_opts.data, "dataset CSV")->required();
  train->add_option("--label", train_opts.label, "label column")->capture_default_str();
  train->add_option("--out", train_opts.out, "output directory");
  train_flags.add(train);

  // bench
  auto* bench = app.add_subcommand("bench", "benchmark classifiers on embeddings");
  BenchOptions bench_opts;
  bench_opts.out = default_out_dir();
  std::string bench_classifiers = "lr,knn,nb,rf,et";
  bench->add_option("--index", bench_opts.indexes, "embeddings.json written by pca (repeatable)")->required();
  bench->add_option("--classifiers", bench_classifiers, "subset of lr,knn,nb,rf,et")->capture_default_str();
  bench->add_option("--repeats", bench_opts.repeats, "split repeats")->capture_default_str();
  bench->add_option("--seed", bench_opts.base_seed, "base seed")->capture_default_str();
  bench->add_option("--train-fraction", bench_opts.train_fraction, "training fraction")->capture_default_str();
  bench->add_option("--out", bench_opts.out, "output directory");

  // pipeline
  auto* pipe = app.add_subcommand("pipeline", "run the full compression + evaluation pipeline");
  std::string config_path, manifest_path, csv_path, features_text, label_name = "label", synth_name;
  std::string kernels_text, classifiers_text, pipe_dims;
  SynthConfig pipe_synth;
  int reps = 2, repeats = 10;
  std::uint64_t base_seed = 0;
  double train_fraction = 0.8, pipe_sigma = 0.0;
  std::string pipe_out;
  TrainFlags pipe_train;
  auto* o_config = pipe->add_option("--config", config_path, "JSON config file (flags override it)");
  auto* o_manifest = pipe->add_option("--manifest", manifest_path, "rerun the config recorded in a manifest");
  auto* o_csv = pipe->add_option("--csv", csv_path, "input CSV");
  auto* o_features = pipe->add_option("--features", features_text, "comma-separated feature columns");
  auto* o_label = pipe->add_option("--label", label_name, "label column");
  auto* o_synth = pipe->add_option("--synth", synth_name, "synthetic source: linear or nonlinear")
                      ->check(CLI::IsMember({"linear", "nonlinear"}));
  auto* o_n = pipe->add_option("--n", pipe_synth.n, "synthetic samples");
  auto* o_d = pipe->add_option("--d", pipe_synth.d, "synthetic features");
  auto* o_noise = pipe->add_option("--noise-sigma", pipe_synth.noise_sigma, "synthetic noise sd");
  auto* o_data_seed = pipe->add_option("--data-seed", pipe_synth.seed, "synthetic data seed");
  auto* o_kernels = pipe->add_option("--kernels", kernels_text, "comma-separated kernels (default rbf,saqk)");
  auto* o_sigma = pipe->add_option("--sigma", pipe_sigma, "RBF width override");
  auto* o_reps = pipe->add_option("--reps", reps, "z-map / zz-map repetitions");
  auto* o_dims = pipe->add_option("--dims", pipe_dims, "descending dims (default 7,6,5,4,3,2)");
  auto* o_classifiers = pipe->add_option("--classifiers", classifiers_text, "subset of lr,knn,nb,rf,et");
  auto* o_repeats = pipe->add_option("--repeats", repeats, "split repeats (default 10)");
  auto* o_seed = pipe->add_option("--seed", base_seed, "benchmark base seed");
  auto* o_fraction = pipe->add_option("--train-fraction", train_fraction, "training fraction");
  auto* o_out = pipe->add_option("--out", pipe_out, "output directory");
  pipe_train.add(pipe);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*synth) {
      synth_opts.config.kind = parse_synth_kind(synth_kind);
      run_synth(synth_opts);
    } else if (*ingest) {
      ingest_opts.features = split_list(ingest_features);
      ingest_opts.preprocess = !no_preprocess;
      run_ingest(ingest_opts);
    } else if (*kernel || *pca) {
      const bool is_pca = static_cast<bool>(*pca);
      kernel_opts.threads = threads;
      if ((is_pca ? pca_sigma : kernel_sigma)->count()) kernel_opts.sigma = sigma;
      if ((is_pca ? pca_params : kernel_params)->count()) kernel_opts.params = params_path;
      if (is_pca) {
        kernel_opts.dims = parse_dims(dims_text);
        run_pca(kernel_opts);
      } else {
        run_kernel(kernel_opts);
      }
    } else if (*train) {
      train_flags.apply(train_opts.config);
      train_opts.threads = threads;
      run_train_kernel(train_opts);
    } else if (*bench) {
      bench_opts.classifiers = split_list(bench_classifiers);
      bench_opts.threads = threads;
      run_bench(bench_opts);
    } else if (*pipe) {
      PipelineConfig cfg;
      if (o_manifest->count()) {
        const auto m = nlohmann::json::parse(csv::read_file(manifest_path));
        cfg = pipeline_config_from_json(m.at("config"));
      } else {
        cfg.out = default_out_dir();
      }
      if (o_config->count()) {
        try {
          cfg = pipeline_config_from_json(nlohmann::json::parse(csv::read_file(config_path)));
        } catch (const nlohmann::json::exception& e) {
          throw ConfigError("cannot parse config '" + config_path + "': " + e.what());
        }
      }
      if (o_csv->count()) {
        cfg.data.csv = csv_path;
        cfg.data.synth.reset();
      }
      if (o_features->count()) cfg.data.features = split_list(features_text);
      if (o_label->count()) cfg.data.label = label_name;
      if (o_synth->count()) {
        cfg.data.csv.reset();
        if (!cfg.data.synth) cfg.data.synth = SynthConfig{};
        cfg.data.synth->kind = parse_synth_kind(synth_name);
      }
      if (cfg.data.synth) {
        if (o_n->count()) cfg.data.synth->n = pipe_synth.n;
        if (o_d->count()) cfg.data.synth->d = pipe_synth.d;
        if (o_noise->count()) cfg.data.synth->noise_sigma = pipe_synth.noise_sigma;
        if (o_data_seed->count()) cfg.data.synth->seed = pipe_synth.seed;
      }
      if (o_kernels->count()) cfg.kernels = split_list(kernels_text);
      if (o_sigma->count()) cfg.sigma = pipe_sigma;
      if (o_reps->count()) cfg.reps = reps;
      if (o_dims->count()) cfg.dims = parse_dims(pipe_dims);
      if (o_classifiers->count()) cfg.classifiers = split_list(classifiers_text);
      if (o_repeats->count()) cfg.repeats = repeats;
      if (o_seed->count()) cfg.base_seed = base_seed;
      if (o_fraction->count()) cfg.train_fraction = train_fraction;
      if (o_out->count()) cfg.out = pipe_out;
      pipe_train.apply(cfg.train);
      cfg.threads = threads;
      run_pipeline(cfg);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
  return 0;
}
