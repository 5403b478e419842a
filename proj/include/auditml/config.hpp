#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "auditml/pipeline.hpp"
#include "auditml/synthgen.hpp"

namespace auditml {

enum class DataSource { generator, csv };

// Resolved pipeline configuration. Defaults carry the reference parameter
// choices: RF(200 trees, depth 15, split 10, leaf 5, sqrt features,
// bootstrap), SVM(C=10, gamma=0.1, balanced), KNN(k=5, distance), K=5 folds,
// label threshold 0.15.
struct PipelineConfig {
  DataSource source = DataSource::generator;
  std::string csv_path;

  LabelSpec label;
  SynthConfig gen;

  double clip_q_low = 0.01;
  double clip_q_high = 0.99;
  EncodingPlan plan = EncodingPlan::defaults();
  bool window_enabled = false;
  WindowSpec window;

  ModelSpec rf = ModelSpec::default_rf();
  ModelSpec svm = ModelSpec::default_svm();
  ModelSpec knn = ModelSpec::default_knn();

  std::vector<double> svm_grid_c = {0.1, 1.0, 10.0, 100.0};
  std::vector<double> svm_grid_gamma = {0.01, 0.1, 1.0};

  int folds = 5;
  std::uint64_t seed = 42;
  int permutation_repeats = 5;
  std::string out_dir = "out";

  ModelSpec& spec_for(ModelKind kind);
  const ModelSpec& spec_for(ModelKind kind) const;
};

// Flat line-oriented key=value file with dotted section keys and '#'
// comments. Unknown keys are fatal and reported with their line numbers;
// type errors likewise. An empty or absent-key file yields the defaults.
PipelineConfig parse_config(const std::string& text);
PipelineConfig load_config(const std::string& path);

// The full resolved configuration in canonical key=value form (also what
// the config hash in manifests and model files is computed over).
std::string dump_config(const PipelineConfig& config);

}  // namespace auditml
