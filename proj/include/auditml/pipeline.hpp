#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "auditml/knn.hpp"
#include "auditml/preprocess.hpp"
#include "auditml/svm.hpp"
#include "auditml/trees.hpp"

namespace auditml {

enum class ModelKind { rf, svm, knn, constant_zero };

std::string to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& s);

// One classifier configuration: which model, its hyperparameters, and the
// fold-local resampling choice. Scaling is implied by the kind (SVM trains
// on standardized features, KNN on min-max features, trees on raw ones).
struct ModelSpec {
  ModelKind kind = ModelKind::rf;
  std::string name = "Random Forest";
  RFParams rf;
  SVMParams svm;
  KNNParams knn;
  bool smote_enabled = false;  // default pipeline enables this for KNN only
  SmoteParams smote;

  static ModelSpec default_rf();
  static ModelSpec default_svm();
  static ModelSpec default_knn();
};

// A trained classifier plus the transform its inputs must pass through.
struct Classifier {
  ModelKind kind = ModelKind::rf;
  Forest forest;
  SVMModel svm;
  KNNModel knn;
  std::optional<FittedTransform> scaler;
};

// Fits the spec on (already encoded, unscaled) training data. The scaler and
// SMOTE stream are fitted on these rows only; `seed` drives every stochastic
// piece, so identical inputs give identical classifiers.
Classifier fit_classifier(const ModelSpec& spec, const Dataset& train,
                          std::uint64_t seed, int n_threads = 1);

struct Scored {
  int label = 0;
  double score = 0.0;  // vote fraction (rf), decision value (svm), share1 (knn)
};

// Applies the stored scaler (verifying the model's recorded fingerprint)
// and predicts. Rows are unscaled encoded features.
std::vector<Scored> predict_scored(const Classifier& model, const Matrix& rows);
std::vector<int> predict_labels(const Classifier& model, const Matrix& rows);

}  // namespace auditml
