#include "auditml/pipeline.hpp"

#include "auditml/rng.hpp"

namespace auditml {

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::rf: return "rf";
    case ModelKind::svm: return "svm";
    case ModelKind::knn: return "knn";
    case ModelKind::constant_zero: return "constant_zero";
  }
  return "?";
}

ModelKind model_kind_from_string(const std::string& s) {
  if (s == "rf") return ModelKind::rf;
  if (s == "svm") return ModelKind::svm;
  if (s == "knn") return ModelKind::knn;
  if (s == "constant_zero") return ModelKind::constant_zero;
  throw Error::config("config", "unknown model kind '" + s + "'");
}

ModelSpec ModelSpec::default_rf() {
  ModelSpec spec;
  spec.kind = ModelKind::rf;
  spec.name = "Random Forest";
  return spec;
}

ModelSpec ModelSpec::default_svm() {
  ModelSpec spec;
  spec.kind = ModelKind::svm;
  spec.name = "SVM";
  return spec;
}

ModelSpec ModelSpec::default_knn() {
  ModelSpec spec;
  spec.kind = ModelKind::knn;
  spec.name = "KNN";
  spec.smote_enabled = true;
  return spec;
}

Classifier fit_classifier(const ModelSpec& spec, const Dataset& train,
                          std::uint64_t seed, int n_threads) {
  Classifier model;
  model.kind = spec.kind;

  Dataset working = train;
  if (spec.kind == ModelKind::svm)
    model.scaler = fit_scaler(train, ScalerKind::standard_scale);
  else if (spec.kind == ModelKind::knn)
    model.scaler = fit_scaler(train, ScalerKind::min_max_scale);
  if (model.scaler) working = apply_scaler(*model.scaler, train);

  if (spec.smote_enabled && spec.kind != ModelKind::constant_zero)
    working = smote(working, spec.smote, Rng::mix(seed, 0x736d6f7465ULL));

  switch (spec.kind) {
    case ModelKind::rf: {
      RFParams params = spec.rf;
      params.seed = seed;
      model.forest = fit_forest(working, params, n_threads);
      break;
    }
    case ModelKind::svm: {
      SVMParams params = spec.svm;
      params.seed = seed;
      const auto result = smo_fit(working, params);
      if (!result.converged)
        throw Error::train("convergence",
                           "SMO did not converge within " +
                               std::to_string(params.max_passes) + " sweeps");
      model.svm = result.model;
      model.svm.scaler_fingerprint = model.scaler->fingerprint();
      break;
    }
    case ModelKind::knn: {
      model.knn = fit_knn(working, spec.knn);
      model.knn.scaler_fingerprint = model.scaler->fingerprint();
      break;
    }
    case ModelKind::constant_zero:
      break;  // test baseline: predicts class 0 everywhere
  }
  return model;
}

std::vector<Scored> predict_scored(const Classifier& model,
                                   const Matrix& rows) {
  Matrix scaled;
  const Matrix* input = &rows;
  if (model.scaler) {
    const std::uint64_t expected = model.kind == ModelKind::svm
                                       ? model.svm.scaler_fingerprint
                                       : model.knn.scaler_fingerprint;
    if (model.scaler->fingerprint() != expected)
      throw Error::data("transform",
                        "scaler fingerprint does not match the one recorded "
                        "at training time");
    scaled = apply_scaler_rows(*model.scaler, rows);
    input = &scaled;
  }

  std::vector<Scored> out(rows.rows());
  switch (model.kind) {
    case ModelKind::rf: {
      const auto preds = predict_forest(model.forest, *input);
      for (std::size_t i = 0; i < preds.size(); ++i)
        out[i] = {preds[i].label, preds[i].prob1};
      break;
    }
    case ModelKind::svm: {
      const auto preds = decision_and_predict(model.svm, *input);
      for (std::size_t i = 0; i < preds.size(); ++i)
        out[i] = {preds[i].label, preds[i].decision};
      break;
    }
    case ModelKind::knn: {
      const auto preds = predict_knn(model.knn, *input);
      for (std::size_t i = 0; i < preds.size(); ++i)
        out[i] = {preds[i].label, preds[i].share1};
      break;
    }
    case ModelKind::constant_zero:
      break;
  }
  return out;
}

std::vector<int> predict_labels(const Classifier& model, const Matrix& rows) {
  const auto scored = predict_scored(model, rows);
  std::vector<int> labels(scored.size());
  for (std::size_t i = 0; i < scored.size(); ++i) labels[i] = scored[i].label;
  return labels;
}

}  // namespace auditml
