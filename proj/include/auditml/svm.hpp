#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "auditml/dataset.hpp"

namespace auditml {

enum class ClassWeighting { balanced, none };

struct SVMParams {
  double C = 10.0;
  double gamma = 0.1;
  double tolerance = 1e-3;   // KKT tolerance
  int max_passes = 1000;     // cap on outer SMO sweeps
  ClassWeighting class_weighting = ClassWeighting::balanced;
  std::uint64_t seed = 0;
  bool check_objective = false;  // assert dual objective is non-decreasing

  void validate() const;
};

struct SVMModel {
  Matrix support_vectors;       // alpha > 0 rows only
  std::vector<double> alpha;
  std::vector<int> sv_labels;   // in {-1, +1}
  double bias = 0.0;
  double gamma = 0.1;
  std::vector<std::string> feature_names;
  std::uint64_t scaler_fingerprint = 0;
};

struct SVMFitResult {
  SVMModel model;
  bool converged = true;
  int sweeps = 0;
  double max_kkt_excess = 0.0;  // worst KKT slack on the training set
};

// exp(-gamma * ||x - z||^2)
double rbf_kernel(std::span<const double> x, std::span<const double> z,
                  double gamma);

// w_c = n / (2 * n_c) for the two classes; per-sample effective C becomes
// C * w_{y_i}. Both classes must be present.
struct BalancedWeights {
  double w0 = 1.0;
  double w1 = 1.0;
};
BalancedWeights balanced_weights(const std::vector<int>& labels);

// Sequential Minimal Optimization (Platt's heuristics: first choice over
// KKT violators, second choice maximizing |E1 - E2|, randomized fallback
// sweeps from the seeded stream). Non-convergence within max_passes returns
// the partial model with converged = false rather than throwing.
SVMFitResult smo_fit(const Dataset& ds, const SVMParams& params);

// f(x) = sum alpha_i y_i k(x_i, x) + b
double decision_value(const SVMModel& model, std::span<const double> row);

struct SVMPrediction {
  double decision = 0.0;
  int label = 0;  // f >= 0 -> 1
};
std::vector<SVMPrediction> decision_and_predict(const SVMModel& model,
                                                const Matrix& rows);

// Worst KKT slack of `model` over a labeled set:
//   alpha = 0      -> max(0, 1 - y f)
//   0 < alpha < C  -> |y f - 1|
//   alpha = C      -> max(0, y f - 1)
// A trained model is KKT-consistent iff this is <= params.tolerance.
double kkt_max_excess(const SVMModel& model, const Dataset& ds,
                      const SVMParams& params);

}  // namespace auditml
