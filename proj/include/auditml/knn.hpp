#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "auditml/dataset.hpp"

namespace auditml {

enum class KNNWeighting { distance, uniform };

struct KNNParams {
  int k = 5;
  KNNWeighting weighting = KNNWeighting::distance;

  void validate() const {
    if (k < 1) throw Error::config("parameter", "knn k must be >= 1");
  }
};

// The training rows verbatim ("knowledge base"); no fitting beyond storage.
struct KNNModel {
  Matrix rows;
  std::vector<int> labels;
  KNNParams params;
  std::vector<std::string> feature_names;
  std::uint64_t scaler_fingerprint = 0;
};

KNNModel fit_knn(const Dataset& ds, const KNNParams& params);

struct Neighbor {
  std::size_t index = 0;
  double distance = 0.0;
};

// The k smallest Euclidean distances, ascending; exact brute-force search;
// equal distances break to the lower row index.
std::vector<Neighbor> kneighbors(const KNNModel& model,
                                 std::span<const double> query, int k);

struct KNNPrediction {
  int label = 0;
  double share0 = 0.0;  // normalized class vote weights
  double share1 = 0.0;
};

// Distance weighting votes 1/d per neighbor; any zero-distance neighbor
// makes the zero-distance set vote alone with equal weights. Vote ties
// resolve to class 0.
KNNPrediction predict_knn(const KNNModel& model, std::span<const double> query);
std::vector<KNNPrediction> predict_knn(const KNNModel& model,
                                       const Matrix& rows);

}  // namespace auditml
