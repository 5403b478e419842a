#include "auditml/knn.hpp"

#include <algorithm>
#include <cmath>

namespace auditml {

KNNModel fit_knn(const Dataset& ds, const KNNParams& params) {
  params.validate();
  if (ds.rows() == 0) throw Error::train("training", "empty training dataset");
  if (static_cast<std::size_t>(params.k) > ds.rows())
    throw Error::config("parameter",
                        "knn k=" + std::to_string(params.k) +
                            " exceeds training row count " +
                            std::to_string(ds.rows()));
  KNNModel model;
  model.rows = ds.features;
  model.labels = ds.labels;
  model.params = params;
  model.feature_names = ds.feature_names;
  return model;
}

namespace {

void check_width(const KNNModel& model, std::size_t width) {
  if (width != model.rows.cols())
    throw Error::data("query", "query width " + std::to_string(width) +
                                   " does not match training width " +
                                   std::to_string(model.rows.cols()));
}

}  // namespace

std::vector<Neighbor> kneighbors(const KNNModel& model,
                                 std::span<const double> query, int k) {
  check_width(model, query.size());
  if (k < 1 || static_cast<std::size_t>(k) > model.rows.rows())
    throw Error::config("parameter", "kneighbors k out of range");

  std::vector<std::pair<double, std::size_t>> dists(model.rows.rows());
  for (std::size_t i = 0; i < model.rows.rows(); ++i)
    dists[i] = {squared_distance(model.rows.row(i), query), i};
  std::sort(dists.begin(), dists.end());

  std::vector<Neighbor> out(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = {dists[i].second, std::sqrt(dists[i].first)};
  return out;
}

KNNPrediction predict_knn(const KNNModel& model,
                          std::span<const double> query) {
  const auto nn = kneighbors(model, query, model.params.k);

  double w0 = 0.0, w1 = 0.0;
  if (model.params.weighting == KNNWeighting::uniform) {
    for (const auto& n : nn)
      (model.labels[n.index] ? w1 : w0) += 1.0;
  } else {
    bool any_zero = false;
    for (const auto& n : nn) any_zero = any_zero || n.distance == 0.0;
    for (const auto& n : nn) {
      if (any_zero) {
        if (n.distance == 0.0) (model.labels[n.index] ? w1 : w0) += 1.0;
      } else {
        (model.labels[n.index] ? w1 : w0) += 1.0 / n.distance;
      }
    }
  }

  const double total = w0 + w1;
  KNNPrediction pred;
  pred.label = w1 > w0 ? 1 : 0;
  pred.share0 = w0 / total;
  pred.share1 = w1 / total;
  return pred;
}

std::vector<KNNPrediction> predict_knn(const KNNModel& model,
                                       const Matrix& rows) {
  check_width(model, rows.cols());
  std::vector<KNNPrediction> out(rows.rows());
  for (std::size_t r = 0; r < rows.rows(); ++r)
    out[r] = predict_knn(model, rows.row(r));
  return out;
}

}  // namespace auditml
