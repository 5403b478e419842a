#include <doctest.h>

#include "auditml/knn.hpp"
#include "auditml/rng.hpp"
#include "oracles.hpp"

using namespace auditml;

namespace {

Dataset toy_dataset(const std::vector<std::vector<double>>& rows,
                    const std::vector<int>& labels) {
  Matrix m(rows.size(), rows[0].size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].size(); ++c) m.at(r, c) = rows[r][c];
  std::vector<std::string> names;
  for (std::size_t c = 0; c < rows[0].size(); ++c)
    names.push_back("f" + std::to_string(c));
  return make_dataset(m, names, labels,
                      std::vector<std::string>(rows.size(), "g"));
}

}  // namespace

TEST_SUITE("knn") {

TEST_CASE("fit stores rows verbatim; k bounds are enforced") {
  const auto ds = toy_dataset({{0, 0}, {1, 0}, {0, 1}}, {0, 1, 1});
  KNNParams p;
  p.k = 3;  // k == n is a valid global vote
  const auto model = fit_knn(ds, p);
  CHECK(model.rows.rows() == 3);

  p.k = 4;
  CHECK_THROWS_AS(fit_knn(ds, p), Error);
}

TEST_CASE("kneighbors returns the closest point first") {
  const auto ds = toy_dataset({{0, 0}, {1, 0}, {0, 1}}, {0, 1, 1});
  const auto model = fit_knn(ds, KNNParams{1, KNNWeighting::distance});
  const std::vector<double> q = {0.1, 0.0};
  const auto nn = kneighbors(model, q, 1);
  REQUIRE(nn.size() == 1);
  CHECK(nn[0].index == 0);
  CHECK(nn[0].distance == doctest::Approx(0.1));
}

TEST_CASE("a stored point is its own nearest neighbor at distance zero") {
  const auto ds = toy_dataset({{2, 2}, {5, 5}}, {0, 1});
  const auto model = fit_knn(ds, KNNParams{1, KNNWeighting::distance});
  const std::vector<double> q = {5.0, 5.0};
  const auto nn = kneighbors(model, q, 2);
  CHECK(nn[0].index == 1);
  CHECK(nn[0].distance == 0.0);
}

TEST_CASE("equidistant neighbors list the lower index first") {
  const auto ds = toy_dataset({{1, 0}, {-1, 0}, {0, 3}}, {0, 1, 0});
  const auto model = fit_knn(ds, KNNParams{2, KNNWeighting::distance});
  const std::vector<double> q = {0.0, 0.0};
  const auto nn = kneighbors(model, q, 2);
  CHECK(nn[0].index == 0);
  CHECK(nn[1].index == 1);
}

TEST_CASE("kneighbors matches exhaustive search on random data") {
  Rng rng(404);
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  for (int i = 0; i < 500; ++i) {
    rows.push_back({rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5)});
    labels.push_back(static_cast<int>(rng.below(2)));
  }
  const auto ds = toy_dataset(rows, labels);
  const auto model = fit_knn(ds, KNNParams{7, KNNWeighting::distance});

  for (int q = 0; q < 100; ++q) {
    const std::vector<double> query = {rng.uniform(-5, 5), rng.uniform(-5, 5),
                                       rng.uniform(-5, 5)};
    const auto got = kneighbors(model, query, 7);
    const auto want = oracle::exhaustive_knn(rows, query, 7);
    for (std::size_t i = 0; i < 7; ++i) {
      CHECK(got[i].index == want[i].index);
      CHECK(got[i].distance == doctest::Approx(want[i].distance).epsilon(1e-12));
    }
  }
}

TEST_CASE("distance weighting sums 1/d votes") {
  // neighbors at distances 0.1 (class 1), 0.5, 0.5 (class 0)
  const auto ds = toy_dataset({{0.1}, {0.5}, {-0.5}}, {1, 0, 0});
  const auto model = fit_knn(ds, KNNParams{3, KNNWeighting::distance});
  const std::vector<double> q = {0.0};
  const auto pred = predict_knn(model, q);
  CHECK(pred.label == 1);  // weights: class1 = 10, class0 = 4
  CHECK(pred.share1 == doctest::Approx(10.0 / 14.0));
}

TEST_CASE("zero-distance neighbors vote exclusively") {
  const auto ds = toy_dataset({{0.0, 0.0}, {0.01, 0.0}, {0.0, 0.01}},
                              {1, 0, 0});
  const auto model = fit_knn(ds, KNNParams{3, KNNWeighting::distance});
  const std::vector<double> q = {0.0, 0.0};
  const auto pred = predict_knn(model, q);
  CHECK(pred.label == 1);
  CHECK(pred.share1 == 1.0);
}

TEST_CASE("uniform vote ties resolve to class 0") {
  const auto ds = toy_dataset({{1.0}, {-1.0}}, {1, 0});
  const auto model = fit_knn(ds, KNNParams{2, KNNWeighting::uniform});
  const std::vector<double> q = {0.0};
  CHECK(predict_knn(model, q).label == 0);
}

TEST_CASE("k=1 returns each training row's own label") {
  Rng rng(8);
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  for (int i = 0; i < 50; ++i) {
    rows.push_back({rng.uniform(-5, 5), rng.uniform(-5, 5)});
    labels.push_back(static_cast<int>(rng.below(2)));
  }
  const auto ds = toy_dataset(rows, labels);
  const auto model = fit_knn(ds, KNNParams{1, KNNWeighting::distance});
  for (std::size_t i = 0; i < rows.size(); ++i)
    CHECK(predict_knn(model, ds.features.row(i)).label == labels[i]);
}

TEST_CASE("predictions are invariant to training-row permutation") {
  Rng rng(5150);
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  for (int i = 0; i < 80; ++i) {
    rows.push_back({rng.uniform(-5, 5), rng.uniform(-5, 5)});
    labels.push_back(static_cast<int>(rng.below(2)));
  }
  auto permuted_rows = rows;
  auto permuted_labels = labels;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::size_t j = (i * 37) % rows.size();
    std::swap(permuted_rows[i], permuted_rows[j]);
    std::swap(permuted_labels[i], permuted_labels[j]);
  }
  const auto a =
      fit_knn(toy_dataset(rows, labels), KNNParams{5, KNNWeighting::distance});
  const auto b = fit_knn(toy_dataset(permuted_rows, permuted_labels),
                         KNNParams{5, KNNWeighting::distance});
  for (int q = 0; q < 100; ++q) {
    const std::vector<double> query = {rng.uniform(-5, 5), rng.uniform(-5, 5)};
    CHECK(predict_knn(a, query).label == predict_knn(b, query).label);
  }
}

TEST_CASE("width mismatches are query errors") {
  const auto ds = toy_dataset({{1, 2}, {3, 4}}, {0, 1});
  const auto model = fit_knn(ds, KNNParams{1, KNNWeighting::distance});
  const std::vector<double> narrow = {1.0};
  CHECK_THROWS_AS(predict_knn(model, narrow), Error);
}

}  // TEST_SUITE
