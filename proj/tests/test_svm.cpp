#include <doctest.h>

#include <cmath>

#include "auditml/svm.hpp"
#include "auditml/rng.hpp"

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

// Two well-separated 2-D blobs, n points per class.
Dataset blobs(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  for (std::size_t i = 0; i < n; ++i) {
    rows.push_back({-3.0 + 0.5 * rng.normal(), -3.0 + 0.5 * rng.normal()});
    labels.push_back(0);
    rows.push_back({3.0 + 0.5 * rng.normal(), 3.0 + 0.5 * rng.normal()});
    labels.push_back(1);
  }
  return toy_dataset(rows, labels);
}

}  // namespace

TEST_SUITE("svm") {

TEST_CASE("rbf kernel values") {
  const std::vector<double> x = {1.0, 2.0};
  CHECK(rbf_kernel(x, x, 0.5) == 1.0);

  const std::vector<double> a = {0.0}, b = {2.0};  // squared distance 4
  CHECK(rbf_kernel(a, b, 0.1) == doctest::Approx(std::exp(-0.4)).epsilon(1e-12));

  Rng rng(5);
  for (int i = 0; i < 20; ++i) {
    std::vector<double> u(3), v(3);
    for (auto& val : u) val = rng.normal();
    for (auto& val : v) val = rng.normal();
    CHECK(rbf_kernel(u, v, 0.3) == rbf_kernel(v, u, 0.3));
  }

  const std::vector<double> narrow = {1.0};
  CHECK_THROWS_AS(rbf_kernel(x, narrow, 0.1), Error);
}

TEST_CASE("balanced weights follow n / (2 n_c)") {
  const auto w31 = balanced_weights({0, 0, 0, 1});
  CHECK(w31.w0 == doctest::Approx(4.0 / 6.0));
  CHECK(w31.w1 == doctest::Approx(2.0));

  const auto even = balanced_weights({0, 1, 0, 1});
  CHECK(even.w0 == 1.0);
  CHECK(even.w1 == 1.0);

  std::vector<int> skew(100, 0);
  skew[0] = 1;
  CHECK(balanced_weights(skew).w1 == doctest::Approx(50.0));

  CHECK_THROWS_AS(balanced_weights({1, 1, 1}), Error);
}

TEST_CASE("symmetric two-point problem has the analytic dual solution") {
  const auto ds = toy_dataset({{-1.0}, {1.0}}, {0, 1});
  SVMParams params;
  params.C = 10.0;
  params.gamma = 0.1;
  params.tolerance = 1e-3;
  const auto result = smo_fit(ds, params);
  REQUIRE(result.converged);

  const double expected_alpha = 1.0 / (1.0 - std::exp(-0.4));
  REQUIRE(result.model.alpha.size() == 2);
  CHECK(result.model.alpha[0] == doctest::Approx(expected_alpha).epsilon(1e-6));
  CHECK(result.model.alpha[1] == doctest::Approx(expected_alpha).epsilon(1e-6));
  CHECK(std::abs(result.model.bias) <= 1e-9);

  // f(+-1) = +-1 and the boundary point classifies as +1.
  const std::vector<double> pos = {1.0}, neg = {-1.0}, zero = {0.0};
  CHECK(decision_value(result.model, pos) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(decision_value(result.model, neg) == doctest::Approx(-1.0).epsilon(1e-9));
  Matrix query(1, 1, 0.0);
  const auto preds = decision_and_predict(result.model, query);
  CHECK(std::abs(preds[0].decision) <= 1e-12);
  CHECK(preds[0].label == 1);
}

TEST_CASE("separable clusters train to accuracy 1 with clean KKT") {
  const auto ds = blobs(40, 11);
  SVMParams params;
  const auto result = smo_fit(ds, params);
  REQUIRE(result.converged);
  CHECK(result.max_kkt_excess <= params.tolerance);

  const auto preds = decision_and_predict(result.model, ds.features);
  for (std::size_t i = 0; i < preds.size(); ++i)
    CHECK(preds[i].label == ds.labels[i]);
}

TEST_CASE("same data and seed give identical models") {
  const auto ds = blobs(25, 3);
  SVMParams params;
  params.seed = 17;
  const auto a = smo_fit(ds, params);
  const auto b = smo_fit(ds, params);
  REQUIRE(a.model.alpha.size() == b.model.alpha.size());
  for (std::size_t i = 0; i < a.model.alpha.size(); ++i)
    CHECK(a.model.alpha[i] == b.model.alpha[i]);
  CHECK(a.model.bias == b.model.bias);
}

TEST_CASE("dual feasibility on an overlapping problem") {
  Rng rng(23);
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  for (int i = 0; i < 120; ++i) {
    const int y = i % 3 == 0 ? 1 : 0;  // imbalanced 1:2
    const double center = y ? 0.8 : -0.8;
    rows.push_back({center + rng.normal(), center + rng.normal()});
    labels.push_back(y);
  }
  const auto ds = toy_dataset(rows, labels);
  SVMParams params;
  params.check_objective = true;  // dual objective must never decrease
  const auto result = smo_fit(ds, params);
  REQUIRE(result.converged);
  CHECK(result.max_kkt_excess <= params.tolerance);

  const auto w = balanced_weights(ds.labels);
  double sum_ay = 0.0;
  for (std::size_t i = 0; i < result.model.alpha.size(); ++i) {
    const double cap =
        params.C * (result.model.sv_labels[i] > 0 ? w.w1 : w.w0);
    CHECK(result.model.alpha[i] > 0.0);
    CHECK(result.model.alpha[i] <= cap + 1e-12);
    sum_ay += result.model.alpha[i] * result.model.sv_labels[i];
  }
  CHECK(std::abs(sum_ay) <= 1e-6);
}

TEST_CASE("unbounded support vectors sit on the margin") {
  const auto ds = blobs(30, 41);
  SVMParams params;
  const auto result = smo_fit(ds, params);
  REQUIRE(result.converged);
  const auto w = balanced_weights(ds.labels);
  for (std::size_t i = 0; i < result.model.alpha.size(); ++i) {
    const double cap =
        params.C * (result.model.sv_labels[i] > 0 ? w.w1 : w.w0);
    if (result.model.alpha[i] >= cap - 1e-9) continue;
    const double margin =
        result.model.sv_labels[i] *
        decision_value(result.model, result.model.support_vectors.row(i));
    CHECK(std::abs(margin - 1.0) <= params.tolerance + 1e-9);
  }
}

TEST_CASE("decision values vary smoothly in the query") {
  const auto ds = blobs(20, 7);
  const auto result = smo_fit(ds, SVMParams{});
  const std::vector<double> q = {0.3, -0.2};
  const std::vector<double> q2 = {0.3 + 1e-6, -0.2};
  CHECK(std::abs(decision_value(result.model, q) -
                 decision_value(result.model, q2)) < 1e-4);
}

}  // TEST_SUITE
