#include <doctest.h>

#include <cmath>

#include "auditml/preprocess.hpp"
#include "auditml/rng.hpp"
#include "oracles.hpp"

using namespace auditml;

namespace {

AuditRecord base_record() {
  AuditRecord r;
  r.year = 2022;
  r.firm_name = "PwC";
  r.total_audit_engagements = 100;
  r.high_risk_cases = 10;
  r.compliance_violations = 3;
  r.fraud_cases_detected = 1;
  r.industry_affected = "Finance";
  r.total_revenue_impact = 20.0;
  r.ai_used_for_auditing = true;
  r.employee_workload = 45.0;
  r.market_value = 500.0;
  r.region = "EMEA";
  r.financial_status = "Stable";
  return r;
}

}  // namespace

TEST_SUITE("preprocess") {

TEST_CASE("impute fills numeric medians and categorical modes") {
  std::vector<AuditRecord> records(4, base_record());
  records[0].employee_workload = 40.0;
  records[1].employee_workload.reset();
  records[2].employee_workload = 60.0;
  records[3].employee_workload = 40.0;  // median of {40, 40, 60} = 40
  records[1].region = "EMEA";
  records[0].region.reset();
  records[2].region = "EMEA";
  records[3].region = "APAC";

  ImputeReport report;
  const auto out = impute(records, &report);
  CHECK(out[1].employee_workload == 40.0);
  CHECK(out[0].region == "EMEA");
  CHECK(report.entries.size() == 2);
}

TEST_CASE("impute median of two values is their midpoint") {
  std::vector<AuditRecord> records(3, base_record());
  records[0].employee_workload = 40.0;
  records[1].employee_workload.reset();
  records[2].employee_workload = 60.0;
  const auto out = impute(records);
  CHECK(out[1].employee_workload == 50.0);
}

TEST_CASE("impute is the identity when nothing is missing") {
  std::vector<AuditRecord> records(3, base_record());
  ImputeReport report;
  CHECK(impute(records, &report) == records);
  CHECK(report.entries.empty());
}

TEST_CASE("impute rounds integral fields to whole counts") {
  std::vector<AuditRecord> records(3, base_record());
  records[0].compliance_violations = 2;
  records[1].compliance_violations.reset();
  records[2].compliance_violations = 3;  // median 2.5 -> rounds away from zero
  const auto out = impute(records);
  CHECK(out[1].compliance_violations == 3);
}

TEST_CASE("fully missing column is an imputation error") {
  std::vector<AuditRecord> records(2, base_record());
  records[0].market_value.reset();
  records[1].market_value.reset();
  try {
    impute(records);
    FAIL("expected imputation error");
  } catch (const Error& e) {
    CHECK(e.category() == "imputation");
    CHECK(std::string(e.what()).find("Market_Value") != std::string::npos);
  }
}

TEST_CASE("clip_outliers pins values to empirical quantiles") {
  std::vector<AuditRecord> records;
  std::vector<double> values;
  for (int i = 1; i <= 100; ++i) {
    auto r = base_record();
    r.employee_workload = static_cast<double>(i);
    records.push_back(r);
    values.push_back(static_cast<double>(i));
  }
  const double lo = oracle::quantile_midpoint(values, 0.01);
  const double hi = oracle::quantile_midpoint(values, 0.99);
  CHECK(lo == doctest::Approx(1.5));
  CHECK(hi == doctest::Approx(99.5));

  ClipReport report;
  const auto out = clip_outliers(records, 0.01, 0.99, &report);
  CHECK(out[0].employee_workload == doctest::Approx(lo));
  CHECK(out[99].employee_workload == doctest::Approx(hi));
  CHECK(out[49].employee_workload == 50.0);  // interior untouched

  for (const auto& e : report.entries)
    if (e.field == std::string("Employee_Workload")) CHECK(e.clipped == 2);
}

TEST_CASE("clip with (0, 1) bounds is the identity") {
  std::vector<AuditRecord> records;
  for (int i = 1; i <= 20; ++i) {
    auto r = base_record();
    r.market_value = static_cast<double>(i * 3);
    records.push_back(r);
  }
  CHECK(clip_outliers(records, 0.0, 1.0) == records);
}

TEST_CASE("constant fields are untouched with zero clips reported") {
  std::vector<AuditRecord> records(10, base_record());
  ClipReport report;
  CHECK(clip_outliers(records, 0.05, 0.95, &report) == records);
  for (const auto& e : report.entries) CHECK(e.clipped == 0);
}

TEST_CASE("integral fields clip to whole values inside the bounds") {
  std::vector<AuditRecord> records;
  for (int i = 1; i <= 100; ++i) {
    auto r = base_record();
    r.total_audit_engagements = i;
    r.high_risk_cases = 0;
    records.push_back(r);
  }
  const auto out = clip_outliers(records, 0.01, 0.99);
  CHECK(out[0].total_audit_engagements == 2);    // ceil(1.5)
  CHECK(out[99].total_audit_engagements == 99);  // floor(99.5)
}

TEST_CASE("fit_scaler computes population statistics") {
  Matrix m(2, 1);
  m.at(0, 0) = 2.0;
  m.at(1, 0) = 4.0;
  const auto ds = make_dataset(m, {"x"}, {0, 1}, {"a", "b"});
  const auto standard = fit_scaler(ds, ScalerKind::standard_scale);
  CHECK(standard.stat_a[0] == 3.0);
  CHECK(standard.stat_b[0] == 1.0);

  Matrix mm(2, 1);
  mm.at(0, 0) = 0.0;
  mm.at(1, 0) = 10.0;
  const auto ds2 = make_dataset(mm, {"x"}, {0, 1}, {"a", "b"});
  const auto minmax = fit_scaler(ds2, ScalerKind::min_max_scale);
  CHECK(minmax.stat_a[0] == 0.0);
  CHECK(minmax.stat_b[0] == 10.0);
}

TEST_CASE("constant columns scale to zero, not to an error") {
  Matrix m(3, 1, 5.0);
  const auto ds = make_dataset(m, {"x"}, {0, 1, 0}, {"a", "b", "c"});
  for (auto kind : {ScalerKind::standard_scale, ScalerKind::min_max_scale}) {
    const auto t = fit_scaler(ds, kind);
    const auto scaled = apply_scaler(t, ds);
    for (std::size_t r = 0; r < 3; ++r) CHECK(scaled.features.at(r, 0) == 0.0);
  }
}

TEST_CASE("apply after fit normalizes the fit set") {
  Rng rng(3);
  Matrix m(50, 4);
  for (std::size_t r = 0; r < 50; ++r)
    for (std::size_t c = 0; c < 4; ++c)
      m.at(r, c) = rng.uniform(-5.0, 20.0);
  std::vector<int> labels(50);
  for (std::size_t i = 0; i < 50; ++i) labels[i] = static_cast<int>(i % 2);
  const auto ds = make_dataset(m, {"a", "b", "c", "d"}, labels,
                               std::vector<std::string>(50, "g"));

  const auto standard =
      apply_scaler(fit_scaler(ds, ScalerKind::standard_scale), ds);
  for (std::size_t c = 0; c < 4; ++c) {
    double mean = 0.0, var = 0.0;
    for (std::size_t r = 0; r < 50; ++r) mean += standard.features.at(r, c);
    mean /= 50.0;
    for (std::size_t r = 0; r < 50; ++r) {
      const double d = standard.features.at(r, c) - mean;
      var += d * d;
    }
    CHECK(std::abs(mean) < 1e-9);
    CHECK(std::abs(std::sqrt(var / 50.0) - 1.0) < 1e-9);
  }

  const auto minmax =
      apply_scaler(fit_scaler(ds, ScalerKind::min_max_scale), ds);
  for (std::size_t c = 0; c < 4; ++c) {
    double lo = 1e30, hi = -1e30;
    for (std::size_t r = 0; r < 50; ++r) {
      lo = std::min(lo, minmax.features.at(r, c));
      hi = std::max(hi, minmax.features.at(r, c));
    }
    CHECK(lo >= -1e-9);
    CHECK(hi <= 1.0 + 1e-9);
  }
}

TEST_CASE("apply_scaler rejects mismatched schemas") {
  Matrix m(2, 1, 1.0);
  const auto ds = make_dataset(m, {"x"}, {0, 1}, {"a", "b"});
  auto t = fit_scaler(ds, ScalerKind::standard_scale);
  t.feature_names = {"y"};
  try {
    apply_scaler(t, ds);
    FAIL("expected transform error");
  } catch (const Error& e) {
    CHECK(e.category() == "transform");
    CHECK(std::string(e.what()).find("y != x") != std::string::npos);
  }
}

TEST_CASE("encode: one-hot, binning, booleans") {
  std::vector<AuditRecord> records;
  for (const auto& firm : firm_enumeration()) {
    auto r = base_record();
    r.firm_name = firm;
    records.push_back(r);
  }
  records[0].employee_workload = 52.0;
  records[0].ai_used_for_auditing = true;
  records[1].ai_used_for_auditing = false;

  EncodingPlan plan;
  plan.numeric = {"Employee_Workload"};
  plan.booleans = {"AI_Used_for_Auditing"};
  plan.one_hot = {"Firm_Name"};
  plan.include_derived = false;
  plan.binning = {{"Employee_Workload",
                   {0.0, 40.0, 55.0, std::numeric_limits<double>::infinity()},
                   0}};

  const auto ds = build_dataset(records, plan, {0, 1, 0, 1});
  CHECK(ds.feature_names[0] == "Employee_Workload_bin");
  CHECK(ds.features.at(0, 0) == 1.0);  // 52 in [40, 55)
  CHECK(ds.features.at(0, 1) == 1.0);  // Yes -> 1
  CHECK(ds.features.at(1, 1) == 0.0);
  // exactly one firm indicator per row
  for (std::size_t r = 0; r < ds.rows(); ++r) {
    double sum = 0.0;
    for (std::size_t c = 2; c < ds.cols(); ++c) sum += ds.features.at(r, c);
    CHECK(sum == 1.0);
  }
}

TEST_CASE("open-vocabulary categories fall back to the other column") {
  auto fit_rec = base_record();
  fit_rec.region = "EMEA";
  const auto enc = fit_encoder({fit_rec}, EncodingPlan::defaults());

  auto query = base_record();
  query.region = "Antarctica";
  const auto ds = build_dataset_with(enc, {query}, {0});
  bool found = false;
  for (std::size_t c = 0; c < ds.cols(); ++c) {
    if (ds.feature_names[c] == "Region=__other__") {
      found = true;
      CHECK(ds.features.at(0, c) == 1.0);
    }
  }
  CHECK(found);
}

TEST_CASE("non-monotone bin edges are a plan error") {
  EncodingPlan plan;
  plan.numeric = {"Employee_Workload"};
  plan.include_derived = false;
  plan.binning = {{"Employee_Workload", {0.0, 50.0, 40.0}, 0}};
  CHECK_THROWS_AS(plan.validate(), Error);
}

TEST_CASE("windowize sample counts follow the closed form") {
  // One firm, years 2020-2025, W=3, stride 1 -> 4 samples.
  std::vector<AuditRecord> records;
  for (int y = 2020; y <= 2025; ++y) {
    auto r = base_record();
    r.year = y;
    records.push_back(r);
  }
  WindowSpec spec;
  const auto result = windowize(records, spec);
  CHECK(result.dataset.rows() == 4);
  CHECK(result.short_runs == 0);
}

TEST_CASE("windowize counts match the formula for all small cases") {
  for (int l = 1; l <= 6; ++l) {
    for (int w = 2; w <= 6; ++w) {
      for (int stride = 1; stride <= 3; ++stride) {
        std::vector<AuditRecord> records;
        for (int y = 0; y < l; ++y) {
          auto r = base_record();
          r.year = 2020 + y;
          records.push_back(r);
        }
        WindowSpec spec;
        spec.window_length = w;
        spec.stride = stride;
        const std::size_t expected =
            l >= w ? static_cast<std::size_t>((l - w) / stride + 1) : 0;
        if (expected == 0) {
          CHECK_THROWS_AS(windowize(records, spec), Error);  // no samples at all
        } else {
          const auto result = windowize(records, spec);
          CHECK(result.dataset.rows() == expected);
        }
      }
    }
  }
}

TEST_CASE("short group runs yield zero samples plus a warning") {
  std::vector<AuditRecord> records;
  for (int y = 2020; y <= 2024; ++y) {  // PwC: run of 5
    auto r = base_record();
    r.year = y;
    records.push_back(r);
  }
  for (int y = 2020; y <= 2021; ++y) {  // EY: run of 2 < W
    auto r = base_record();
    r.firm_name = "EY";
    r.year = y;
    records.push_back(r);
  }
  const auto result = windowize(records, WindowSpec{});
  CHECK(result.short_runs == 1);
  for (const auto& g : result.dataset.group_keys) CHECK(g == "PwC");
}

TEST_CASE("windowize emits lags and year-over-year deltas") {
  std::vector<AuditRecord> records;
  const long long risks[] = {10, 13, 19};
  for (int i = 0; i < 3; ++i) {
    auto r = base_record();
    r.year = 2020 + i;
    r.high_risk_cases = risks[i];
    records.push_back(r);
  }
  const auto result = windowize(records, WindowSpec{});
  const auto& ds = result.dataset;
  REQUIRE(ds.rows() == 1);
  auto col = [&](const std::string& name) {
    for (std::size_t c = 0; c < ds.cols(); ++c)
      if (ds.feature_names[c] == name) return ds.features.at(0, c);
    FAIL("missing column ", name);
    return 0.0;
  };
  CHECK(col("High_Risk_Cases") == 19.0);
  CHECK(col("High_Risk_Cases_lag1") == 13.0);
  CHECK(col("High_Risk_Cases_lag2") == 10.0);
  CHECK(col("High_Risk_Cases_delta1") == 6.0);   // 2022 - 2021
  CHECK(col("High_Risk_Cases_delta2") == 3.0);   // 2021 - 2020
}

TEST_CASE("derive_features: historical ratio, frequency change, fraud rate") {
  std::vector<AuditRecord> records;
  const long long violations[] = {2, 4};
  for (int i = 0; i < 2; ++i) {
    auto r = base_record();
    r.year = 2020 + i;
    r.compliance_violations = violations[i];
    r.total_audit_engagements = 100;
    r.fraud_cases_detected = 3;
    records.push_back(r);
  }
  records[1].total_audit_engagements = 120;

  const auto derived = derive_features(records);
  REQUIRE(derived.names.size() == 3);
  // first year has no history
  CHECK(derived.columns.at(0, 0) == 0.0);
  CHECK(derived.columns.at(0, 1) == 0.0);
  // year 2: 2 violations over 100 prior engagements
  CHECK(derived.columns.at(1, 0) == doctest::Approx(0.02));
  CHECK(derived.columns.at(1, 1) == doctest::Approx(20.0));  // 120 - 100
  CHECK(derived.columns.at(1, 2) == doctest::Approx(3.0 / 120.0));
  CHECK(derived.columns.at(0, 2) == doctest::Approx(0.03));
}

TEST_CASE("derive_features uses strictly prior years only") {
  std::vector<AuditRecord> records;
  for (int i = 0; i < 4; ++i) {
    auto r = base_record();
    r.year = 2020 + i;
    r.compliance_violations = i + 1;
    r.total_audit_engagements = 100 + 10 * i;
    records.push_back(r);
  }
  const auto before = derive_features(records);
  std::swap(records[2], records[3]);  // permute future rows
  const auto after = derive_features(records);
  for (std::size_t c = 0; c < 3; ++c) {
    CHECK(before.columns.at(0, c) == after.columns.at(0, c));
    CHECK(before.columns.at(1, c) == after.columns.at(1, c));
  }
}

TEST_CASE("smote appends exactly the needed segment points") {
  Matrix m(13, 2);
  std::vector<int> labels;
  for (int i = 0; i < 10; ++i) {
    m.at(i, 0) = 10.0 + i;
    m.at(i, 1) = -3.0;
    labels.push_back(0);
  }
  m.at(10, 0) = 0.0; m.at(10, 1) = 0.0;
  m.at(11, 0) = 1.0; m.at(11, 1) = 1.0;
  m.at(12, 0) = 0.5; m.at(12, 1) = 0.0;
  labels.insert(labels.end(), {1, 1, 1});
  const auto ds = make_dataset(m, {"x", "y"}, labels,
                               std::vector<std::string>(13, "g"));

  const auto out = smote(ds, SmoteParams{2, 1.0}, 99);
  CHECK(out.rows() == 20);  // 10 majority + 3 minority + 7 synthetic
  // original rows untouched
  for (std::size_t r = 0; r < 13; ++r)
    for (std::size_t c = 0; c < 2; ++c)
      CHECK(out.features.at(r, c) == ds.features.at(r, c));
  for (std::size_t r = 13; r < 20; ++r) {
    CHECK(out.labels[r] == 1);
    CHECK(out.synthetic[r] == 1);
  }
}

TEST_CASE("smote synthetic points lie on minority segments") {
  Rng rng(1234);
  Matrix m(60, 3);
  std::vector<int> labels(60);
  for (std::size_t i = 0; i < 60; ++i) {
    for (std::size_t c = 0; c < 3; ++c) m.at(i, c) = rng.uniform(-2.0, 2.0);
    labels[i] = i < 45 ? 0 : 1;
  }
  const auto ds = make_dataset(m, {"a", "b", "c"}, labels,
                               std::vector<std::string>(60, "g"));
  const auto out = smote(ds, SmoteParams{5, 1.0}, 7);

  std::vector<std::vector<double>> minority;
  for (std::size_t i = 45; i < 60; ++i) {
    const auto row = ds.features.row(i);
    minority.emplace_back(row.begin(), row.end());
  }
  for (std::size_t r = ds.rows(); r < out.rows(); ++r) {
    const auto p = out.features.row(r);
    bool on_any = false;
    for (std::size_t a = 0; a < minority.size() && !on_any; ++a)
      for (std::size_t b = 0; b < minority.size() && !on_any; ++b)
        if (a != b) on_any = oracle::on_segment(p, minority[a], minority[b]);
    CHECK(on_any);
  }
}

TEST_CASE("smote two-point minority interpolates the segment") {
  Matrix m(6, 2);
  std::vector<int> labels = {0, 0, 0, 0, 1, 1};
  for (int i = 0; i < 4; ++i) { m.at(i, 0) = 5.0 + i; m.at(i, 1) = 5.0; }
  m.at(4, 0) = 0.0; m.at(4, 1) = 0.0;
  m.at(5, 0) = 1.0; m.at(5, 1) = 1.0;
  const auto ds = make_dataset(m, {"x", "y"}, labels,
                               std::vector<std::string>(6, "g"));
  const auto out = smote(ds, SmoteParams{1, 1.0}, 5);
  for (std::size_t r = 6; r < out.rows(); ++r) {
    const double t = out.features.at(r, 0);
    CHECK(out.features.at(r, 1) == doctest::Approx(t));  // on y = x
    CHECK(t >= 0.0);
    CHECK(t <= 1.0);
  }
}

TEST_CASE("smote is a no-op when the ratio target is already met") {
  Matrix m(4, 1);
  for (int i = 0; i < 4; ++i) m.at(i, 0) = i;
  const auto ds = make_dataset(m, {"x"}, {0, 0, 1, 1},
                               std::vector<std::string>(4, "g"));
  const auto out = smote(ds, SmoteParams{5, 1.0}, 1);
  CHECK(out.rows() == 4);
  CHECK(out.features.data() == ds.features.data());
}

TEST_CASE("smote parameter errors") {
  Matrix m(4, 1);
  for (int i = 0; i < 4; ++i) m.at(i, 0) = i;
  const auto one_minority = make_dataset(m, {"x"}, {0, 0, 0, 1},
                                         std::vector<std::string>(4, "g"));
  CHECK_THROWS_AS(smote(one_minority, SmoteParams{1, 1.0}, 1), Error);

  Matrix m5(5, 1);
  for (int i = 0; i < 5; ++i) m5.at(i, 0) = i;
  const auto two_minority = make_dataset(m5, {"x"}, {0, 0, 0, 1, 1},
                                         std::vector<std::string>(5, "g"));
  CHECK_THROWS_AS(smote(two_minority, SmoteParams{5, 1.0}, 1), Error);
}

}  // TEST_SUITE
