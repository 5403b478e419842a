#include <doctest.h>

#include <cmath>

#include "auditml/csv.hpp"
#include "auditml/synthgen.hpp"

using namespace auditml;

TEST_SUITE("synthgen") {

TEST_CASE("poisson quantile basics") {
  CHECK(poisson_quantile(1e-12, 3.0) == 0);
  CHECK(poisson_quantile(0.5, 3.0) == 3);  // CDF(2) = 0.423, CDF(3) = 0.647
  CHECK(poisson_quantile(0.999999, 3.0) > 10);
}

TEST_CASE("normal quantile inverts the normal cdf") {
  for (double q : {0.001, 0.05, 0.3, 0.5, 0.7, 0.95, 0.999})
    CHECK(normal_cdf(normal_quantile(q)) == doctest::Approx(q).epsilon(1e-10));
  CHECK(normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("identical config and seed reproduce identical records") {
  SynthConfig config;
  config.n_records = 600;
  const auto a = generate(config, 7);
  const auto b = generate(config, 7);
  CHECK(a.records == b.records);
  CHECK(a.true_risk_signal == b.true_risk_signal);
}

TEST_CASE("different seeds give different record sets") {
  SynthConfig config;
  config.n_records = 200;
  const auto a = generate(config, 1);
  const auto b = generate(config, 2);
  CHECK(a.records != b.records);
}

TEST_CASE("missing_rate zero leaves no missing markers") {
  SynthConfig config;
  config.n_records = 300;
  config.missing_rate = 0.0;
  const auto result = generate(config, 5);
  for (const auto& r : result.records) {
    CHECK(r.total_revenue_impact.has_value());
    CHECK(r.employee_workload.has_value());
    CHECK(r.market_value.has_value());
  }
}

TEST_CASE("default missing_rate produces roughly that share of gaps") {
  SynthConfig config;
  config.n_records = 4000;
  const auto result = generate(config, 11);
  std::size_t missing = 0;
  for (const auto& r : result.records)
    missing += !r.employee_workload.has_value();
  const double rate =
      static_cast<double>(missing) / static_cast<double>(config.n_records);
  CHECK(rate == doctest::Approx(config.missing_rate).epsilon(0.4));
}

TEST_CASE("generated records survive the CSV round trip") {
  SynthConfig config;
  config.n_records = 250;
  const auto result = generate(config, 99);
  const auto reparsed = parse_records(write_records(result.records));
  CHECK(reparsed == result.records);
}

TEST_CASE("planted signal: violations are higher among positives") {
  SynthConfig config;
  config.n_records = 2000;
  const auto result = generate(config, 13);
  const auto labels = derive_labels(result.records, LabelSpec{});
  double mean1 = 0.0, mean0 = 0.0;
  std::size_t n1 = 0, n0 = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const double cv = static_cast<double>(
        result.records[i].compliance_violations.value_or(0));
    if (labels[i]) {
      mean1 += cv;
      ++n1;
    } else {
      mean0 += cv;
      ++n0;
    }
  }
  REQUIRE(n1 >= 100);
  REQUIRE(n0 >= 100);
  CHECK(mean1 / static_cast<double>(n1) > mean0 / static_cast<double>(n0));
}

TEST_CASE("validation passes the default targets at n=5000, seed 42") {
  SynthConfig config;
  const auto result = generate(config, 42);
  const auto report = validate_generation(result.records, config);
  CHECK_FALSE(report.low_n);
  for (const auto& row : report.targets) {
    CHECK(row.defined);
    CHECK(row.pass);
  }
  CHECK(report.all_pass);
  CHECK(report.positive_rate == doctest::Approx(0.30).epsilon(0.2));
}

TEST_CASE("constant columns are reported as undefined correlations") {
  std::vector<AuditRecord> records(20);
  for (auto& r : records) {
    r.total_audit_engagements = 100;  // constant
    r.high_risk_cases = 10;
    r.fraud_cases_detected = 2;
  }
  SynthConfig config;
  const auto report = validate_generation(records, config);
  bool saw_undefined = false;
  for (const auto& row : report.targets)
    if (!row.defined) {
      saw_undefined = true;
      CHECK_FALSE(row.pass);
    }
  CHECK(saw_undefined);
}

TEST_CASE("small samples are flagged low_n and advisory-only") {
  SynthConfig config;
  config.n_records = 50;
  const auto result = generate(config, 3);
  const auto report = validate_generation(result.records, config);
  CHECK(report.low_n);
  CHECK(report.all_pass);  // advisory only under low_n
}

TEST_CASE("an overwhelming noise level is an infeasibility error") {
  SynthConfig config;
  config.noise_level = 0.99;
  CHECK_THROWS_AS(calibrate_latents(config), Error);
}

TEST_CASE("unsupported correlation pairs are rejected by name") {
  SynthConfig config;
  config.target_correlations.push_back({"Market_Value", "Year", 0.5});
  try {
    calibrate_latents(config);
    FAIL("expected generation error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("Market_Value") != std::string::npos);
  }
}

TEST_CASE("config validation rejects out-of-range knobs") {
  SynthConfig config;
  config.missing_rate = 0.7;
  CHECK_THROWS_AS(config.validate(), Error);

  SynthConfig years;
  years.year_min = 2019;
  CHECK_THROWS_AS(years.validate(), Error);

  SynthConfig corr;
  corr.target_correlations[0].target = 0.99;
  CHECK_THROWS_AS(corr.validate(), Error);
}

}  // TEST_SUITE
