#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "auditml/cli.hpp"
#include "auditml/csv.hpp"
#include "auditml/record.hpp"

namespace fs = std::filesystem;
using namespace auditml;

namespace {

int run_cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv = {"auditml"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return cli::run(static_cast<int>(argv.size()), argv.data());
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("auditml_test_" + tag);
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string str(const std::string& name = "") const {
    return (name.empty() ? path : path / name).string();
  }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

// A small-generator config so CLI runs stay fast.
const char* kSmallConfig =
    "gen.n_records = 300\n"
    "rf.n_estimators = 15\n"
    "eval.folds = 3\n"
    "svm.max_passes = 300\n";

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("gen writes the CSV, validation report, and manifest") {
  TempDir dir("gen");
  write_file(dir.str("cfg"), kSmallConfig);
  const int code = run_cli({"--config", dir.str("cfg"), "--seed", "42",
                            "--out", dir.str("out"), "gen"});
  CHECK(code == 0);
  CHECK(fs::exists(dir.str("out/synthetic.csv")));
  CHECK(fs::exists(dir.str("out/gen_validation.txt")));
  CHECK(fs::exists(dir.str("out/manifest_gen.txt")));

  const auto records = parse_records(slurp(dir.str("out/synthetic.csv")));
  CHECK(records.size() == 300);
}

TEST_CASE("identical seeds give byte-identical outputs") {
  TempDir dir("det");
  write_file(dir.str("cfg"), kSmallConfig);
  REQUIRE(run_cli({"--config", dir.str("cfg"), "--seed", "9", "--out",
                   dir.str("a"), "gen"}) == 0);
  REQUIRE(run_cli({"--config", dir.str("cfg"), "--seed", "9", "--out",
                   dir.str("b"), "gen"}) == 0);
  CHECK(slurp(dir.str("a/synthetic.csv")) == slurp(dir.str("b/synthetic.csv")));
  CHECK(slurp(dir.str("a/manifest_gen.txt")) ==
        slurp(dir.str("b/manifest_gen.txt")));
}

TEST_CASE("unknown flags exit with code 2") {
  CHECK(run_cli({"--bogus-flag", "gen"}) == 2);
  CHECK(run_cli({"definitely-not-a-command"}) == 2);
}

TEST_CASE("missing config file exits with code 2") {
  CHECK(run_cli({"--config", "/nope/missing.cfg", "gen"}) == 2);
}

TEST_CASE("train and predict round-trip through the model file") {
  TempDir dir("train");
  write_file(dir.str("cfg"), kSmallConfig);
  REQUIRE(run_cli({"--config", dir.str("cfg"), "--seed", "4", "--out",
                   dir.str("out"), "gen"}) == 0);
  REQUIRE(run_cli({"--config", dir.str("cfg"), "--seed", "4", "--out",
                   dir.str("out"), "train", "--model", "rf", "--input",
                   dir.str("out/synthetic.csv")}) == 0);
  CHECK(fs::exists(dir.str("out/model_rf.json")));

  REQUIRE(run_cli({"--config", dir.str("cfg"), "--seed", "4", "--out",
                   dir.str("out"), "predict", "--model-file",
                   dir.str("out/model_rf.json"), "--input",
                   dir.str("out/synthetic.csv")}) == 0);
  const auto predictions = slurp(dir.str("out/predictions.csv"));
  CHECK(predictions.find("row,label,score,positive_class") == 0);
  CHECK(std::count(predictions.begin(), predictions.end(), '\n') == 301);
}

TEST_CASE("training on single-class data exits with code 4") {
  TempDir dir("single");
  std::string csv =
      "Year,Firm_Name,Total_Audit_Engagements,High_Risk_Cases,"
      "Compliance_Violations,Fraud_Cases_Detected,Industry_Affected,"
      "Total_Revenue_Impact,AI_Used_for_Auditing,Employee_Workload,"
      "Market_Value,Region,Financial_Status\n";
  for (int i = 0; i < 30; ++i)
    csv += "2022,PwC,100,0,1,0,Finance,5,Yes,40,100,EMEA,Stable\n";
  write_file(dir.str("flat.csv"), csv);
  const int code = run_cli({"--out", dir.str("out"), "train", "--model", "svm",
                            "--input", dir.str("flat.csv")});
  CHECK(code == 4);
}

TEST_CASE("malformed input CSV exits with code 3") {
  TempDir dir("bad");
  write_file(dir.str("bad.csv"), "Year,Bogus\n2022,1\n");
  const int code =
      run_cli({"--out", dir.str("out"), "figures", "--input", dir.str("bad.csv")});
  CHECK(code == 3);
}

TEST_CASE("cv, corr, and figures emit their report files") {
  TempDir dir("cv");
  write_file(dir.str("cfg"), kSmallConfig);
  REQUIRE(run_cli({"--config", dir.str("cfg"), "--seed", "77", "--out",
                   dir.str("out"), "cv", "--model", "rf"}) == 0);
  CHECK(fs::exists(dir.str("out/cv_rf.csv")));
  CHECK(fs::exists(dir.str("out/cv_rf.txt")));
  CHECK(fs::exists(dir.str("out/cv_rf.json")));
  const auto csv = slurp(dir.str("out/cv_rf.csv"));
  CHECK(csv.find("fold,f1,accuracy,recall,precision") == 0);
  CHECK(csv.find("mean,") != std::string::npos);
  CHECK(csv.find("stddev,") != std::string::npos);

  REQUIRE(run_cli({"--config", dir.str("cfg"), "--seed", "77", "--out",
                   dir.str("out"), "corr"}) == 0);
  const auto corr = slurp(dir.str("out/corr_matrix.csv"));
  CHECK(corr.find("Risk_Percentage") != std::string::npos);

  REQUIRE(run_cli({"--config", dir.str("cfg"), "--seed", "77", "--out",
                   dir.str("out"), "figures"}) == 0);
  CHECK(fs::exists(dir.str("out/figure1_high_risk_trend.csv")));
  CHECK(fs::exists(dir.str("out/figure2_revenue_impact.csv")));
}

TEST_CASE("prep cleans records and reports transform statistics") {
  TempDir dir("prep");
  write_file(dir.str("cfg"), kSmallConfig);
  REQUIRE(run_cli({"--config", dir.str("cfg"), "--seed", "5", "--out",
                   dir.str("out"), "prep"}) == 0);
  const auto cleaned = parse_records(slurp(dir.str("out/prep.csv")));
  CHECK(cleaned.size() == 300);
  for (const auto& r : cleaned) {
    CHECK(r.employee_workload.has_value());
    CHECK(r.market_value.has_value());
  }
  const auto stats = slurp(dir.str("out/prep_stats.txt"));
  CHECK(stats.find("impute.") != std::string::npos);
  CHECK(stats.find("clip.") != std::string::npos);
}

}  // TEST_SUITE
