#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "auditml/pipeline.hpp"
#include "auditml/record.hpp"

namespace auditml {

// Positive class = high-risk = label 1.
struct ConfusionMatrix {
  long long tp = 0;
  long long fp = 0;
  long long fn = 0;
  long long tn = 0;

  long long total() const { return tp + fp + fn + tn; }
};

ConfusionMatrix confusion_from(const std::vector<int>& truth,
                               const std::vector<int>& predicted);

struct MetricSet {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// precision/recall/f1 defined as 0 on their degenerate denominators.
MetricSet metrics(const ConfusionMatrix& cm);

// Shuffle within class, deal round-robin: per fold, each class count is the
// floor or ceil of class_total/k. A class smaller than k is an error.
std::vector<std::vector<std::size_t>> stratified_folds(
    const std::vector<int>& labels, int k, std::uint64_t seed);

struct CVReport {
  std::string model_name;
  int k = 0;
  std::uint64_t seed = 0;
  std::vector<MetricSet> folds;
  std::vector<double> fold_seconds;  // informational; never written to reports
  MetricSet mean;
  MetricSet stddev;  // population stddev over folds
};

// Fold-local protocol: scaler and SMOTE are fitted on the training rows of
// each fold only; the held-out rows never touch a fitted statistic.
CVReport cross_validate(const ModelSpec& spec, const Dataset& ds, int k,
                        std::uint64_t seed, int n_threads = 1);

struct ComparisonTable {
  std::vector<CVReport> rows;  // ranked by mean F1 desc, ties by name
};

// One CVReport per spec over identical fold assignments.
ComparisonTable compare_models(const std::vector<ModelSpec>& specs,
                               const Dataset& ds, int k, std::uint64_t seed,
                               int n_threads = 1);

// importance_j = baseline F1 - mean F1 over `repeats` seeded shuffles of
// column j. May be negative.
std::vector<double> permutation_importance(
    const std::function<std::vector<int>(const Matrix&)>& predict,
    const Dataset& ds, int repeats, std::uint64_t seed);

// nullopt when either column has zero variance.
std::optional<double> pearson(const std::vector<double>& x,
                              const std::vector<double>& y);

struct CorrelationMatrix {
  std::vector<std::string> names;
  std::vector<std::vector<std::optional<double>>> r;  // symmetric, unit diagonal
};

CorrelationMatrix pearson_matrix(const std::vector<std::string>& names,
                                 const std::vector<std::vector<double>>& cols);

struct FigureAggregates {
  struct FirmYearRow {
    std::string firm;
    long long year = 0;
    long long high_risk_total = 0;
  };
  struct FirmIndustryRow {
    std::string firm;
    std::string industry;
    double revenue_total = 0.0;
    double revenue_stddev = 0.0;  // population, 0 for single-record groups
    std::size_t records = 0;
  };
  std::vector<FirmYearRow> high_risk_by_firm_year;
  std::vector<FirmIndustryRow> revenue_by_firm_industry;
};

// Grouped sums backing the trend and revenue-impact report tables. Groups
// with no observed rows are omitted.
FigureAggregates figure_aggregates(const std::vector<AuditRecord>& records);

}  // namespace auditml
