#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "auditml/dataset.hpp"
#include "auditml/record.hpp"

namespace auditml {

// ---------------------------------------------------------------------------
// Imputation (median for numerics, mode for categoricals/booleans)

struct ImputeReport {
  struct Entry {
    std::string field;
    std::string fill_value;
    std::size_t filled = 0;
  };
  std::vector<Entry> entries;
};

// Fills every missing marker. Median of an integral field is rounded to the
// nearest whole number; mode ties break to the lexicographically smaller
// value. A field that is missing in every record is an imputation error.
std::vector<AuditRecord> impute(const std::vector<AuditRecord>& records,
                                ImputeReport* report = nullptr);

// ---------------------------------------------------------------------------
// Outlier clipping at empirical quantiles

struct ClipReport {
  struct Entry {
    std::string field;
    double low = 0.0;
    double high = 0.0;
    std::size_t clipped = 0;
  };
  std::vector<Entry> entries;
};

// Empirical quantile with midpoint positions (i + 0.5)/n and linear
// interpolation between order statistics. `sorted` must be ascending.
double empirical_quantile(const std::vector<double>& sorted, double q);

// Clips every numeric field except Year to its [q_low, q_high] empirical
// quantiles, computed on the present values of the input set. Integral
// fields are clipped to the nearest whole value inside the bounds.
std::vector<AuditRecord> clip_outliers(const std::vector<AuditRecord>& records,
                                       double q_low, double q_high,
                                       ClipReport* report = nullptr);

// ---------------------------------------------------------------------------
// Derived firm-history features

struct DerivedFeatures {
  std::vector<std::string> names;  // Historical_Violation_Ratio, ...
  Matrix columns;                  // n x names.size()
  std::size_t warnings = 0;        // zero-denominator cases defined as 0
};

// Per row, grouped by firm and ordered by year:
//   Historical_Violation_Ratio — cumulative violations / cumulative
//     engagements over strictly prior years (0 for a firm's first year);
//   Audit_Frequency_Change — engagements minus the mean engagements of the
//     group's immediately preceding year (0 when there is none);
//   Fraud_Rate — fraud cases / engagements for the row itself.
// Row order of the input is preserved; future rows never influence earlier
// rows' values.
DerivedFeatures derive_features(const std::vector<AuditRecord>& records);

// ---------------------------------------------------------------------------
// Encoding plan: numeric passthrough, one-hot, booleans, binning

struct BinningRule {
  std::string field;
  std::vector<double> edges;  // ascending boundaries, e.g. {0, 40, 55, inf}
  int quantile_bins = 0;      // when > 0, edges are fitted from quantiles
};

struct EncodingPlan {
  std::vector<std::string> numeric;   // plan order, binned fields in place
  std::vector<std::string> booleans;
  std::vector<std::string> one_hot;
  std::vector<BinningRule> binning;
  bool include_derived = true;

  // Everything from Table 1 except High_Risk_Cases, which the label is
  // derived from and must not re-enter the feature matrix.
  static EncodingPlan defaults();

  void validate() const;  // unknown fields / non-monotone edges -> plan error
};

// Categories observed at fit time, frozen for predict time. Open-vocabulary
// fields carry an explicit =__other__ column for unseen categories.
struct FittedEncoder {
  EncodingPlan plan;
  std::map<std::string, std::vector<std::string>> categories;
  std::map<std::string, std::vector<double>> bin_edges;

  std::vector<std::string> feature_names(
      const std::vector<std::string>& derived_names) const;
};

FittedEncoder fit_encoder(const std::vector<AuditRecord>& records,
                          const EncodingPlan& plan);

// Numeric rows in the deterministic column order: plan numerics (bin indices
// for binned fields), booleans, derived columns, then one-hot blocks with
// categories in lexicographic order.
Matrix encode_records(const FittedEncoder& encoder,
                      const std::vector<AuditRecord>& records,
                      const DerivedFeatures& derived);

// Fit-and-assemble path used on training data.
Dataset build_dataset(const std::vector<AuditRecord>& records,
                      const EncodingPlan& plan, const std::vector<int>& labels,
                      FittedEncoder* fitted_out = nullptr);

// Predict-time path against a stored encoder (labels optional: pass {} to
// get all-zero placeholder labels flagged single_class).
Dataset build_dataset_with(const FittedEncoder& encoder,
                           const std::vector<AuditRecord>& records,
                           const std::vector<int>& labels);

// ---------------------------------------------------------------------------
// Scaling

enum class ScalerKind { standard_scale, min_max_scale };

std::string to_string(ScalerKind k);
ScalerKind scaler_kind_from_string(const std::string& s);

struct FittedTransform {
  ScalerKind kind = ScalerKind::standard_scale;
  std::vector<std::string> feature_names;
  std::vector<double> stat_a;  // mean (standard) or min (min-max)
  std::vector<double> stat_b;  // population stddev or max
  std::uint64_t fitted_on = 0;

  std::uint64_t fingerprint() const;
};

FittedTransform fit_scaler(const Dataset& ds, ScalerKind kind);

// standard: x' = (x - mean)/stddev, stddev 0 -> 0;
// min-max:  x' = (x - min)/(max - min), max == min -> 0.
Dataset apply_scaler(const FittedTransform& t, const Dataset& ds);
Matrix apply_scaler_rows(const FittedTransform& t, const Matrix& rows);

// ---------------------------------------------------------------------------
// Sliding-window restructuring

struct WindowSpec {
  int window_length = 3;  // W >= 2
  int stride = 1;
  std::string group_by = "Firm_Name";

  void validate() const;
};

struct WindowizeResult {
  Dataset dataset;
  std::size_t short_runs = 0;  // group runs shorter than W (warning, not error)
};

// Aggregates rows per (group, year) by mean, splits each group into runs of
// consecutive years, and emits one sample per window position: current-year
// values plus lagged values and year-over-year deltas for each numeric field
// except Year. Labels come from the aggregated current year.
WindowizeResult windowize(const std::vector<AuditRecord>& records,
                          const WindowSpec& spec,
                          const LabelSpec& label_spec = {});

// ---------------------------------------------------------------------------
// SMOTE

struct SmoteParams {
  int k = 5;
  double target_ratio = 1.0;  // minority/majority after resampling
};

// Appends interpolated minority samples until minority/majority reaches
// target_ratio. Synthetic rows are flagged in Dataset::synthetic; original
// rows are left untouched. No-op when the ratio is already met.
Dataset smote(const Dataset& ds, const SmoteParams& params,
              std::uint64_t seed);

}  // namespace auditml
