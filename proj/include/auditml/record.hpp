#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "auditml/errors.hpp"

namespace auditml {

// One firm-year audit row. Every numeric field is optional so that
// missingness stays a typed marker rather than a sentinel value.
struct AuditRecord {
  std::optional<long long> year;
  std::optional<std::string> firm_name;
  std::optional<long long> total_audit_engagements;
  std::optional<long long> high_risk_cases;
  std::optional<long long> compliance_violations;
  std::optional<long long> fraud_cases_detected;
  std::optional<std::string> industry_affected;
  std::optional<double> total_revenue_impact;
  std::optional<bool> ai_used_for_auditing;
  std::optional<double> employee_workload;
  std::optional<double> market_value;
  std::optional<std::string> region;
  std::optional<std::string> financial_status;

  bool operator==(const AuditRecord&) const = default;
};

inline constexpr int kYearMin = 2020;
inline constexpr int kYearMax = 2025;

const std::vector<std::string>& firm_enumeration();      // EY, PwC, Deloitte, KPMG
const std::vector<std::string>& industry_enumeration();  // Finance, Tech, Retail, Healthcare

// Canonical Table-1 column order used by the CSV interface.
const std::vector<std::string>& column_names();

// Uniform access to the numeric fields (year and counts flagged integral so
// imputation can round them back to whole numbers).
struct NumericField {
  const char* name;
  bool integral;
  std::optional<double> (*get)(const AuditRecord&);
  void (*set)(AuditRecord&, std::optional<double>);
};
const std::vector<NumericField>& numeric_fields();

// Uniform access to the categorical (string) fields.
struct CategoricalField {
  const char* name;
  bool open_vocabulary;  // region / financial_status accept any value
  std::optional<std::string> (*get)(const AuditRecord&);
  void (*set)(AuditRecord&, std::optional<std::string>);
};
const std::vector<CategoricalField>& categorical_fields();

// Field-level invariants (ranges, enumerations, count consistency).
// `row` is the 1-based data row used in error messages.
void validate_record(const AuditRecord& rec, std::size_t row);

struct LabelSpec {
  double threshold = 0.15;  // risk-percentage cutoff, in (0,1), inclusive (>=)
  std::string positive_class_name = "high_risk";

  void validate() const {
    if (!(threshold > 0.0 && threshold < 1.0))
      throw Error::config("label", "label threshold must lie in (0,1)");
  }
};

// label_i = 1 iff high_risk_cases_i / total_audit_engagements_i >= threshold.
std::vector<int> derive_labels(const std::vector<AuditRecord>& records,
                               const LabelSpec& spec);

// high_risk_cases / total_audit_engagements for one record; throws the same
// labeling error derive_labels would.
double risk_percentage(const AuditRecord& rec, std::size_t row);

}  // namespace auditml
