#include "auditml/record.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace auditml {

const std::vector<std::string>& firm_enumeration() {
  static const std::vector<std::string> firms = {"EY", "PwC", "Deloitte",
                                                 "KPMG"};
  return firms;
}

const std::vector<std::string>& industry_enumeration() {
  static const std::vector<std::string> industries = {"Finance", "Tech",
                                                      "Retail", "Healthcare"};
  return industries;
}

const std::vector<std::string>& column_names() {
  static const std::vector<std::string> names = {
      "Year",
      "Firm_Name",
      "Total_Audit_Engagements",
      "High_Risk_Cases",
      "Compliance_Violations",
      "Fraud_Cases_Detected",
      "Industry_Affected",
      "Total_Revenue_Impact",
      "AI_Used_for_Auditing",
      "Employee_Workload",
      "Market_Value",
      "Region",
      "Financial_Status"};
  return names;
}

namespace {

std::optional<double> from_count(const std::optional<long long>& v) {
  if (!v) return std::nullopt;
  return static_cast<double>(*v);
}

std::optional<long long> to_count(const std::optional<double>& v) {
  if (!v) return std::nullopt;
  return std::llround(*v);
}

}  // namespace

const std::vector<NumericField>& numeric_fields() {
  static const std::vector<NumericField> fields = {
      {"Year", true,
       [](const AuditRecord& r) { return from_count(r.year); },
       [](AuditRecord& r, std::optional<double> v) { r.year = to_count(v); }},
      {"Total_Audit_Engagements", true,
       [](const AuditRecord& r) { return from_count(r.total_audit_engagements); },
       [](AuditRecord& r, std::optional<double> v) {
         r.total_audit_engagements = to_count(v);
       }},
      {"High_Risk_Cases", true,
       [](const AuditRecord& r) { return from_count(r.high_risk_cases); },
       [](AuditRecord& r, std::optional<double> v) {
         r.high_risk_cases = to_count(v);
       }},
      {"Compliance_Violations", true,
       [](const AuditRecord& r) { return from_count(r.compliance_violations); },
       [](AuditRecord& r, std::optional<double> v) {
         r.compliance_violations = to_count(v);
       }},
      {"Fraud_Cases_Detected", true,
       [](const AuditRecord& r) { return from_count(r.fraud_cases_detected); },
       [](AuditRecord& r, std::optional<double> v) {
         r.fraud_cases_detected = to_count(v);
       }},
      {"Total_Revenue_Impact", false,
       [](const AuditRecord& r) { return r.total_revenue_impact; },
       [](AuditRecord& r, std::optional<double> v) {
         r.total_revenue_impact = v;
       }},
      {"Employee_Workload", false,
       [](const AuditRecord& r) { return r.employee_workload; },
       [](AuditRecord& r, std::optional<double> v) { r.employee_workload = v; }},
      {"Market_Value", false,
       [](const AuditRecord& r) { return r.market_value; },
       [](AuditRecord& r, std::optional<double> v) { r.market_value = v; }},
  };
  return fields;
}

const std::vector<CategoricalField>& categorical_fields() {
  static const std::vector<CategoricalField> fields = {
      {"Firm_Name", false,
       [](const AuditRecord& r) { return r.firm_name; },
       [](AuditRecord& r, std::optional<std::string> v) {
         r.firm_name = std::move(v);
       }},
      {"Industry_Affected", false,
       [](const AuditRecord& r) { return r.industry_affected; },
       [](AuditRecord& r, std::optional<std::string> v) {
         r.industry_affected = std::move(v);
       }},
      {"Region", true,
       [](const AuditRecord& r) { return r.region; },
       [](AuditRecord& r, std::optional<std::string> v) {
         r.region = std::move(v);
       }},
      {"Financial_Status", true,
       [](const AuditRecord& r) { return r.financial_status; },
       [](AuditRecord& r, std::optional<std::string> v) {
         r.financial_status = std::move(v);
       }},
  };
  return fields;
}

namespace {

bool in_enumeration(const std::string& value,
                    const std::vector<std::string>& values) {
  return std::find(values.begin(), values.end(), value) != values.end();
}

[[noreturn]] void fail_data(std::size_t row, const std::string& what) {
  throw Error::data("data", "data row " + std::to_string(row) + ": " + what);
}

}  // namespace

void validate_record(const AuditRecord& rec, std::size_t row) {
  if (rec.year && (*rec.year < kYearMin || *rec.year > kYearMax))
    fail_data(row, "Year " + std::to_string(*rec.year) + " outside [" +
                       std::to_string(kYearMin) + ", " +
                       std::to_string(kYearMax) + "]");
  if (rec.firm_name && !in_enumeration(*rec.firm_name, firm_enumeration()))
    fail_data(row, "Firm_Name '" + *rec.firm_name + "' not in enumeration");
  if (rec.industry_affected &&
      !in_enumeration(*rec.industry_affected, industry_enumeration()))
    fail_data(row, "Industry_Affected '" + *rec.industry_affected +
                       "' not in enumeration");
  for (const auto& f : numeric_fields()) {
    const auto v = f.get(rec);
    if (!v) continue;
    if (std::string(f.name) == "Year") continue;
    if (*v < 0.0) fail_data(row, std::string(f.name) + " must be non-negative");
  }
  if (rec.employee_workload && *rec.employee_workload <= 0.0)
    fail_data(row, "Employee_Workload must be positive");
  if (rec.high_risk_cases && rec.total_audit_engagements &&
      *rec.high_risk_cases > *rec.total_audit_engagements)
    throw Error::data(
        "consistency",
        "data row " + std::to_string(row) + ": High_Risk_Cases (" +
            std::to_string(*rec.high_risk_cases) +
            ") exceeds Total_Audit_Engagements (" +
            std::to_string(*rec.total_audit_engagements) + ")");
}

double risk_percentage(const AuditRecord& rec, std::size_t row) {
  if (!rec.total_audit_engagements || *rec.total_audit_engagements == 0)
    throw Error::data("labeling",
                      "data row " + std::to_string(row) +
                          ": Total_Audit_Engagements missing or zero");
  if (!rec.high_risk_cases)
    throw Error::data("labeling", "data row " + std::to_string(row) +
                                      ": High_Risk_Cases missing");
  return static_cast<double>(*rec.high_risk_cases) /
         static_cast<double>(*rec.total_audit_engagements);
}

std::vector<int> derive_labels(const std::vector<AuditRecord>& records,
                               const LabelSpec& spec) {
  spec.validate();
  std::vector<int> labels(records.size());
  for (std::size_t i = 0; i < records.size(); ++i)
    labels[i] = risk_percentage(records[i], i + 1) >= spec.threshold ? 1 : 0;
  return labels;
}

}  // namespace auditml
