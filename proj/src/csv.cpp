#include "auditml/csv.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <sstream>
#include <string>

namespace auditml {

std::string format_double(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string csv_escape(const std::string& cell) {
  if (cell.find_first_of(",\"\n\r") == std::string::npos) return cell;
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"' && cur.empty()) {
      quoted = true;
    } else if (c == ',') {
      cells.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  cells.push_back(std::move(cur));
  return cells;
}

namespace {

std::string canonical_name(std::string s) {
  std::replace(s.begin(), s.end(), ' ', '_');
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::string strip_cr(std::string s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == '\n')) s.pop_back();
  return s;
}

[[noreturn]] void fail_cell(std::size_t row, const std::string& column,
                            const std::string& what) {
  throw Error::data("data", "data row " + std::to_string(row) + ", column " +
                                column + ": " + what);
}

long long parse_count(const std::string& cell, std::size_t row,
                      const std::string& column) {
  long long value = 0;
  const auto res =
      std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (res.ec != std::errc() || res.ptr != cell.data() + cell.size())
    fail_cell(row, column, "unparsable integer '" + cell + "'");
  return value;
}

double parse_real(const std::string& cell, std::size_t row,
                  const std::string& column) {
  char* end = nullptr;
  const double value = std::strtod(cell.c_str(), &end);
  if (end != cell.c_str() + cell.size() || cell.empty())
    fail_cell(row, column, "unparsable number '" + cell + "'");
  return value;
}

bool parse_boolean(const std::string& cell, std::size_t row,
                   const std::string& column) {
  const std::string c = canonical_name(cell);
  if (c == "yes") return true;
  if (c == "no") return false;
  fail_cell(row, column, "expected Yes or No, got '" + cell + "'");
}

void check_header(const std::vector<std::string>& got) {
  const auto& expected = column_names();
  std::vector<std::string> canon_got;
  canon_got.reserve(got.size());
  for (const auto& g : got) canon_got.push_back(canonical_name(strip_cr(g)));

  std::vector<std::string> canon_expected;
  for (const auto& e : expected) canon_expected.push_back(canonical_name(e));

  if (canon_got == canon_expected) return;

  std::string missing, extra;
  for (std::size_t i = 0; i < canon_expected.size(); ++i) {
    if (std::find(canon_got.begin(), canon_got.end(), canon_expected[i]) ==
        canon_got.end()) {
      if (!missing.empty()) missing += ", ";
      missing += expected[i];
    }
  }
  for (const auto& g : canon_got) {
    if (std::find(canon_expected.begin(), canon_expected.end(), g) ==
        canon_expected.end()) {
      if (!extra.empty()) extra += ", ";
      extra += g;
    }
  }
  std::string msg = "header does not match Table 1 columns";
  if (!missing.empty()) msg += "; missing: " + missing;
  if (!extra.empty()) msg += "; extra: " + extra;
  if (missing.empty() && extra.empty()) msg += "; columns out of order";
  throw Error::data("schema", msg);
}

}  // namespace

std::vector<AuditRecord> parse_records(const std::string& csv_text) {
  std::istringstream in(csv_text);
  std::string line;
  if (!std::getline(in, line))
    throw Error::data("schema", "empty input: no header row");
  check_header(split_csv_line(strip_cr(line)));

  const auto& cols = column_names();
  std::vector<AuditRecord> records;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    line = strip_cr(line);
    if (line.empty()) continue;
    ++row;
    auto cells = split_csv_line(line);
    if (cells.size() != cols.size())
      throw Error::data("data", "data row " + std::to_string(row) + ": got " +
                                    std::to_string(cells.size()) +
                                    " cells, expected " +
                                    std::to_string(cols.size()));
    AuditRecord rec;
    for (std::size_t c = 0; c < cols.size(); ++c) {
      const std::string& cell = cells[c];
      if (cell.empty()) continue;  // missing marker
      const std::string& name = cols[c];
      if (name == "Year")
        rec.year = parse_count(cell, row, name);
      else if (name == "Firm_Name")
        rec.firm_name = cell;
      else if (name == "Total_Audit_Engagements")
        rec.total_audit_engagements = parse_count(cell, row, name);
      else if (name == "High_Risk_Cases")
        rec.high_risk_cases = parse_count(cell, row, name);
      else if (name == "Compliance_Violations")
        rec.compliance_violations = parse_count(cell, row, name);
      else if (name == "Fraud_Cases_Detected")
        rec.fraud_cases_detected = parse_count(cell, row, name);
      else if (name == "Industry_Affected")
        rec.industry_affected = cell;
      else if (name == "Total_Revenue_Impact")
        rec.total_revenue_impact = parse_real(cell, row, name);
      else if (name == "AI_Used_for_Auditing")
        rec.ai_used_for_auditing = parse_boolean(cell, row, name);
      else if (name == "Employee_Workload")
        rec.employee_workload = parse_real(cell, row, name);
      else if (name == "Market_Value")
        rec.market_value = parse_real(cell, row, name);
      else if (name == "Region")
        rec.region = cell;
      else if (name == "Financial_Status")
        rec.financial_status = cell;
    }
    validate_record(rec, row);
    records.push_back(std::move(rec));
  }
  return records;
}

std::string write_records(const std::vector<AuditRecord>& records) {
  std::string out;
  const auto& cols = column_names();
  for (std::size_t c = 0; c < cols.size(); ++c) {
    if (c) out += ',';
    out += cols[c];
  }
  out += '\n';

  auto put_count = [&](const std::optional<long long>& v) {
    if (v) out += std::to_string(*v);
  };
  auto put_real = [&](const std::optional<double>& v) {
    if (v) out += format_double(*v);
  };
  auto put_str = [&](const std::optional<std::string>& v) {
    if (v) out += csv_escape(*v);
  };

  for (const auto& r : records) {
    put_count(r.year);
    out += ',';
    put_str(r.firm_name);
    out += ',';
    put_count(r.total_audit_engagements);
    out += ',';
    put_count(r.high_risk_cases);
    out += ',';
    put_count(r.compliance_violations);
    out += ',';
    put_count(r.fraud_cases_detected);
    out += ',';
    put_str(r.industry_affected);
    out += ',';
    put_real(r.total_revenue_impact);
    out += ',';
    if (r.ai_used_for_auditing) out += *r.ai_used_for_auditing ? "Yes" : "No";
    out += ',';
    put_real(r.employee_workload);
    out += ',';
    put_real(r.market_value);
    out += ',';
    put_str(r.region);
    out += ',';
    put_str(r.financial_status);
    out += '\n';
  }
  return out;
}

}  // namespace auditml
