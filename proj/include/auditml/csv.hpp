#pragma once

#include <string>
#include <vector>

#include "auditml/record.hpp"

namespace auditml {

// Parses the Table-1 CSV format. The header must carry the canonical column
// names in order (case-insensitive, spaces accepted for underscores). Empty
// cells become missing markers; records are validated field by field.
std::vector<AuditRecord> parse_records(const std::string& csv_text);

// Inverse of parse_records: parse(write(records)) == records.
std::string write_records(const std::vector<AuditRecord>& records);

// Shortest decimal representation that round-trips the double exactly.
std::string format_double(double v);

// Low-level helpers shared with the report writers.
std::vector<std::string> split_csv_line(const std::string& line);
std::string csv_escape(const std::string& cell);

}  // namespace auditml
