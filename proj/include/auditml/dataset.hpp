#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "auditml/matrix.hpp"
#include "auditml/record.hpp"

namespace auditml {

inline constexpr const char* kSchemaVersion = "audit-schema-1";

// Immutable numeric view of the data: no missing values, labels aligned by
// row, group keys kept for window/derived-feature grouping.
struct Dataset {
  Matrix features;
  std::vector<std::string> feature_names;
  std::vector<int> labels;
  std::vector<std::string> group_keys;
  std::string schema_version = kSchemaVersion;
  bool single_class = false;             // set at construction, checked by trainers
  std::vector<std::uint8_t> synthetic;   // 1 for SMOTE rows; empty means none

  std::size_t rows() const { return features.rows(); }
  std::size_t cols() const { return features.cols(); }

  Dataset take_rows(const std::vector<std::size_t>& idx) const;
};

// Validates the cross-field invariants and fills the single_class flag.
// Throws a construction error on residual missing values (NaN cells),
// misaligned lengths, or an empty matrix.
Dataset make_dataset(Matrix features, std::vector<std::string> feature_names,
                     std::vector<int> labels,
                     std::vector<std::string> group_keys);

// FNV-1a 64-bit; used for dataset/transform fingerprints and file checksums.
std::uint64_t fnv1a64(const void* data, std::size_t len,
                      std::uint64_t seed = 0xcbf29ce484222325ULL);
std::uint64_t fnv1a64(const std::string& s);

// Hash over feature names, labels, and the feature bytes.
std::uint64_t dataset_fingerprint(const Dataset& ds);

}  // namespace auditml
