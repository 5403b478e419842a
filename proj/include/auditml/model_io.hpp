#pragma once

#include <cstdint>
#include <string>

#include "auditml/config.hpp"
#include "auditml/pipeline.hpp"

namespace auditml {

inline constexpr int kModelFormatVersion = 1;

// One saved model: the classifier, the record encoder it expects, the label
// definition it was trained for, and reproduction metadata. Serialized as a
// single versioned JSON document with a payload checksum; load rejects
// version mismatches and corrupt payloads, never migrates silently.
struct ModelFile {
  Classifier classifier;
  FittedEncoder encoder;
  LabelSpec label_spec;
  std::uint64_t seed = 0;
  std::uint64_t config_hash = 0;
};

std::string serialize_model(const ModelFile& model);
ModelFile deserialize_model(const std::string& text);

void save_model(const ModelFile& model, const std::string& path);
ModelFile load_model(const std::string& path);

}  // namespace auditml
