#include "auditml/dataset.hpp"

#include <cmath>
#include <cstring>

namespace auditml {

Dataset Dataset::take_rows(const std::vector<std::size_t>& idx) const {
  Dataset out;
  out.features = features.take_rows(idx);
  out.feature_names = feature_names;
  out.labels.reserve(idx.size());
  out.group_keys.reserve(idx.size());
  for (std::size_t i : idx) {
    out.labels.push_back(labels[i]);
    out.group_keys.push_back(group_keys[i]);
    if (!synthetic.empty()) out.synthetic.push_back(synthetic[i]);
  }
  out.schema_version = schema_version;
  bool has0 = false, has1 = false;
  for (int y : out.labels) (y ? has1 : has0) = true;
  out.single_class = !(has0 && has1);
  return out;
}

Dataset make_dataset(Matrix features, std::vector<std::string> feature_names,
                     std::vector<int> labels,
                     std::vector<std::string> group_keys) {
  if (features.rows() == 0)
    throw Error::data("construction", "empty dataset: no rows");
  if (feature_names.size() != features.cols())
    throw Error::data("construction",
                      "feature_names length != feature columns");
  if (labels.size() != features.rows() ||
      group_keys.size() != features.rows())
    throw Error::data("construction",
                      "labels/group_keys length != feature rows");
  for (std::size_t r = 0; r < features.rows(); ++r)
    for (std::size_t c = 0; c < features.cols(); ++c)
      if (!std::isfinite(features.at(r, c)))
        throw Error::data("construction",
                          "residual missing value at row " +
                              std::to_string(r) + ", feature '" +
                              feature_names[c] + "'");
  for (int y : labels)
    if (y != 0 && y != 1)
      throw Error::data("construction", "labels must be binary 0/1");

  Dataset ds;
  ds.features = std::move(features);
  ds.feature_names = std::move(feature_names);
  ds.labels = std::move(labels);
  ds.group_keys = std::move(group_keys);
  bool has0 = false, has1 = false;
  for (int y : ds.labels) (y ? has1 : has0) = true;
  ds.single_class = !(has0 && has1);
  return ds;
}

std::uint64_t fnv1a64(const void* data, std::size_t len, std::uint64_t seed) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = seed;
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t fnv1a64(const std::string& s) {
  return fnv1a64(s.data(), s.size());
}

std::uint64_t dataset_fingerprint(const Dataset& ds) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto& name : ds.feature_names)
    h = fnv1a64(name.data(), name.size(), h);
  if (!ds.labels.empty())
    h = fnv1a64(ds.labels.data(), ds.labels.size() * sizeof(int), h);
  const auto& data = ds.features.data();
  if (!data.empty())
    h = fnv1a64(data.data(), data.size() * sizeof(double), h);
  return h;
}

}  // namespace auditml
