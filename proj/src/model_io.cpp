#include "auditml/model_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace auditml {

namespace {

using nlohmann::json;

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::uint64_t from_hex64(const std::string& s) {
  return std::strtoull(s.c_str(), nullptr, 16);
}

json matrix_to_json(const Matrix& m) {
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", m.data()}};
}

Matrix matrix_from_json(const json& j) {
  const auto rows = j.at("rows").get<std::size_t>();
  const auto cols = j.at("cols").get<std::size_t>();
  const auto data = j.at("data").get<std::vector<double>>();
  if (data.size() != rows * cols)
    throw Error::data("corruption", "matrix payload size mismatch");
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) m.at(r, c) = data[r * cols + c];
  return m;
}

json scaler_to_json(const FittedTransform& t) {
  return json{{"kind", to_string(t.kind)},
              {"feature_names", t.feature_names},
              {"stat_a", t.stat_a},
              {"stat_b", t.stat_b},
              {"fitted_on", hex64(t.fitted_on)}};
}

FittedTransform scaler_from_json(const json& j) {
  FittedTransform t;
  t.kind = scaler_kind_from_string(j.at("kind").get<std::string>());
  t.feature_names = j.at("feature_names").get<std::vector<std::string>>();
  t.stat_a = j.at("stat_a").get<std::vector<double>>();
  t.stat_b = j.at("stat_b").get<std::vector<double>>();
  t.fitted_on = from_hex64(j.at("fitted_on").get<std::string>());
  return t;
}

json encoder_to_json(const FittedEncoder& enc) {
  json binning = json::array();
  for (const auto& rule : enc.plan.binning)
    binning.push_back(json{{"field", rule.field},
                           {"edges", rule.edges},
                           {"quantile_bins", rule.quantile_bins}});
  json fitted_edges = json::object();
  for (const auto& [field, edges] : enc.bin_edges) fitted_edges[field] = edges;
  json categories = json::object();
  for (const auto& [field, cats] : enc.categories) categories[field] = cats;
  return json{{"numeric", enc.plan.numeric},
              {"booleans", enc.plan.booleans},
              {"one_hot", enc.plan.one_hot},
              {"include_derived", enc.plan.include_derived},
              {"binning", binning},
              {"bin_edges", fitted_edges},
              {"categories", categories}};
}

FittedEncoder encoder_from_json(const json& j) {
  FittedEncoder enc;
  enc.plan.numeric = j.at("numeric").get<std::vector<std::string>>();
  enc.plan.booleans = j.at("booleans").get<std::vector<std::string>>();
  enc.plan.one_hot = j.at("one_hot").get<std::vector<std::string>>();
  enc.plan.include_derived = j.at("include_derived").get<bool>();
  for (const auto& rule : j.at("binning")) {
    BinningRule r;
    r.field = rule.at("field").get<std::string>();
    r.edges = rule.at("edges").get<std::vector<double>>();
    r.quantile_bins = rule.at("quantile_bins").get<int>();
    enc.plan.binning.push_back(r);
  }
  for (const auto& [field, edges] : j.at("bin_edges").items())
    enc.bin_edges[field] = edges.get<std::vector<double>>();
  for (const auto& [field, cats] : j.at("categories").items())
    enc.categories[field] = cats.get<std::vector<std::string>>();
  return enc;
}

json forest_to_json(const Forest& forest) {
  json trees = json::array();
  for (const auto& tree : forest.trees) {
    json nodes = json::array();
    for (const auto& n : tree.nodes)
      nodes.push_back(json::array(
          {n.feature, n.threshold, n.left, n.right, n.count0, n.count1}));
    trees.push_back(json{{"nodes", nodes}, {"depth", tree.depth}});
  }
  return json{{"n_estimators", forest.params.n_estimators},
              {"max_depth", forest.params.tree.max_depth},
              {"min_samples_split", forest.params.tree.min_samples_split},
              {"min_samples_leaf", forest.params.tree.min_samples_leaf},
              {"features_per_split", forest.params.tree.features_per_split},
              {"bootstrap", forest.params.bootstrap},
              {"seed", hex64(forest.params.seed)},
              {"tree_seeds", [&] {
                 std::vector<std::string> seeds;
                 for (auto s : forest.tree_seeds) seeds.push_back(hex64(s));
                 return seeds;
               }()},
              {"feature_names", forest.feature_names},
              {"trees", trees}};
}

Forest forest_from_json(const json& j) {
  Forest forest;
  forest.params.n_estimators = j.at("n_estimators").get<int>();
  forest.params.tree.max_depth = j.at("max_depth").get<int>();
  forest.params.tree.min_samples_split = j.at("min_samples_split").get<int>();
  forest.params.tree.min_samples_leaf = j.at("min_samples_leaf").get<int>();
  forest.params.tree.features_per_split =
      j.at("features_per_split").get<int>();
  forest.params.bootstrap = j.at("bootstrap").get<bool>();
  forest.params.seed = from_hex64(j.at("seed").get<std::string>());
  for (const auto& s : j.at("tree_seeds"))
    forest.tree_seeds.push_back(from_hex64(s.get<std::string>()));
  forest.feature_names = j.at("feature_names").get<std::vector<std::string>>();
  for (const auto& tj : j.at("trees")) {
    DecisionTree tree;
    tree.depth = tj.at("depth").get<int>();
    for (const auto& nj : tj.at("nodes")) {
      TreeNode n;
      n.feature = nj.at(0).get<int>();
      n.threshold = nj.at(1).get<double>();
      n.left = nj.at(2).get<int>();
      n.right = nj.at(3).get<int>();
      n.count0 = nj.at(4).get<double>();
      n.count1 = nj.at(5).get<double>();
      tree.nodes.push_back(n);
    }
    forest.trees.push_back(std::move(tree));
  }
  return forest;
}

json svm_to_json(const SVMModel& m) {
  return json{{"support_vectors", matrix_to_json(m.support_vectors)},
              {"alpha", m.alpha},
              {"sv_labels", m.sv_labels},
              {"bias", m.bias},
              {"gamma", m.gamma},
              {"feature_names", m.feature_names},
              {"scaler_fingerprint", hex64(m.scaler_fingerprint)}};
}

SVMModel svm_from_json(const json& j) {
  SVMModel m;
  m.support_vectors = matrix_from_json(j.at("support_vectors"));
  m.alpha = j.at("alpha").get<std::vector<double>>();
  m.sv_labels = j.at("sv_labels").get<std::vector<int>>();
  m.bias = j.at("bias").get<double>();
  m.gamma = j.at("gamma").get<double>();
  m.feature_names = j.at("feature_names").get<std::vector<std::string>>();
  m.scaler_fingerprint =
      from_hex64(j.at("scaler_fingerprint").get<std::string>());
  return m;
}

json knn_to_json(const KNNModel& m) {
  return json{{"rows", matrix_to_json(m.rows)},
              {"labels", m.labels},
              {"k", m.params.k},
              {"weighting", m.params.weighting == KNNWeighting::distance
                                ? "distance"
                                : "uniform"},
              {"feature_names", m.feature_names},
              {"scaler_fingerprint", hex64(m.scaler_fingerprint)}};
}

KNNModel knn_from_json(const json& j) {
  KNNModel m;
  m.rows = matrix_from_json(j.at("rows"));
  m.labels = j.at("labels").get<std::vector<int>>();
  m.params.k = j.at("k").get<int>();
  m.params.weighting = j.at("weighting").get<std::string>() == "distance"
                           ? KNNWeighting::distance
                           : KNNWeighting::uniform;
  m.feature_names = j.at("feature_names").get<std::vector<std::string>>();
  m.scaler_fingerprint =
      from_hex64(j.at("scaler_fingerprint").get<std::string>());
  return m;
}

}  // namespace

std::string serialize_model(const ModelFile& model) {
  json payload;
  payload["kind"] = to_string(model.classifier.kind);
  switch (model.classifier.kind) {
    case ModelKind::rf:
      payload["forest"] = forest_to_json(model.classifier.forest);
      break;
    case ModelKind::svm:
      payload["svm"] = svm_to_json(model.classifier.svm);
      break;
    case ModelKind::knn:
      payload["knn"] = knn_to_json(model.classifier.knn);
      break;
    default:
      throw Error::config("config", "cannot serialize this model kind");
  }
  if (model.classifier.scaler)
    payload["scaler"] = scaler_to_json(*model.classifier.scaler);

  json doc;
  doc["format"] = "auditml-model";
  doc["format_version"] = kModelFormatVersion;
  doc["schema"] = json{{"encoder", encoder_to_json(model.encoder)},
                       {"schema_version", kSchemaVersion},
                       {"label", json{{"threshold", model.label_spec.threshold},
                                      {"positive_class",
                                       model.label_spec.positive_class_name}}}};
  doc["metadata"] =
      json{{"seed", hex64(model.seed)}, {"config_hash", hex64(model.config_hash)}};
  const std::string payload_text = payload.dump();
  doc["payload"] = payload;
  doc["payload_checksum"] = hex64(fnv1a64(payload_text));
  return doc.dump(1) + "\n";
}

ModelFile deserialize_model(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error::data("corruption",
                      std::string("model file is not valid JSON: ") + e.what());
  }
  try {
    if (doc.at("format").get<std::string>() != "auditml-model")
      throw Error::config("version", "not an auditml model file");
    const int version = doc.at("format_version").get<int>();
    if (version != kModelFormatVersion)
      throw Error::config("version",
                          "model format_version " + std::to_string(version) +
                              " is not supported (expected " +
                              std::to_string(kModelFormatVersion) + ")");
    const json& payload = doc.at("payload");
    const std::string checksum =
        doc.at("payload_checksum").get<std::string>();
    if (hex64(fnv1a64(payload.dump())) != checksum)
      throw Error::data("corruption", "model payload checksum mismatch");

    ModelFile model;
    model.classifier.kind =
        model_kind_from_string(payload.at("kind").get<std::string>());
    switch (model.classifier.kind) {
      case ModelKind::rf:
        model.classifier.forest = forest_from_json(payload.at("forest"));
        break;
      case ModelKind::svm:
        model.classifier.svm = svm_from_json(payload.at("svm"));
        break;
      case ModelKind::knn:
        model.classifier.knn = knn_from_json(payload.at("knn"));
        break;
      default:
        throw Error::config("version", "unsupported model kind in file");
    }
    if (payload.contains("scaler"))
      model.classifier.scaler = scaler_from_json(payload.at("scaler"));

    const json& schema = doc.at("schema");
    model.encoder = encoder_from_json(schema.at("encoder"));
    model.label_spec.threshold =
        schema.at("label").at("threshold").get<double>();
    model.label_spec.positive_class_name =
        schema.at("label").at("positive_class").get<std::string>();
    model.seed = from_hex64(doc.at("metadata").at("seed").get<std::string>());
    model.config_hash =
        from_hex64(doc.at("metadata").at("config_hash").get<std::string>());
    return model;
  } catch (const json::exception& e) {
    throw Error::data("corruption",
                      std::string("model file structure invalid: ") + e.what());
  }
}

void save_model(const ModelFile& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw Error::config("config", "cannot open model file for write: " + path);
  out << serialize_model(model);
}

ModelFile load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error::config("config", "cannot open model file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return deserialize_model(buf.str());
}

}  // namespace auditml
