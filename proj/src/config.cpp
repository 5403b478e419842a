#include "auditml/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "auditml/csv.hpp"

namespace auditml {

ModelSpec& PipelineConfig::spec_for(ModelKind kind) {
  switch (kind) {
    case ModelKind::rf: return rf;
    case ModelKind::svm: return svm;
    case ModelKind::knn: return knn;
    default: throw Error::config("config", "no spec for model kind");
  }
}

const ModelSpec& PipelineConfig::spec_for(ModelKind kind) const {
  return const_cast<PipelineConfig*>(this)->spec_for(kind);
}

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw Error::config("config",
                      "line " + std::to_string(line) + ": " + what);
}

double parse_double(const std::string& v, std::size_t line,
                    const std::string& key) {
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size())
    fail(line, "key '" + key + "': expected a number, got '" + v + "'");
  return x;
}

long long parse_int(const std::string& v, std::size_t line,
                    const std::string& key) {
  long long x = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), x);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size())
    fail(line, "key '" + key + "': expected an integer, got '" + v + "'");
  return x;
}

bool parse_bool(const std::string& v, std::size_t line,
                const std::string& key) {
  if (v == "true" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "no" || v == "0") return false;
  fail(line, "key '" + key + "': expected true/false, got '" + v + "'");
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(v);
  while (std::getline(in, cur, ',')) {
    cur = trim(cur);
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

std::vector<double> parse_double_list(const std::string& v, std::size_t line,
                                      const std::string& key) {
  std::vector<double> out;
  for (const auto& item : split_list(v)) {
    if (item == "inf")
      out.push_back(std::numeric_limits<double>::infinity());
    else if (item == "-inf")
      out.push_back(-std::numeric_limits<double>::infinity());
    else
      out.push_back(parse_double(item, line, key));
  }
  return out;
}

void set_correlation(SynthConfig& gen, const std::string& a,
                     const std::string& b, double value) {
  for (auto& t : gen.target_correlations) {
    if ((t.a == a && t.b == b) || (t.a == b && t.b == a)) {
      t.target = value;
      return;
    }
  }
  gen.target_correlations.push_back({a, b, value});
}

struct KeyHandler {
  PipelineConfig& cfg;
  std::size_t line = 0;
  std::string key, value;

  bool handle() {
    if (key == "data.source") {
      if (value == "generator")
        cfg.source = DataSource::generator;
      else if (value == "csv")
        cfg.source = DataSource::csv;
      else
        fail(line, "data.source must be 'generator' or 'csv'");
      return true;
    }
    if (key == "data.csv_path") return cfg.csv_path = value, true;
    if (key == "label.threshold")
      return cfg.label.threshold = parse_double(value, line, key), true;
    if (key == "label.positive_class")
      return cfg.label.positive_class_name = value, true;

    if (key == "gen.n_records")
      return cfg.gen.n_records =
                 static_cast<std::size_t>(parse_int(value, line, key)),
             true;
    if (key == "gen.year_min")
      return cfg.gen.year_min = static_cast<int>(parse_int(value, line, key)),
             true;
    if (key == "gen.year_max")
      return cfg.gen.year_max = static_cast<int>(parse_int(value, line, key)),
             true;
    if (key == "gen.firms") return cfg.gen.firms = split_list(value), true;
    if (key == "gen.industries")
      return cfg.gen.industries = split_list(value), true;
    if (key == "gen.noise_level")
      return cfg.gen.noise_level = parse_double(value, line, key), true;
    if (key == "gen.positive_rate_hint")
      return cfg.gen.positive_rate_hint = parse_double(value, line, key), true;
    if (key == "gen.missing_rate")
      return cfg.gen.missing_rate = parse_double(value, line, key), true;
    if (key == "gen.corr_high_risk_vs_risk_pct")
      return set_correlation(cfg.gen, kVarHighRisk, kVarRiskPct,
                             parse_double(value, line, key)),
             true;
    if (key == "gen.corr_engagements_vs_fraud")
      return set_correlation(cfg.gen, kVarEngagements, kVarFraud,
                             parse_double(value, line, key)),
             true;
    if (key == "gen.corr_engagements_vs_risk_pct")
      return set_correlation(cfg.gen, kVarEngagements, kVarRiskPct,
                             parse_double(value, line, key)),
             true;

    if (key == "prep.clip_low")
      return cfg.clip_q_low = parse_double(value, line, key), true;
    if (key == "prep.clip_high")
      return cfg.clip_q_high = parse_double(value, line, key), true;
    if (key == "prep.derived_features")
      return cfg.plan.include_derived = parse_bool(value, line, key), true;
    if (key == "prep.window.enabled")
      return cfg.window_enabled = parse_bool(value, line, key), true;
    if (key == "prep.window.length")
      return cfg.window.window_length =
                 static_cast<int>(parse_int(value, line, key)),
             true;
    if (key == "prep.window.stride")
      return cfg.window.stride = static_cast<int>(parse_int(value, line, key)),
             true;
    if (key == "prep.window.group_by")
      return cfg.window.group_by = value, true;
    if (key.rfind("prep.bin.", 0) == 0) {
      const std::string field = key.substr(9);
      BinningRule rule;
      rule.field = field;
      if (value.rfind("q:", 0) == 0)
        rule.quantile_bins =
            static_cast<int>(parse_int(value.substr(2), line, key));
      else
        rule.edges = parse_double_list(value, line, key);
      std::erase_if(cfg.plan.binning, [&](const BinningRule& r) {
        return r.field == field;
      });
      cfg.plan.binning.push_back(rule);
      return true;
    }

    if (key == "rf.n_estimators")
      return cfg.rf.rf.n_estimators =
                 static_cast<int>(parse_int(value, line, key)),
             true;
    if (key == "rf.max_depth") {
      if (value == "unbounded")
        cfg.rf.rf.tree.max_depth = kUnboundedDepth;
      else
        cfg.rf.rf.tree.max_depth =
            static_cast<int>(parse_int(value, line, key));
      return true;
    }
    if (key == "rf.min_samples_split")
      return cfg.rf.rf.tree.min_samples_split =
                 static_cast<int>(parse_int(value, line, key)),
             true;
    if (key == "rf.min_samples_leaf")
      return cfg.rf.rf.tree.min_samples_leaf =
                 static_cast<int>(parse_int(value, line, key)),
             true;
    if (key == "rf.features_per_split") {
      if (value == "sqrt")
        cfg.rf.rf.tree.features_per_split = 0;
      else
        cfg.rf.rf.tree.features_per_split =
            static_cast<int>(parse_int(value, line, key));
      return true;
    }
    if (key == "rf.bootstrap")
      return cfg.rf.rf.bootstrap = parse_bool(value, line, key), true;
    if (key == "rf.smote")
      return cfg.rf.smote_enabled = parse_bool(value, line, key), true;

    if (key == "svm.C")
      return cfg.svm.svm.C = parse_double(value, line, key), true;
    if (key == "svm.gamma")
      return cfg.svm.svm.gamma = parse_double(value, line, key), true;
    if (key == "svm.tolerance")
      return cfg.svm.svm.tolerance = parse_double(value, line, key), true;
    if (key == "svm.max_passes")
      return cfg.svm.svm.max_passes =
                 static_cast<int>(parse_int(value, line, key)),
             true;
    if (key == "svm.class_weighting") {
      if (value == "balanced")
        cfg.svm.svm.class_weighting = ClassWeighting::balanced;
      else if (value == "none")
        cfg.svm.svm.class_weighting = ClassWeighting::none;
      else
        fail(line, "svm.class_weighting must be 'balanced' or 'none'");
      return true;
    }
    if (key == "svm.smote")
      return cfg.svm.smote_enabled = parse_bool(value, line, key), true;
    if (key == "svm.grid_c")
      return cfg.svm_grid_c = parse_double_list(value, line, key), true;
    if (key == "svm.grid_gamma")
      return cfg.svm_grid_gamma = parse_double_list(value, line, key), true;

    if (key == "knn.k")
      return cfg.knn.knn.k = static_cast<int>(parse_int(value, line, key)),
             true;
    if (key == "knn.weighting") {
      if (value == "distance")
        cfg.knn.knn.weighting = KNNWeighting::distance;
      else if (value == "uniform")
        cfg.knn.knn.weighting = KNNWeighting::uniform;
      else
        fail(line, "knn.weighting must be 'distance' or 'uniform'");
      return true;
    }
    if (key == "knn.smote")
      return cfg.knn.smote_enabled = parse_bool(value, line, key), true;

    if (key == "smote.k") {
      const int k = static_cast<int>(parse_int(value, line, key));
      cfg.rf.smote.k = cfg.svm.smote.k = cfg.knn.smote.k = k;
      return true;
    }
    if (key == "smote.target_ratio") {
      const double r = parse_double(value, line, key);
      cfg.rf.smote.target_ratio = cfg.svm.smote.target_ratio =
          cfg.knn.smote.target_ratio = r;
      return true;
    }

    if (key == "eval.folds")
      return cfg.folds = static_cast<int>(parse_int(value, line, key)), true;
    if (key == "eval.seed")
      return cfg.seed = static_cast<std::uint64_t>(parse_int(value, line, key)),
             true;
    if (key == "eval.permutation_repeats")
      return cfg.permutation_repeats =
                 static_cast<int>(parse_int(value, line, key)),
             true;
    if (key == "output.dir") return cfg.out_dir = value, true;

    return false;
  }
};

}  // namespace

PipelineConfig parse_config(const std::string& text) {
  PipelineConfig cfg;
  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  std::vector<std::string> unknown;

  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      fail(line_no, "expected key = value, got '" + trim(raw) + "'");
    KeyHandler handler{cfg, line_no, trim(line.substr(0, eq)),
                       trim(line.substr(eq + 1))};
    if (handler.key.empty()) fail(line_no, "empty key");
    if (!handler.handle())
      unknown.push_back(handler.key + " (line " + std::to_string(line_no) +
                        ")");
  }

  if (!unknown.empty()) {
    std::string msg = "unknown config keys: ";
    for (std::size_t i = 0; i < unknown.size(); ++i) {
      if (i) msg += ", ";
      msg += unknown[i];
    }
    throw Error::config("config", msg);
  }

  cfg.label.validate();
  cfg.plan.validate();
  if (cfg.source == DataSource::csv) {
    if (cfg.csv_path.empty())
      throw Error::config("config", "data.source=csv requires data.csv_path");
    if (!std::filesystem::exists(cfg.csv_path))
      throw Error::config("config",
                          "data.csv_path does not exist: " + cfg.csv_path);
  }
  if (cfg.folds < 1) throw Error::config("config", "eval.folds must be >= 1");
  if (!(cfg.clip_q_low >= 0.0 && cfg.clip_q_low < cfg.clip_q_high &&
        cfg.clip_q_high <= 1.0))
    throw Error::config("config", "prep.clip bounds must satisfy 0 <= low < high <= 1");
  return cfg;
}

PipelineConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw Error::config("config", "cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

// Semantic configuration only: run-location fields (output.dir, the
// concrete csv path) stay out so the config hash is stable across
// otherwise-identical runs; input content is hashed separately in the
// manifest.
std::string dump_config(const PipelineConfig& cfg) {
  std::ostringstream out;
  auto put = [&](const std::string& key, const std::string& value) {
    out << key << " = " << value << "\n";
  };
  auto fmt = [](double v) { return format_double(v); };

  put("data.source", cfg.source == DataSource::csv ? "csv" : "generator");
  put("label.threshold", fmt(cfg.label.threshold));
  put("label.positive_class", cfg.label.positive_class_name);
  put("gen.n_records", std::to_string(cfg.gen.n_records));
  put("gen.year_min", std::to_string(cfg.gen.year_min));
  put("gen.year_max", std::to_string(cfg.gen.year_max));
  for (const auto& t : cfg.gen.target_correlations) {
    if (t.a == kVarHighRisk)
      put("gen.corr_high_risk_vs_risk_pct", fmt(t.target));
    else if (t.b == kVarFraud)
      put("gen.corr_engagements_vs_fraud", fmt(t.target));
    else
      put("gen.corr_engagements_vs_risk_pct", fmt(t.target));
  }
  put("gen.noise_level", fmt(cfg.gen.noise_level));
  put("gen.positive_rate_hint", fmt(cfg.gen.positive_rate_hint));
  put("gen.missing_rate", fmt(cfg.gen.missing_rate));
  put("prep.clip_low", fmt(cfg.clip_q_low));
  put("prep.clip_high", fmt(cfg.clip_q_high));
  put("prep.derived_features", cfg.plan.include_derived ? "true" : "false");
  put("prep.window.enabled", cfg.window_enabled ? "true" : "false");
  put("prep.window.length", std::to_string(cfg.window.window_length));
  put("prep.window.stride", std::to_string(cfg.window.stride));
  put("prep.window.group_by", cfg.window.group_by);
  put("rf.n_estimators", std::to_string(cfg.rf.rf.n_estimators));
  put("rf.max_depth", cfg.rf.rf.tree.max_depth == kUnboundedDepth
                          ? "unbounded"
                          : std::to_string(cfg.rf.rf.tree.max_depth));
  put("rf.min_samples_split", std::to_string(cfg.rf.rf.tree.min_samples_split));
  put("rf.min_samples_leaf", std::to_string(cfg.rf.rf.tree.min_samples_leaf));
  put("rf.features_per_split",
      cfg.rf.rf.tree.features_per_split == 0
          ? "sqrt"
          : std::to_string(cfg.rf.rf.tree.features_per_split));
  put("rf.bootstrap", cfg.rf.rf.bootstrap ? "true" : "false");
  put("rf.smote", cfg.rf.smote_enabled ? "true" : "false");
  put("svm.C", fmt(cfg.svm.svm.C));
  put("svm.gamma", fmt(cfg.svm.svm.gamma));
  put("svm.tolerance", fmt(cfg.svm.svm.tolerance));
  put("svm.max_passes", std::to_string(cfg.svm.svm.max_passes));
  put("svm.class_weighting",
      cfg.svm.svm.class_weighting == ClassWeighting::balanced ? "balanced"
                                                              : "none");
  put("svm.smote", cfg.svm.smote_enabled ? "true" : "false");
  put("knn.k", std::to_string(cfg.knn.knn.k));
  put("knn.weighting",
      cfg.knn.knn.weighting == KNNWeighting::distance ? "distance" : "uniform");
  put("knn.smote", cfg.knn.smote_enabled ? "true" : "false");
  put("smote.k", std::to_string(cfg.knn.smote.k));
  put("smote.target_ratio", fmt(cfg.knn.smote.target_ratio));
  put("eval.folds", std::to_string(cfg.folds));
  put("eval.seed", std::to_string(cfg.seed));
  put("eval.permutation_repeats", std::to_string(cfg.permutation_repeats));
  return out.str();
}

}  // namespace auditml
