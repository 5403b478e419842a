#include "auditml/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "auditml/config.hpp"
#include "auditml/csv.hpp"
#include "auditml/eval.hpp"
#include "auditml/model_io.hpp"
#include "auditml/synthgen.hpp"

namespace auditml::cli {

namespace {

namespace fs = std::filesystem;

std::string fixed(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

std::string read_file(const std::string& path, const char* what) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error::data("data", std::string("cannot open ") + what + ": " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Collects written outputs so every command ends with a manifest that pins
// the run's inputs, configuration, and output hashes.
class RunContext {
 public:
  RunContext(std::string command, PipelineConfig config,
             std::string config_path, int threads)
      : command_(std::move(command)),
        config_(std::move(config)),
        config_path_(std::move(config_path)),
        threads_(threads) {
    fs::create_directories(config_.out_dir);
    config_hash_ = fnv1a64(dump_config(config_));
  }

  const PipelineConfig& config() const { return config_; }
  std::uint64_t config_hash() const { return config_hash_; }
  int threads() const { return threads_; }

  std::string out_path(const std::string& name) const {
    return (fs::path(config_.out_dir) / name).string();
  }

  // Inputs are pinned by file name and content hash; full paths stay out so
  // two runs of the same pipeline in different directories match byte-wise.
  void note_input(const std::string& label, const std::string& path,
                  const std::string& content) {
    inputs_.emplace_back(label, fs::path(path).filename().string() +
                                    " fnv1a64:" + hash_hex(content));
  }

  void write_output(const std::string& name, const std::string& content) {
    const std::string path = out_path(name);
    std::ofstream out(path, std::ios::binary);
    if (!out)
      throw Error::config("config", "cannot write output file: " + path);
    out << content;
    outputs_.emplace_back(name, hash_hex(content));
  }

  void finish() {
    std::ostringstream m;
    m << "command = " << command_ << "\n";
    m << "version = " << kVersion << "\n";
    m << "config_path = "
      << (config_path_.empty() ? "<defaults>" : config_path_) << "\n";
    m << "config_hash = " << hash_hex_value(config_hash_) << "\n";
    m << "seed = " << config_.seed << "\n";
    for (const auto& [label, detail] : inputs_)
      m << "input." << label << " = " << detail << "\n";
    for (const auto& [name, hash] : outputs_)
      m << "output." << name << " = fnv1a64:" << hash << "\n";
    const std::string manifest = m.str();
    std::ofstream out(out_path("manifest_" + command_ + ".txt"),
                      std::ios::binary);
    out << manifest;
  }

 private:
  static std::string hash_hex(const std::string& content) {
    return hash_hex_value(fnv1a64(content));
  }
  static std::string hash_hex_value(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(h));
    return buf;
  }

  std::string command_;
  PipelineConfig config_;
  std::string config_path_;
  int threads_;
  std::uint64_t config_hash_ = 0;
  std::vector<std::pair<std::string, std::string>> inputs_;
  std::vector<std::pair<std::string, std::string>> outputs_;
};

// ---------------------------------------------------------------------------
// Data loading and the shared preprocessing chain

std::vector<AuditRecord> load_records(RunContext& ctx,
                                      const std::string& input_override) {
  const auto& cfg = ctx.config();
  if (!input_override.empty() || cfg.source == DataSource::csv) {
    const std::string path =
        input_override.empty() ? cfg.csv_path : input_override;
    const std::string text = read_file(path, "input CSV");
    ctx.note_input("csv", path, text);
    return parse_records(text);
  }
  return generate(cfg.gen, cfg.seed).records;
}

struct PreparedData {
  std::vector<AuditRecord> cleaned;   // imputed + clipped
  std::vector<int> labels;            // derived from the raw records
  Dataset dataset;
  FittedEncoder encoder;
  ImputeReport impute_report;
  ClipReport clip_report;
};

// Labels come from the raw records (the ground truth is not affected by
// cleaning); imputation and clipping shape the features only.
PreparedData prepare(RunContext& ctx, const std::vector<AuditRecord>& records) {
  const auto& cfg = ctx.config();
  PreparedData prep;
  prep.labels = derive_labels(records, cfg.label);
  auto imputed = impute(records, &prep.impute_report);
  prep.cleaned =
      clip_outliers(imputed, cfg.clip_q_low, cfg.clip_q_high, &prep.clip_report);
  prep.dataset =
      build_dataset(prep.cleaned, cfg.plan, prep.labels, &prep.encoder);
  return prep;
}

// ---------------------------------------------------------------------------
// Report writers

std::string cv_report_csv(const CVReport& report) {
  std::string out = "fold,f1,accuracy,recall,precision\n";
  for (std::size_t f = 0; f < report.folds.size(); ++f) {
    const auto& m = report.folds[f];
    out += std::to_string(f) + "," + fixed(m.f1) + "," + fixed(m.accuracy) +
           "," + fixed(m.recall) + "," + fixed(m.precision) + "\n";
  }
  out += "mean," + fixed(report.mean.f1) + "," + fixed(report.mean.accuracy) +
         "," + fixed(report.mean.recall) + "," + fixed(report.mean.precision) +
         "\n";
  out += "stddev," + fixed(report.stddev.f1) + "," +
         fixed(report.stddev.accuracy) + "," + fixed(report.stddev.recall) +
         "," + fixed(report.stddev.precision) + "\n";
  return out;
}

std::string cv_report_text(const CVReport& report) {
  std::ostringstream out;
  out << "Stratified " << report.k << "-fold cross-validation: "
      << report.model_name << " (seed " << report.seed << ")\n";
  out << "Positive class = high-risk (label 1); metrics are binary.\n\n";
  out << "fold    F1        accuracy  recall    precision\n";
  for (std::size_t f = 0; f < report.folds.size(); ++f) {
    const auto& m = report.folds[f];
    out << f << "       " << fixed(m.f1, 4) << "    " << fixed(m.accuracy, 4)
        << "    " << fixed(m.recall, 4) << "    " << fixed(m.precision, 4)
        << "\n";
  }
  out << "mean    " << fixed(report.mean.f1, 4) << "    "
      << fixed(report.mean.accuracy, 4) << "    "
      << fixed(report.mean.recall, 4) << "    "
      << fixed(report.mean.precision, 4) << "\n";
  out << "stddev  " << fixed(report.stddev.f1, 4) << "    "
      << fixed(report.stddev.accuracy, 4) << "    "
      << fixed(report.stddev.recall, 4) << "    "
      << fixed(report.stddev.precision, 4) << "\n";
  return out.str();
}

std::string cv_report_json_text(const CVReport& report) {
  nlohmann::json folds = nlohmann::json::array();
  for (const auto& m : report.folds)
    folds.push_back({{"f1", m.f1},
                     {"accuracy", m.accuracy},
                     {"recall", m.recall},
                     {"precision", m.precision}});
  nlohmann::json doc{
      {"model", report.model_name},
      {"k", report.k},
      {"seed", report.seed},
      {"folds", folds},
      {"mean",
       {{"f1", report.mean.f1},
        {"accuracy", report.mean.accuracy},
        {"recall", report.mean.recall},
        {"precision", report.mean.precision}}},
      {"stddev",
       {{"f1", report.stddev.f1},
        {"accuracy", report.stddev.accuracy},
        {"recall", report.stddev.recall},
        {"precision", report.stddev.precision}}}};
  return doc.dump(1) + "\n";
}

std::string comparison_csv(const ComparisonTable& table) {
  std::string out =
      "model,mean_f1,mean_accuracy,mean_recall,mean_precision,"
      "std_f1,std_accuracy,std_recall,std_precision\n";
  for (const auto& row : table.rows) {
    out += row.model_name + "," + fixed(row.mean.f1) + "," +
           fixed(row.mean.accuracy) + "," + fixed(row.mean.recall) + "," +
           fixed(row.mean.precision) + "," + fixed(row.stddev.f1) + "," +
           fixed(row.stddev.accuracy) + "," + fixed(row.stddev.recall) + "," +
           fixed(row.stddev.precision) + "\n";
  }
  return out;
}

std::string comparison_text(const ComparisonTable& table) {
  std::ostringstream out;
  out << "Model comparison (stratified " << table.rows.front().k
      << "-fold CV, ranked by mean F1; binary metrics, positive class = "
         "high-risk)\n\n";
  out << "Model            Mean F1 Score    Mean Accuracy    Mean Recall\n";
  for (const auto& row : table.rows) {
    std::string name = row.model_name;
    name.resize(16, ' ');
    out << name << " " << fixed(row.mean.f1, 4) << "           "
        << fixed(row.mean.accuracy, 4) << "           "
        << fixed(row.mean.recall, 4) << "\n";
  }
  return out.str();
}

std::string importance_csv(const std::vector<std::string>& names,
                           const std::vector<double>& importance) {
  std::vector<std::size_t> order(names.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a,
                                                   std::size_t b) {
    return importance[a] > importance[b];
  });
  std::string out = "rank,feature,importance\n";
  for (std::size_t r = 0; r < order.size(); ++r)
    out += std::to_string(r + 1) + "," + csv_escape(names[order[r]]) + "," +
           fixed(importance[order[r]], 9) + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// Subcommand bodies

int cmd_gen(RunContext& ctx) {
  const auto& cfg = ctx.config();
  const auto result = generate(cfg.gen, cfg.seed);
  ctx.write_output("synthetic.csv", write_records(result.records));

  const auto report = validate_generation(result.records, cfg.gen);
  std::ostringstream out;
  out << "records = " << result.records.size() << "\n";
  out << "low_n = " << (report.low_n ? "true" : "false") << "\n";
  out << "positive_rate = " << fixed(report.positive_rate, 4) << "\n";
  for (const auto& row : report.targets) {
    out << "corr." << row.a << "__" << row.b << ".target = "
        << fixed(row.target, 4) << "\n";
    out << "corr." << row.a << "__" << row.b << ".achieved = "
        << (row.defined ? fixed(row.achieved, 4) : "undefined") << "\n";
    out << "corr." << row.a << "__" << row.b << ".pass = "
        << (row.pass ? "true" : "false") << "\n";
  }
  out << "all_pass = " << (report.all_pass ? "true" : "false") << "\n";
  ctx.write_output("gen_validation.txt", out.str());
  ctx.finish();
  return 0;
}

int cmd_prep(RunContext& ctx, const std::string& input) {
  const auto& cfg = ctx.config();
  const auto records = load_records(ctx, input);
  const auto prep = prepare(ctx, records);

  if (cfg.window_enabled) {
    const auto windowed = windowize(prep.cleaned, cfg.window, cfg.label);
    std::string csv;
    for (std::size_t c = 0; c < windowed.dataset.feature_names.size(); ++c) {
      if (c) csv += ',';
      csv += csv_escape(windowed.dataset.feature_names[c]);
    }
    csv += ",label\n";
    for (std::size_t r = 0; r < windowed.dataset.rows(); ++r) {
      for (std::size_t c = 0; c < windowed.dataset.cols(); ++c) {
        if (c) csv += ',';
        csv += format_double(windowed.dataset.features.at(r, c));
      }
      csv += "," + std::to_string(windowed.dataset.labels[r]) + "\n";
    }
    ctx.write_output("windowized.csv", csv);
  } else {
    ctx.write_output("prep.csv", write_records(prep.cleaned));
  }

  std::ostringstream stats;
  stats << "rows = " << records.size() << "\n";
  for (const auto& e : prep.impute_report.entries)
    stats << "impute." << e.field << " = " << e.fill_value << " (filled "
          << e.filled << ")\n";
  for (const auto& e : prep.clip_report.entries)
    stats << "clip." << e.field << " = [" << format_double(e.low) << ", "
          << format_double(e.high) << "] (clipped " << e.clipped << ")\n";
  stats << "features = " << prep.dataset.cols() << "\n";
  stats << "positives = "
        << std::count(prep.labels.begin(), prep.labels.end(), 1) << "\n";
  ctx.write_output("prep_stats.txt", stats.str());
  ctx.finish();
  return 0;
}

int cmd_train(RunContext& ctx, const std::string& model_name,
              const std::string& input) {
  const auto& cfg = ctx.config();
  const ModelKind kind = model_kind_from_string(model_name);
  const auto records = load_records(ctx, input);
  const auto prep = prepare(ctx, records);
  if (prep.dataset.single_class)
    throw Error::train("training",
                       "training data contains a single class; adjust the "
                       "label threshold or the data");

  const Classifier classifier = fit_classifier(cfg.spec_for(kind),
                                               prep.dataset, cfg.seed,
                                               ctx.threads());

  ModelFile file;
  file.classifier = classifier;
  file.encoder = prep.encoder;
  file.label_spec = cfg.label;
  file.seed = cfg.seed;
  file.config_hash = ctx.config_hash();
  ctx.write_output("model_" + model_name + ".json", serialize_model(file));

  std::ostringstream report;
  report << "model = " << model_name << "\n";
  report << "rows = " << prep.dataset.rows() << "\n";
  report << "features = " << prep.dataset.cols() << "\n";
  report << "positives = "
         << std::count(prep.labels.begin(), prep.labels.end(), 1) << "\n";
  if (kind == ModelKind::rf)
    report << "trees = " << classifier.forest.trees.size() << "\n";
  else if (kind == ModelKind::svm)
    report << "support_vectors = " << classifier.svm.alpha.size() << "\n";
  else
    report << "stored_rows = " << classifier.knn.rows.rows() << "\n";
  ctx.write_output("train_report.txt", report.str());
  ctx.finish();
  return 0;
}

int cmd_predict(RunContext& ctx, const std::string& model_path,
                const std::string& input) {
  if (input.empty())
    throw Error::config("config", "predict requires --input CSV");
  const std::string model_text = read_file(model_path, "model file");
  ctx.note_input("model", model_path, model_text);
  const ModelFile model = deserialize_model(model_text);

  const std::string csv_text = read_file(input, "input CSV");
  ctx.note_input("csv", input, csv_text);
  const auto records = parse_records(csv_text);
  if (records.empty()) throw Error::data("data", "input CSV has no data rows");

  const auto imputed = impute(records);
  const Dataset ds = build_dataset_with(model.encoder, imputed, {});
  const auto scored = predict_scored(model.classifier, ds.features);

  std::string out = "row,label,score,positive_class\n";
  for (std::size_t i = 0; i < scored.size(); ++i)
    out += std::to_string(i + 1) + "," + std::to_string(scored[i].label) +
           "," + fixed(scored[i].score, 9) + "," +
           (scored[i].label
                ? model.label_spec.positive_class_name
                : "not_" + model.label_spec.positive_class_name) +
           "\n";
  ctx.write_output("predictions.csv", out);
  ctx.finish();
  return 0;
}

int cmd_cv(RunContext& ctx, const std::string& model_name,
           const std::string& input, bool grid) {
  const auto& cfg = ctx.config();
  if (cfg.folds < 2)
    throw Error::config("config", "cv requires eval.folds >= 2");
  const ModelKind kind = model_kind_from_string(model_name);
  const auto records = load_records(ctx, input);
  const auto prep = prepare(ctx, records);

  if (grid) {
    if (kind != ModelKind::svm)
      throw Error::config("config", "--grid is only available for --model svm");
    std::string csv = "C,gamma,mean_f1,mean_accuracy,mean_recall\n";
    double best_f1 = -1.0;
    std::string best_desc;
    for (double c : cfg.svm_grid_c) {
      for (double g : cfg.svm_grid_gamma) {
        ModelSpec spec = cfg.svm;
        spec.svm.C = c;
        spec.svm.gamma = g;
        spec.name = "SVM(C=" + format_double(c) + ",gamma=" +
                    format_double(g) + ")";
        const auto report =
            cross_validate(spec, prep.dataset, cfg.folds, cfg.seed,
                           ctx.threads());
        csv += format_double(c) + "," + format_double(g) + "," +
               fixed(report.mean.f1) + "," + fixed(report.mean.accuracy) +
               "," + fixed(report.mean.recall) + "\n";
        if (report.mean.f1 > best_f1) {
          best_f1 = report.mean.f1;
          best_desc = spec.name + " mean F1 " + fixed(report.mean.f1, 4);
        }
      }
    }
    csv += "# best: " + best_desc + "\n";
    ctx.write_output("svm_grid.csv", csv);
    ctx.finish();
    return 0;
  }

  const auto report = cross_validate(cfg.spec_for(kind), prep.dataset,
                                     cfg.folds, cfg.seed, ctx.threads());
  ctx.write_output("cv_" + model_name + ".csv", cv_report_csv(report));
  ctx.write_output("cv_" + model_name + ".txt", cv_report_text(report));
  ctx.write_output("cv_" + model_name + ".json", cv_report_json_text(report));
  ctx.finish();
  return 0;
}

int cmd_compare(RunContext& ctx, const std::string& input) {
  const auto& cfg = ctx.config();
  if (cfg.folds < 2)
    throw Error::config("config", "compare requires eval.folds >= 2");
  const auto records = load_records(ctx, input);
  const auto prep = prepare(ctx, records);

  const std::vector<ModelSpec> specs = {cfg.rf, cfg.svm, cfg.knn};
  const auto table =
      compare_models(specs, prep.dataset, cfg.folds, cfg.seed, ctx.threads());

  ctx.write_output("comparison.csv", comparison_csv(table));
  ctx.write_output("comparison.txt", comparison_text(table));
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : table.rows)
    rows.push_back(nlohmann::json::parse(cv_report_json_text(row)));
  ctx.write_output("comparison.json", rows.dump(1) + "\n");
  ctx.finish();
  return 0;
}

int cmd_importance(RunContext& ctx, const std::string& model_name,
                   const std::string& input) {
  const auto& cfg = ctx.config();
  const ModelKind kind = model_kind_from_string(model_name);
  const auto records = load_records(ctx, input);
  const auto prep = prepare(ctx, records);
  if (prep.dataset.single_class)
    throw Error::train("training", "importance needs both classes present");

  const Classifier classifier = fit_classifier(cfg.spec_for(kind),
                                               prep.dataset, cfg.seed,
                                               ctx.threads());

  if (kind == ModelKind::rf) {
    const auto gini_imp = gini_importance(classifier.forest);
    ctx.write_output("importance_gini.csv",
                     importance_csv(prep.dataset.feature_names, gini_imp));
  }

  const auto perm = permutation_importance(
      [&](const Matrix& rows) { return predict_labels(classifier, rows); },
      prep.dataset, cfg.permutation_repeats, cfg.seed);
  ctx.write_output("importance_permutation.csv",
                   importance_csv(prep.dataset.feature_names, perm));
  ctx.finish();
  return 0;
}

int cmd_corr(RunContext& ctx, const std::string& input) {
  const auto records_raw = load_records(ctx, input);
  const auto records = impute(records_raw);

  std::vector<std::string> names;
  std::vector<std::vector<double>> cols;
  for (const auto& f : numeric_fields()) {
    names.push_back(f.name);
    std::vector<double> col;
    col.reserve(records.size());
    for (const auto& r : records) col.push_back(f.get(r).value_or(0.0));
    cols.push_back(std::move(col));
  }
  names.push_back("Risk_Percentage");
  {
    std::vector<double> col;
    col.reserve(records.size());
    for (const auto& r : records) {
      const double t =
          static_cast<double>(r.total_audit_engagements.value_or(0));
      col.push_back(
          t > 0.0
              ? static_cast<double>(r.high_risk_cases.value_or(0)) / t
              : 0.0);
    }
    cols.push_back(std::move(col));
  }

  const auto matrix = pearson_matrix(names, cols);
  std::string csv = "variable";
  for (const auto& n : names) csv += "," + csv_escape(n);
  csv += "\n";
  for (std::size_t i = 0; i < names.size(); ++i) {
    csv += csv_escape(names[i]);
    for (std::size_t j = 0; j < names.size(); ++j)
      csv += "," + (matrix.r[i][j] ? fixed(*matrix.r[i][j], 6)
                                   : std::string("NA"));
    csv += "\n";
  }
  ctx.write_output("corr_matrix.csv", csv);
  ctx.finish();
  return 0;
}

int cmd_figures(RunContext& ctx, const std::string& input) {
  const auto records = load_records(ctx, input);
  const auto agg = figure_aggregates(records);

  std::string f1 = "firm,year,high_risk_total\n";
  for (const auto& row : agg.high_risk_by_firm_year)
    f1 += csv_escape(row.firm) + "," + std::to_string(row.year) + "," +
          std::to_string(row.high_risk_total) + "\n";
  ctx.write_output("figure1_high_risk_trend.csv", f1);

  std::string f2 = "firm,industry,revenue_impact_total,revenue_impact_stddev,records\n";
  for (const auto& row : agg.revenue_by_firm_industry)
    f2 += csv_escape(row.firm) + "," + csv_escape(row.industry) + "," +
          fixed(row.revenue_total, 6) + "," + fixed(row.revenue_stddev, 6) +
          "," + std::to_string(row.records) + "\n";
  ctx.write_output("figure2_revenue_impact.csv", f2);
  ctx.finish();
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"audit risk-identification pipeline"};
  app.require_subcommand(1);

  std::string config_path, out_dir, input, model_name = "rf", model_file;
  std::int64_t seed_override = -1;
  int threads = 0;
  bool grid = false;

  app.add_option("--config", config_path, "pipeline config file");
  app.add_option("--seed", seed_override, "seed override");
  app.add_option("--out", out_dir, "output directory override");
  app.add_option("--threads", threads,
                 "worker threads (0 = min(hardware, 4))");

  auto* gen = app.add_subcommand("gen", "generate a synthetic audit CSV");
  auto* prep = app.add_subcommand("prep", "clean and restructure a CSV");
  auto* train = app.add_subcommand("train", "fit a model and save it");
  auto* predict = app.add_subcommand("predict", "score a CSV with a saved model");
  auto* cv = app.add_subcommand("cv", "stratified K-fold cross-validation");
  auto* compare =
      app.add_subcommand("compare", "rank the three models by mean F1");
  auto* importance =
      app.add_subcommand("importance", "gini and permutation importance");
  auto* corr = app.add_subcommand("corr", "Pearson correlation matrix");
  auto* figures = app.add_subcommand("figures", "grouped aggregate reports");

  for (auto* cmd : {prep, train, cv, compare, importance, corr, figures})
    cmd->add_option("--input", input, "input CSV (overrides config source)");
  predict->add_option("--input", input, "CSV to score")->required();
  for (auto* cmd : {train, cv, importance})
    cmd->add_option("--model", model_name, "rf | svm | knn");
  predict->add_option("--model-file", model_file, "saved model")->required();
  cv->add_flag("--grid", grid, "sweep the (C, gamma) grid (svm only)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    PipelineConfig config =
        config_path.empty() ? PipelineConfig{} : load_config(config_path);
    if (seed_override >= 0)
      config.seed = static_cast<std::uint64_t>(seed_override);
    if (!out_dir.empty()) config.out_dir = out_dir;
    if (threads <= 0)
      threads = std::min(4u, std::max(1u, std::thread::hardware_concurrency()));

    const std::string command = app.get_subcommands().front()->get_name();
    RunContext ctx(command, std::move(config), config_path, threads);

    if (gen->parsed()) return cmd_gen(ctx);
    if (prep->parsed()) return cmd_prep(ctx, input);
    if (train->parsed()) return cmd_train(ctx, model_name, input);
    if (predict->parsed()) return cmd_predict(ctx, model_file, input);
    if (cv->parsed()) return cmd_cv(ctx, model_name, input, grid);
    if (compare->parsed()) return cmd_compare(ctx, input);
    if (importance->parsed()) return cmd_importance(ctx, model_name, input);
    if (corr->parsed()) return cmd_corr(ctx, input);
    if (figures->parsed()) return cmd_figures(ctx, input);
    return 2;
  } catch (const Error& e) {
    std::cerr << "error[" << e.category() << "]: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error[internal]: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace auditml::cli
