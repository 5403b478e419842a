#include "auditml/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <thread>

#include "auditml/rng.hpp"

namespace auditml {

ConfusionMatrix confusion_from(const std::vector<int>& truth,
                               const std::vector<int>& predicted) {
  if (truth.size() != predicted.size())
    throw Error::data("metrics", "truth/prediction length mismatch");
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] == 1)
      (predicted[i] == 1 ? cm.tp : cm.fn) += 1;
    else
      (predicted[i] == 1 ? cm.fp : cm.tn) += 1;
  }
  return cm;
}

MetricSet metrics(const ConfusionMatrix& cm) {
  const long long total = cm.total();
  if (total <= 0)
    throw Error::data("metrics", "metrics undefined for an empty matrix");
  MetricSet m;
  m.accuracy =
      static_cast<double>(cm.tp + cm.tn) / static_cast<double>(total);
  m.precision = (cm.tp + cm.fp) > 0 ? static_cast<double>(cm.tp) /
                                          static_cast<double>(cm.tp + cm.fp)
                                    : 0.0;
  m.recall = (cm.tp + cm.fn) > 0 ? static_cast<double>(cm.tp) /
                                       static_cast<double>(cm.tp + cm.fn)
                                 : 0.0;
  m.f1 = (m.precision + m.recall) > 0.0
             ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
             : 0.0;
  return m;
}

std::vector<std::vector<std::size_t>> stratified_folds(
    const std::vector<int>& labels, int k, std::uint64_t seed) {
  if (k < 1) throw Error::config("parameter", "fold count must be >= 1");

  std::vector<std::size_t> class_idx[2];
  for (std::size_t i = 0; i < labels.size(); ++i)
    class_idx[labels[i] ? 1 : 0].push_back(i);

  // A class may miss at most one fold: a nonempty class needs K-1 samples.
  for (int c = 0; c < 2; ++c) {
    if (!class_idx[c].empty() &&
        class_idx[c].size() + 1 < static_cast<std::size_t>(k))
      throw Error::train("stratification",
                         "class " + std::to_string(c) + " has only " +
                             std::to_string(class_idx[c].size()) +
                             " samples for " + std::to_string(k) + " folds");
  }

  // Shuffle within class, then deal round-robin; the dealing position
  // continues across classes so fold sizes stay within one of n/k.
  std::vector<std::vector<std::size_t>> folds(static_cast<std::size_t>(k));
  std::size_t position = 0;
  for (int c = 0; c < 2; ++c) {
    Rng rng = Rng::derive(seed, static_cast<std::uint64_t>(c));
    rng.shuffle(class_idx[c]);
    for (std::size_t i = 0; i < class_idx[c].size(); ++i)
      folds[position++ % static_cast<std::size_t>(k)].push_back(
          class_idx[c][i]);
  }
  for (auto& fold : folds) std::sort(fold.begin(), fold.end());
  return folds;
}

namespace {

MetricSet evaluate_fold(const ModelSpec& spec, const Dataset& ds,
                        const std::vector<std::vector<std::size_t>>& folds,
                        std::size_t fold, std::uint64_t seed, int n_threads) {
  std::vector<std::size_t> train_idx;
  for (std::size_t f = 0; f < folds.size(); ++f)
    if (f != fold)
      train_idx.insert(train_idx.end(), folds[f].begin(), folds[f].end());
  std::sort(train_idx.begin(), train_idx.end());

  const Dataset train = ds.take_rows(train_idx);
  const Dataset test = ds.take_rows(folds[fold]);

  const std::uint64_t fold_seed = Rng::mix(seed, fold);
  const Classifier model = fit_classifier(spec, train, fold_seed, n_threads);
  const auto predicted = predict_labels(model, test.features);
  return metrics(confusion_from(test.labels, predicted));
}

MetricSet fold_mean(const std::vector<MetricSet>& folds) {
  MetricSet m;
  for (const auto& f : folds) {
    m.accuracy += f.accuracy;
    m.precision += f.precision;
    m.recall += f.recall;
    m.f1 += f.f1;
  }
  const double k = static_cast<double>(folds.size());
  m.accuracy /= k;
  m.precision /= k;
  m.recall /= k;
  m.f1 /= k;
  return m;
}

MetricSet fold_stddev(const std::vector<MetricSet>& folds,
                      const MetricSet& mean) {
  MetricSet v;
  for (const auto& f : folds) {
    v.accuracy += (f.accuracy - mean.accuracy) * (f.accuracy - mean.accuracy);
    v.precision +=
        (f.precision - mean.precision) * (f.precision - mean.precision);
    v.recall += (f.recall - mean.recall) * (f.recall - mean.recall);
    v.f1 += (f.f1 - mean.f1) * (f.f1 - mean.f1);
  }
  const double k = static_cast<double>(folds.size());
  v.accuracy = std::sqrt(v.accuracy / k);
  v.precision = std::sqrt(v.precision / k);
  v.recall = std::sqrt(v.recall / k);
  v.f1 = std::sqrt(v.f1 / k);
  return v;
}

}  // namespace

CVReport cross_validate(const ModelSpec& spec, const Dataset& ds, int k,
                        std::uint64_t seed, int n_threads) {
  const auto folds = stratified_folds(ds.labels, k, seed);

  CVReport report;
  report.model_name = spec.name;
  report.k = k;
  report.seed = seed;
  report.folds.resize(folds.size());
  report.fold_seconds.resize(folds.size());

  const int fold_workers =
      std::max(1, std::min<int>(n_threads, static_cast<int>(folds.size())));
  const int inner_threads = std::max(1, n_threads / fold_workers);

  std::vector<std::string> fold_errors(folds.size());
  auto run_fold = [&](std::size_t f) {
    const auto start = std::chrono::steady_clock::now();
    try {
      report.folds[f] =
          evaluate_fold(spec, ds, folds, f, seed, inner_threads);
    } catch (const Error& e) {
      fold_errors[f] = e.what();
    }
    report.fold_seconds[f] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
  };

  if (fold_workers == 1) {
    for (std::size_t f = 0; f < folds.size(); ++f) run_fold(f);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < fold_workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t f = static_cast<std::size_t>(w); f < folds.size();
             f += static_cast<std::size_t>(fold_workers))
          run_fold(f);
      });
    }
    for (auto& th : pool) th.join();
  }

  for (std::size_t f = 0; f < folds.size(); ++f)
    if (!fold_errors[f].empty())
      throw Error::train("training",
                         "fold " + std::to_string(f) + ": " + fold_errors[f]);

  report.mean = fold_mean(report.folds);
  report.stddev = fold_stddev(report.folds, report.mean);
  return report;
}

ComparisonTable compare_models(const std::vector<ModelSpec>& specs,
                               const Dataset& ds, int k, std::uint64_t seed,
                               int n_threads) {
  if (specs.empty())
    throw Error::config("config", "compare_models needs at least one spec");
  ComparisonTable table;
  for (const auto& spec : specs)
    table.rows.push_back(cross_validate(spec, ds, k, seed, n_threads));
  std::stable_sort(table.rows.begin(), table.rows.end(),
                   [](const CVReport& a, const CVReport& b) {
                     if (a.mean.f1 != b.mean.f1) return a.mean.f1 > b.mean.f1;
                     return a.model_name < b.model_name;
                   });
  return table;
}

std::vector<double> permutation_importance(
    const std::function<std::vector<int>(const Matrix&)>& predict,
    const Dataset& ds, int repeats, std::uint64_t seed) {
  if (repeats < 1)
    throw Error::config("parameter",
                        "permutation importance repeats must be >= 1");
  if (ds.single_class)
    throw Error::data("importance",
                      "permutation importance needs both classes present");

  const double baseline =
      metrics(confusion_from(ds.labels, predict(ds.features))).f1;

  std::vector<double> importance(ds.cols(), 0.0);
  for (std::size_t c = 0; c < ds.cols(); ++c) {
    double drop_sum = 0.0;
    for (int rep = 0; rep < repeats; ++rep) {
      Rng rng = Rng::derive(seed, c * static_cast<std::size_t>(repeats) +
                                      static_cast<std::size_t>(rep));
      std::vector<double> column = ds.features.column(c);
      rng.shuffle(column);
      Matrix shuffled = ds.features;
      shuffled.set_column(c, column);
      drop_sum +=
          baseline - metrics(confusion_from(ds.labels, predict(shuffled))).f1;
    }
    importance[c] = drop_sum / static_cast<double>(repeats);
  }
  return importance;
}

std::optional<double> pearson(const std::vector<double>& x,
                              const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) return std::nullopt;
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx <= 0.0 || syy <= 0.0) return std::nullopt;
  return sxy / std::sqrt(sxx * syy);
}

CorrelationMatrix pearson_matrix(const std::vector<std::string>& names,
                                 const std::vector<std::vector<double>>& cols) {
  if (names.size() != cols.size())
    throw Error::data("metrics", "column/name count mismatch");
  CorrelationMatrix out;
  out.names = names;
  const std::size_t p = cols.size();
  out.r.assign(p, std::vector<std::optional<double>>(p));
  for (std::size_t i = 0; i < p; ++i) {
    out.r[i][i] = 1.0;
    for (std::size_t j = i + 1; j < p; ++j) {
      const auto r = pearson(cols[i], cols[j]);
      out.r[i][j] = r;
      out.r[j][i] = r;
    }
  }
  return out;
}

FigureAggregates figure_aggregates(const std::vector<AuditRecord>& records) {
  std::map<std::pair<std::string, long long>, long long> firm_year;
  std::map<std::pair<std::string, std::string>, std::vector<double>>
      firm_industry;

  for (const auto& r : records) {
    if (r.firm_name && r.year && r.high_risk_cases)
      firm_year[{*r.firm_name, *r.year}] += *r.high_risk_cases;
    if (r.firm_name && r.industry_affected && r.total_revenue_impact)
      firm_industry[{*r.firm_name, *r.industry_affected}].push_back(
          *r.total_revenue_impact);
  }

  FigureAggregates out;
  for (const auto& [key, total] : firm_year)
    out.high_risk_by_firm_year.push_back({key.first, key.second, total});
  for (const auto& [key, values] : firm_industry) {
    double sum = 0.0;
    for (double v : values) sum += v;
    const double mean = sum / static_cast<double>(values.size());
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    out.revenue_by_firm_industry.push_back(
        {key.first, key.second, sum,
         std::sqrt(var / static_cast<double>(values.size())), values.size()});
  }
  return out;
}

}  // namespace auditml
