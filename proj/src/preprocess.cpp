#include "auditml/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "auditml/csv.hpp"
#include "auditml/rng.hpp"

namespace auditml {

namespace {

const NumericField* find_numeric_field(const std::string& name) {
  for (const auto& f : numeric_fields())
    if (name == f.name) return &f;
  return nullptr;
}

const CategoricalField* find_categorical_field(const std::string& name) {
  for (const auto& f : categorical_fields())
    if (name == f.name) return &f;
  return nullptr;
}

double median_of(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

}  // namespace

// ---------------------------------------------------------------------------
// impute

std::vector<AuditRecord> impute(const std::vector<AuditRecord>& records,
                                ImputeReport* report) {
  std::vector<AuditRecord> out = records;

  for (const auto& f : numeric_fields()) {
    std::vector<double> present;
    std::size_t missing = 0;
    for (const auto& r : records) {
      if (auto v = f.get(r))
        present.push_back(*v);
      else
        ++missing;
    }
    if (missing == 0) continue;
    if (present.empty())
      throw Error::data("imputation",
                        std::string("field ") + f.name +
                            " is missing in every record; cannot impute");
    double fill = median_of(present);
    if (f.integral) fill = static_cast<double>(std::llround(fill));
    for (auto& r : out)
      if (!f.get(r)) f.set(r, fill);
    if (report)
      report->entries.push_back({f.name, format_double(fill), missing});
  }

  for (const auto& f : categorical_fields()) {
    std::map<std::string, std::size_t> counts;
    std::size_t missing = 0;
    for (const auto& r : records) {
      if (auto v = f.get(r))
        ++counts[*v];
      else
        ++missing;
    }
    if (missing == 0) continue;
    if (counts.empty())
      throw Error::data("imputation",
                        std::string("field ") + f.name +
                            " is missing in every record; cannot impute");
    // std::map iterates keys in order, so equal counts resolve to the
    // lexicographically smaller value.
    std::string mode;
    std::size_t best = 0;
    for (const auto& [value, count] : counts)
      if (count > best) {
        best = count;
        mode = value;
      }
    for (auto& r : out)
      if (!f.get(r)) f.set(r, mode);
    if (report) report->entries.push_back({f.name, mode, missing});
  }

  {
    std::size_t yes = 0, no = 0, missing = 0;
    for (const auto& r : records) {
      if (!r.ai_used_for_auditing)
        ++missing;
      else if (*r.ai_used_for_auditing)
        ++yes;
      else
        ++no;
    }
    if (missing > 0) {
      if (yes == 0 && no == 0)
        throw Error::data("imputation",
                          "field AI_Used_for_Auditing is missing in every "
                          "record; cannot impute");
      const bool mode = yes > no;  // tie -> No
      for (auto& r : out)
        if (!r.ai_used_for_auditing) r.ai_used_for_auditing = mode;
      if (report)
        report->entries.push_back(
            {"AI_Used_for_Auditing", mode ? "Yes" : "No", missing});
    }
  }

  return out;
}

// ---------------------------------------------------------------------------
// clip_outliers

double empirical_quantile(const std::vector<double>& sorted, double q) {
  const std::size_t n = sorted.size();
  if (n == 0) return std::numeric_limits<double>::quiet_NaN();
  const double h = q * static_cast<double>(n) - 0.5;
  if (h <= 0.0) return sorted.front();
  if (h >= static_cast<double>(n - 1)) return sorted.back();
  const std::size_t lo = static_cast<std::size_t>(h);
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

std::vector<AuditRecord> clip_outliers(const std::vector<AuditRecord>& records,
                                       double q_low, double q_high,
                                       ClipReport* report) {
  if (!(q_low >= 0.0 && q_low < q_high && q_high <= 1.0))
    throw Error::config("plan", "clip quantiles must satisfy 0 <= low < high <= 1");

  std::vector<AuditRecord> out = records;
  for (const auto& f : numeric_fields()) {
    if (std::string(f.name) == "Year") continue;
    std::vector<double> present;
    for (const auto& r : records)
      if (auto v = f.get(r)) present.push_back(*v);
    if (present.size() < 2) continue;
    std::sort(present.begin(), present.end());
    const double lo = empirical_quantile(present, q_low);
    const double hi = empirical_quantile(present, q_high);

    std::size_t clipped = 0;
    for (auto& r : out) {
      auto v = f.get(r);
      if (!v) continue;
      double nv = *v;
      if (nv < lo)
        nv = f.integral ? std::ceil(lo) : lo;
      else if (nv > hi)
        nv = f.integral ? std::floor(hi) : hi;
      else
        continue;
      f.set(r, nv);
      ++clipped;
    }
    if (report) report->entries.push_back({f.name, lo, hi, clipped});
  }
  return out;
}

// ---------------------------------------------------------------------------
// derive_features

DerivedFeatures derive_features(const std::vector<AuditRecord>& records) {
  DerivedFeatures out;
  out.names = {"Historical_Violation_Ratio", "Audit_Frequency_Change",
               "Fraud_Rate"};
  out.columns = Matrix(records.size(), out.names.size(), 0.0);

  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < records.size(); ++i)
    groups[records[i].firm_name.value_or("")].push_back(i);

  for (auto& [firm, idx] : groups) {
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      const long long ya = records[a].year.value_or(0);
      const long long yb = records[b].year.value_or(0);
      if (ya != yb) return ya < yb;
      return a < b;
    });

    double cum_violations = 0.0, cum_engagements = 0.0;
    double prev_year_eng_sum = 0.0;
    std::size_t prev_year_eng_n = 0;
    std::optional<long long> prev_year;

    std::size_t pos = 0;
    while (pos < idx.size()) {
      const long long year = records[idx[pos]].year.value_or(0);
      std::size_t end = pos;
      while (end < idx.size() && records[idx[end]].year.value_or(0) == year)
        ++end;

      const bool has_prev = prev_year.has_value() && prev_year_eng_n > 0;
      const double prev_mean_eng =
          has_prev ? prev_year_eng_sum / static_cast<double>(prev_year_eng_n)
                   : 0.0;

      double year_eng_sum = 0.0;
      std::size_t year_eng_n = 0;
      for (std::size_t p = pos; p < end; ++p) {
        const auto& r = records[idx[p]];
        double hist_ratio = 0.0;
        if (cum_engagements > 0.0)
          hist_ratio = cum_violations / cum_engagements;
        else if (cum_violations > 0.0)
          ++out.warnings;

        double freq_change = 0.0;
        if (has_prev && r.total_audit_engagements)
          freq_change = static_cast<double>(*r.total_audit_engagements) -
                        prev_mean_eng;

        double fraud_rate = 0.0;
        if (r.total_audit_engagements && *r.total_audit_engagements > 0) {
          fraud_rate = static_cast<double>(r.fraud_cases_detected.value_or(0)) /
                       static_cast<double>(*r.total_audit_engagements);
        } else if (r.fraud_cases_detected.value_or(0) > 0) {
          ++out.warnings;
        }

        out.columns.at(idx[p], 0) = hist_ratio;
        out.columns.at(idx[p], 1) = freq_change;
        out.columns.at(idx[p], 2) = fraud_rate;

        if (r.total_audit_engagements) {
          year_eng_sum += static_cast<double>(*r.total_audit_engagements);
          ++year_eng_n;
        }
      }

      for (std::size_t p = pos; p < end; ++p) {
        const auto& r = records[idx[p]];
        cum_violations +=
            static_cast<double>(r.compliance_violations.value_or(0));
        cum_engagements +=
            static_cast<double>(r.total_audit_engagements.value_or(0));
      }
      prev_year = year;
      prev_year_eng_sum = year_eng_sum;
      prev_year_eng_n = year_eng_n;
      pos = end;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Encoding

// Year stays out of the model features: it indexes the reporting period
// (grouping, windows, trend reports) rather than describing the engagement.
EncodingPlan EncodingPlan::defaults() {
  EncodingPlan plan;
  plan.numeric = {"Total_Audit_Engagements",
                  "Compliance_Violations",
                  "Fraud_Cases_Detected",
                  "Total_Revenue_Impact",
                  "Employee_Workload",
                  "Market_Value"};
  plan.booleans = {"AI_Used_for_Auditing"};
  plan.one_hot = {"Firm_Name", "Industry_Affected", "Region",
                  "Financial_Status"};
  plan.include_derived = true;
  return plan;
}

void EncodingPlan::validate() const {
  for (const auto& name : numeric)
    if (!find_numeric_field(name))
      throw Error::config("plan", "unknown numeric field '" + name + "'");
  for (const auto& name : one_hot)
    if (!find_categorical_field(name))
      throw Error::config("plan", "unknown categorical field '" + name + "'");
  for (const auto& name : booleans)
    if (name != "AI_Used_for_Auditing")
      throw Error::config("plan", "unknown boolean field '" + name + "'");
  for (const auto& rule : binning) {
    if (!find_numeric_field(rule.field))
      throw Error::config("plan", "unknown binned field '" + rule.field + "'");
    if (std::find(numeric.begin(), numeric.end(), rule.field) == numeric.end())
      throw Error::config("plan", "binned field '" + rule.field +
                                      "' is not in the numeric plan");
    if (rule.quantile_bins == 0) {
      if (rule.edges.size() < 2)
        throw Error::config("plan", "binning for '" + rule.field +
                                        "' needs at least two edges");
      for (std::size_t i = 1; i < rule.edges.size(); ++i)
        if (!(rule.edges[i] > rule.edges[i - 1]))
          throw Error::config("plan", "binning edges for '" + rule.field +
                                          "' must be strictly increasing");
    } else if (rule.quantile_bins < 2) {
      throw Error::config("plan", "quantile binning for '" + rule.field +
                                      "' needs at least 2 bins");
    }
  }
}

FittedEncoder fit_encoder(const std::vector<AuditRecord>& records,
                          const EncodingPlan& plan) {
  plan.validate();
  FittedEncoder enc;
  enc.plan = plan;

  for (const auto& name : plan.one_hot) {
    const auto* field = find_categorical_field(name);
    std::set<std::string> observed;
    if (!field->open_vocabulary) {
      const auto& fixed = (name == "Firm_Name") ? firm_enumeration()
                                                : industry_enumeration();
      observed.insert(fixed.begin(), fixed.end());
    } else {
      for (const auto& r : records)
        if (auto v = field->get(r)) observed.insert(*v);
    }
    enc.categories[name] =
        std::vector<std::string>(observed.begin(), observed.end());
  }

  for (const auto& rule : plan.binning) {
    if (rule.quantile_bins > 0) {
      const auto* field = find_numeric_field(rule.field);
      std::vector<double> present;
      for (const auto& r : records)
        if (auto v = field->get(r)) present.push_back(*v);
      if (present.empty())
        throw Error::data("encoding", "cannot fit quantile bins for '" +
                                          rule.field + "': no values");
      std::sort(present.begin(), present.end());
      std::vector<double> edges;
      edges.push_back(-std::numeric_limits<double>::infinity());
      for (int i = 1; i < rule.quantile_bins; ++i) {
        const double q = static_cast<double>(i) / rule.quantile_bins;
        const double e = empirical_quantile(present, q);
        if (edges.size() < 2 || e > edges.back()) edges.push_back(e);
      }
      edges.push_back(std::numeric_limits<double>::infinity());
      enc.bin_edges[rule.field] = edges;
    } else {
      enc.bin_edges[rule.field] = rule.edges;
    }
  }
  return enc;
}

std::vector<std::string> FittedEncoder::feature_names(
    const std::vector<std::string>& derived_names) const {
  std::vector<std::string> names;
  for (const auto& n : plan.numeric)
    names.push_back(bin_edges.count(n) ? n + "_bin" : n);
  for (const auto& n : plan.booleans) names.push_back(n);
  for (const auto& n : derived_names) names.push_back(n);
  for (const auto& field : plan.one_hot) {
    for (const auto& cat : categories.at(field))
      names.push_back(field + "=" + cat);
    if (find_categorical_field(field)->open_vocabulary)
      names.push_back(field + "=__other__");
  }
  return names;
}

namespace {

int bin_index(const std::vector<double>& edges, double x) {
  int count = 0;
  for (double e : edges)
    if (e <= x) ++count;
  return std::clamp(count - 1, 0, static_cast<int>(edges.size()) - 2);
}

}  // namespace

Matrix encode_records(const FittedEncoder& encoder,
                      const std::vector<AuditRecord>& records,
                      const DerivedFeatures& derived) {
  const auto names = encoder.feature_names(derived.names);
  Matrix m(records.size(), names.size());

  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    std::size_t c = 0;

    for (const auto& n : encoder.plan.numeric) {
      const auto* field = find_numeric_field(n);
      const auto v = field->get(r);
      if (!v)
        throw Error::data("encoding", "missing value for " + n + " at row " +
                                          std::to_string(i + 1) +
                                          " (impute first)");
      auto it = encoder.bin_edges.find(n);
      m.at(i, c++) = (it != encoder.bin_edges.end())
                         ? static_cast<double>(bin_index(it->second, *v))
                         : *v;
    }

    for (const auto& n : encoder.plan.booleans) {
      (void)n;
      if (!r.ai_used_for_auditing)
        throw Error::data("encoding",
                          "missing value for AI_Used_for_Auditing at row " +
                              std::to_string(i + 1) + " (impute first)");
      m.at(i, c++) = *r.ai_used_for_auditing ? 1.0 : 0.0;
    }

    for (std::size_t d = 0; d < derived.names.size(); ++d)
      m.at(i, c++) = derived.columns.at(i, d);

    for (const auto& field_name : encoder.plan.one_hot) {
      const auto* field = find_categorical_field(field_name);
      const auto v = field->get(r);
      if (!v)
        throw Error::data("encoding", "missing value for " + field_name +
                                          " at row " + std::to_string(i + 1) +
                                          " (impute first)");
      const auto& cats = encoder.categories.at(field_name);
      const auto it = std::find(cats.begin(), cats.end(), *v);
      const std::size_t width = cats.size() + (field->open_vocabulary ? 1 : 0);
      if (it == cats.end()) {
        if (!field->open_vocabulary)
          throw Error::data("encoding", "unseen category '" + *v + "' for " +
                                            field_name + " at row " +
                                            std::to_string(i + 1));
        m.at(i, c + width - 1) = 1.0;
      } else {
        m.at(i, c + static_cast<std::size_t>(it - cats.begin())) = 1.0;
      }
      c += width;
    }
  }
  return m;
}

namespace {

Dataset assemble(const FittedEncoder& encoder,
                 const std::vector<AuditRecord>& records,
                 const std::vector<int>& labels) {
  if (records.empty())
    throw Error::data("construction", "empty dataset: no records");
  DerivedFeatures derived;
  if (encoder.plan.include_derived)
    derived = derive_features(records);
  else
    derived.columns = Matrix(records.size(), 0);

  Matrix features = encode_records(encoder, records, derived);
  std::vector<int> final_labels =
      labels.empty() ? std::vector<int>(records.size(), 0) : labels;
  if (final_labels.size() != records.size())
    throw Error::data("construction", "labels not aligned with records");

  std::vector<std::string> group_keys;
  group_keys.reserve(records.size());
  for (const auto& r : records)
    group_keys.push_back(r.firm_name.value_or(""));

  return make_dataset(std::move(features), encoder.feature_names(derived.names),
                      std::move(final_labels), std::move(group_keys));
}

}  // namespace

Dataset build_dataset(const std::vector<AuditRecord>& records,
                      const EncodingPlan& plan, const std::vector<int>& labels,
                      FittedEncoder* fitted_out) {
  FittedEncoder enc = fit_encoder(records, plan);
  if (fitted_out) *fitted_out = enc;
  return assemble(enc, records, labels);
}

Dataset build_dataset_with(const FittedEncoder& encoder,
                           const std::vector<AuditRecord>& records,
                           const std::vector<int>& labels) {
  return assemble(encoder, records, labels);
}

// ---------------------------------------------------------------------------
// Scaling

std::string to_string(ScalerKind k) {
  return k == ScalerKind::standard_scale ? "standard_scale" : "min_max_scale";
}

ScalerKind scaler_kind_from_string(const std::string& s) {
  if (s == "standard_scale") return ScalerKind::standard_scale;
  if (s == "min_max_scale") return ScalerKind::min_max_scale;
  throw Error::config("config", "unknown scaler kind '" + s + "'");
}

std::uint64_t FittedTransform::fingerprint() const {
  std::string repr = to_string(kind);
  for (const auto& n : feature_names) repr += "|" + n;
  std::uint64_t h = fnv1a64(repr);
  if (!stat_a.empty())
    h = fnv1a64(stat_a.data(), stat_a.size() * sizeof(double), h);
  if (!stat_b.empty())
    h = fnv1a64(stat_b.data(), stat_b.size() * sizeof(double), h);
  return h;
}

FittedTransform fit_scaler(const Dataset& ds, ScalerKind kind) {
  if (ds.rows() == 0) throw Error::data("transform", "cannot fit scaler on empty dataset");
  FittedTransform t;
  t.kind = kind;
  t.feature_names = ds.feature_names;
  t.fitted_on = dataset_fingerprint(ds);
  const std::size_t n = ds.rows(), p = ds.cols();
  t.stat_a.resize(p);
  t.stat_b.resize(p);
  for (std::size_t c = 0; c < p; ++c) {
    if (kind == ScalerKind::standard_scale) {
      double mean = 0.0;
      for (std::size_t r = 0; r < n; ++r) mean += ds.features.at(r, c);
      mean /= static_cast<double>(n);
      double var = 0.0;
      for (std::size_t r = 0; r < n; ++r) {
        const double d = ds.features.at(r, c) - mean;
        var += d * d;
      }
      t.stat_a[c] = mean;
      t.stat_b[c] = std::sqrt(var / static_cast<double>(n));
    } else {
      double lo = ds.features.at(0, c), hi = lo;
      for (std::size_t r = 1; r < n; ++r) {
        lo = std::min(lo, ds.features.at(r, c));
        hi = std::max(hi, ds.features.at(r, c));
      }
      t.stat_a[c] = lo;
      t.stat_b[c] = hi;
    }
  }
  return t;
}

namespace {

void check_schema(const FittedTransform& t,
                  const std::vector<std::string>& names) {
  if (names == t.feature_names) return;
  std::string diff;
  const std::size_t n = std::max(names.size(), t.feature_names.size());
  for (std::size_t i = 0; i < n; ++i) {
    const std::string got = i < names.size() ? names[i] : "<none>";
    const std::string want =
        i < t.feature_names.size() ? t.feature_names[i] : "<none>";
    if (got != want) {
      if (!diff.empty()) diff += ", ";
      diff += want + " != " + got;
    }
  }
  throw Error::data("transform", "scaler schema mismatch: " + diff);
}

double scale_one(const FittedTransform& t, std::size_t c, double x) {
  if (t.kind == ScalerKind::standard_scale) {
    const double sd = t.stat_b[c];
    return sd > 0.0 ? (x - t.stat_a[c]) / sd : 0.0;
  }
  const double range = t.stat_b[c] - t.stat_a[c];
  return range > 0.0 ? (x - t.stat_a[c]) / range : 0.0;
}

}  // namespace

Matrix apply_scaler_rows(const FittedTransform& t, const Matrix& rows) {
  if (rows.cols() != t.stat_a.size())
    throw Error::data("transform", "scaler width mismatch");
  Matrix out(rows.rows(), rows.cols());
  for (std::size_t r = 0; r < rows.rows(); ++r)
    for (std::size_t c = 0; c < rows.cols(); ++c)
      out.at(r, c) = scale_one(t, c, rows.at(r, c));
  return out;
}

Dataset apply_scaler(const FittedTransform& t, const Dataset& ds) {
  check_schema(t, ds.feature_names);
  Dataset out = ds;
  out.features = apply_scaler_rows(t, ds.features);
  return out;
}

// ---------------------------------------------------------------------------
// windowize

void WindowSpec::validate() const {
  if (window_length < 2)
    throw Error::config("plan", "window_length must be >= 2");
  if (stride < 1) throw Error::config("plan", "stride must be >= 1");
  if (!find_categorical_field(group_by))
    throw Error::config("plan", "unknown window group field '" + group_by + "'");
}

WindowizeResult windowize(const std::vector<AuditRecord>& records,
                          const WindowSpec& spec,
                          const LabelSpec& label_spec) {
  spec.validate();
  label_spec.validate();
  const auto* group_field = find_categorical_field(spec.group_by);

  // Numeric fields carried through windows (Year stays structural).
  std::vector<const NumericField*> fields;
  for (const auto& f : numeric_fields())
    if (std::string(f.name) != "Year") fields.push_back(&f);

  // (group, year) -> per-field mean of present values.
  struct YearAgg {
    std::vector<double> sums;
    std::vector<std::size_t> counts;
  };
  std::map<std::string, std::map<long long, YearAgg>> groups;
  for (const auto& r : records) {
    if (!r.year) continue;
    auto& agg = groups[group_field->get(r).value_or("")][*r.year];
    if (agg.sums.empty()) {
      agg.sums.assign(fields.size(), 0.0);
      agg.counts.assign(fields.size(), 0);
    }
    for (std::size_t f = 0; f < fields.size(); ++f) {
      if (auto v = fields[f]->get(r)) {
        agg.sums[f] += *v;
        ++agg.counts[f];
      }
    }
  }

  std::vector<std::string> names;
  const int w = spec.window_length;
  for (const auto* f : fields) {
    names.push_back(f->name);
    for (int lag = 1; lag < w; ++lag)
      names.push_back(std::string(f->name) + "_lag" + std::to_string(lag));
    for (int lag = 1; lag < w; ++lag)
      names.push_back(std::string(f->name) + "_delta" + std::to_string(lag));
  }

  Matrix features(0, names.size());
  std::vector<int> labels;
  std::vector<std::string> group_keys;
  std::size_t short_runs = 0;

  const std::size_t eng_idx = [&] {
    for (std::size_t f = 0; f < fields.size(); ++f)
      if (std::string(fields[f]->name) == "Total_Audit_Engagements") return f;
    return std::size_t{0};
  }();
  const std::size_t hrc_idx = [&] {
    for (std::size_t f = 0; f < fields.size(); ++f)
      if (std::string(fields[f]->name) == "High_Risk_Cases") return f;
    return std::size_t{0};
  }();

  for (const auto& [group, years] : groups) {
    // Means per year, in ascending year order.
    std::vector<long long> ys;
    std::vector<std::vector<double>> means;
    for (const auto& [year, agg] : years) {
      ys.push_back(year);
      std::vector<double> m(fields.size(),
                            std::numeric_limits<double>::quiet_NaN());
      for (std::size_t f = 0; f < fields.size(); ++f)
        if (agg.counts[f] > 0)
          m[f] = agg.sums[f] / static_cast<double>(agg.counts[f]);
      means.push_back(std::move(m));
    }

    // Split into runs of consecutive years.
    std::size_t start = 0;
    while (start < ys.size()) {
      std::size_t end = start + 1;
      while (end < ys.size() && ys[end] == ys[end - 1] + 1) ++end;
      const std::size_t run_len = end - start;
      if (run_len < static_cast<std::size_t>(w)) {
        ++short_runs;
      } else {
        for (std::size_t s = start;
             s + static_cast<std::size_t>(w) <= end;
             s += static_cast<std::size_t>(spec.stride)) {
          const std::size_t cur = s + static_cast<std::size_t>(w) - 1;
          std::vector<double> row;
          row.reserve(names.size());
          for (std::size_t f = 0; f < fields.size(); ++f) {
            row.push_back(means[cur][f]);
            for (int lag = 1; lag < w; ++lag)
              row.push_back(means[cur - static_cast<std::size_t>(lag)][f]);
            for (int lag = 1; lag < w; ++lag)
              row.push_back(means[cur - static_cast<std::size_t>(lag) + 1][f] -
                            means[cur - static_cast<std::size_t>(lag)][f]);
          }
          features.append_row(row);

          const double eng = means[cur][eng_idx];
          const double hrc = means[cur][hrc_idx];
          if (!(eng > 0.0) || std::isnan(hrc))
            throw Error::data("labeling",
                              "group '" + group + "', year " +
                                  std::to_string(ys[cur]) +
                                  ": engagements missing or zero");
          labels.push_back(hrc / eng >= label_spec.threshold ? 1 : 0);
          group_keys.push_back(group);
        }
      }
      start = end;
    }
  }

  if (features.rows() == 0)
    throw Error::data("construction",
                      "windowize produced no samples (all runs shorter than "
                      "the window)");

  WindowizeResult result;
  result.dataset = make_dataset(std::move(features), names, std::move(labels),
                                std::move(group_keys));
  result.short_runs = short_runs;
  return result;
}

// ---------------------------------------------------------------------------
// SMOTE

Dataset smote(const Dataset& ds, const SmoteParams& params,
              std::uint64_t seed) {
  if (!(params.target_ratio > 0.0 && params.target_ratio <= 1.0))
    throw Error::config("parameter", "smote target_ratio must lie in (0, 1]");
  if (params.k < 1) throw Error::config("parameter", "smote k must be >= 1");

  std::size_t n1 = 0;
  for (int y : ds.labels) n1 += static_cast<std::size_t>(y);
  const std::size_t n0 = ds.rows() - n1;
  const int minority_label = n1 <= n0 ? 1 : 0;
  const std::size_t minority = std::min(n0, n1);
  const std::size_t majority = std::max(n0, n1);

  const auto needed_d =
      std::ceil(params.target_ratio * static_cast<double>(majority)) -
      static_cast<double>(minority);
  if (needed_d <= 0.0) return ds;
  const std::size_t needed = static_cast<std::size_t>(needed_d);

  if (minority < 2)
    throw Error::train("resampling",
                       "SMOTE needs at least 2 minority samples, got " +
                           std::to_string(minority));
  if (static_cast<std::size_t>(params.k) > minority - 1)
    throw Error::config("parameter",
                        "smote k=" + std::to_string(params.k) +
                            " exceeds minority count - 1 = " +
                            std::to_string(minority - 1));

  std::vector<std::size_t> min_idx;
  for (std::size_t i = 0; i < ds.rows(); ++i)
    if (ds.labels[i] == minority_label) min_idx.push_back(i);

  // k nearest minority neighbors per minority row; ties by lower row index.
  const std::size_t k = static_cast<std::size_t>(params.k);
  std::vector<std::vector<std::size_t>> neighbors(min_idx.size());
  for (std::size_t a = 0; a < min_idx.size(); ++a) {
    std::vector<std::pair<double, std::size_t>> dists;
    dists.reserve(min_idx.size() - 1);
    for (std::size_t b = 0; b < min_idx.size(); ++b) {
      if (a == b) continue;
      dists.emplace_back(squared_distance(ds.features.row(min_idx[a]),
                                          ds.features.row(min_idx[b])),
                         min_idx[b]);
    }
    std::sort(dists.begin(), dists.end());
    neighbors[a].reserve(k);
    for (std::size_t j = 0; j < k; ++j) neighbors[a].push_back(dists[j].second);
  }

  Dataset out = ds;
  if (out.synthetic.empty()) out.synthetic.assign(ds.rows(), 0);
  Rng rng = Rng::derive(seed, 0x534d4f5445ULL);  // "SMOTE" stream tag

  for (std::size_t s = 0; s < needed; ++s) {
    const std::size_t a = s % min_idx.size();
    const std::size_t base = min_idx[a];
    const std::size_t nn = neighbors[a][rng.below(k)];
    const double u = rng.uniform01();

    std::vector<double> row(ds.cols());
    const auto x = ds.features.row(base);
    const auto z = ds.features.row(nn);
    for (std::size_t c = 0; c < ds.cols(); ++c)
      row[c] = x[c] + u * (z[c] - x[c]);

    out.features.append_row(row);
    out.labels.push_back(minority_label);
    out.group_keys.push_back(ds.group_keys[base]);
    out.synthetic.push_back(1);
  }
  out.single_class = false;
  return out;
}

}  // namespace auditml
