#include "auditml/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <mutex>

#include "auditml/csv.hpp"
#include "auditml/eval.hpp"
#include "auditml/rng.hpp"

namespace auditml {

std::vector<CorrelationTarget> SynthConfig::default_targets() {
  return {{kVarHighRisk, kVarRiskPct, 0.55},
          {kVarEngagements, kVarFraud, 0.27},
          {kVarEngagements, kVarRiskPct, -0.63}};
}

void SynthConfig::validate() const {
  if (n_records == 0)
    throw Error::config("generation", "n_records must be positive");
  if (year_min > year_max || year_min < kYearMin || year_max > kYearMax)
    throw Error::config("generation",
                        "year range must lie within [" +
                            std::to_string(kYearMin) + ", " +
                            std::to_string(kYearMax) + "]");
  for (const auto& f : firms)
    if (std::find(firm_enumeration().begin(), firm_enumeration().end(), f) ==
        firm_enumeration().end())
      throw Error::config("generation", "unknown firm '" + f + "'");
  for (const auto& i : industries)
    if (std::find(industry_enumeration().begin(), industry_enumeration().end(),
                  i) == industry_enumeration().end())
      throw Error::config("generation", "unknown industry '" + i + "'");
  for (const auto& t : target_correlations)
    if (std::abs(t.target) > 0.95)
      throw Error::config("generation",
                          "correlation target magnitude for (" + t.a + ", " +
                              t.b + ") exceeds 0.95");
  if (!(noise_level >= 0.0 && noise_level < 1.0))
    throw Error::config("generation", "noise_level must lie in [0, 1)");
  if (!(positive_rate_hint > 0.0 && positive_rate_hint < 1.0))
    throw Error::config("generation", "positive_rate_hint must lie in (0,1)");
  if (!(missing_rate >= 0.0 && missing_rate < 0.5))
    throw Error::config("generation", "missing_rate must lie in [0, 0.5)");
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

// Acklam's rational approximation with one Halley refinement step.
double normal_quantile(double q) {
  if (!(q > 0.0 && q < 1.0))
    throw Error::config("generation", "quantile argument must lie in (0,1)");
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425, phigh = 1.0 - plow;
  double x;
  if (q < plow) {
    const double u = std::sqrt(-2.0 * std::log(q));
    x = (((((c[0] * u + c[1]) * u + c[2]) * u + c[3]) * u + c[4]) * u + c[5]) /
        ((((d[0] * u + d[1]) * u + d[2]) * u + d[3]) * u + 1.0);
  } else if (q <= phigh) {
    const double u = q - 0.5, t = u * u;
    x = (((((a[0] * t + a[1]) * t + a[2]) * t + a[3]) * t + a[4]) * t + a[5]) *
        u /
        (((((b[0] * t + b[1]) * t + b[2]) * t + b[3]) * t + b[4]) * t + 1.0);
  } else {
    const double u = std::sqrt(-2.0 * std::log(1.0 - q));
    x = -(((((c[0] * u + c[1]) * u + c[2]) * u + c[3]) * u + c[4]) * u + c[5]) /
        ((((d[0] * u + d[1]) * u + d[2]) * u + d[3]) * u + 1.0);
  }
  const double e = normal_cdf(x) - q;
  const double pdf = std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
  const double u = e / pdf;
  return x - u / (1.0 + 0.5 * x * u);
}

long long poisson_quantile(double u, double lambda) {
  double pmf = std::exp(-lambda);
  double cdf = pmf;
  long long k = 0;
  const long long cap =
      static_cast<long long>(lambda + 40.0 * std::sqrt(lambda) + 30.0);
  while (cdf < u && k < cap) {
    ++k;
    pmf *= lambda / static_cast<double>(k);
    cdf += pmf;
  }
  return k;
}

namespace {

// Fixed marginal constants of the generator.
constexpr double kLogEngagementsMedian = 4.5538768916005408;  // ln 95
constexpr double kLogEngagementsSigma = 0.35;
constexpr double kFraudLambda = 3.0;
constexpr double kViolationLambda = 5.0;
constexpr double kWorkloadMean = 48.0;
constexpr double kWorkloadSigma = 12.0;
constexpr double kWorkloadMin = 20.0;
constexpr double kWorkloadMax = 80.0;
constexpr double kLogMarketValueMedian = 6.2146080984221914;  // ln 500
constexpr double kLogMarketValueSigma = 0.8;
constexpr double kLogRevenueMedian = 3.2188758248682006;  // ln 25
constexpr double kLogRevenueSigma = 0.9;
constexpr double kRiskPctMax = 0.95;
constexpr double kDefaultLabelThreshold = 0.15;

// Split of the non-noise, non-engagement risk-latent variance across the
// signal carriers: compliance violations, workload, and the sector/firm
// base-rate effects.
constexpr double kViolationShare = 0.37;
constexpr double kWorkloadShare = 0.28;
constexpr double kCategoryShare = 0.35;

// Split of the category term across the four categorical base rates.
constexpr double kIndustryWeight = 0.40;
constexpr double kFirmWeight = 0.25;
constexpr double kStatusWeight = 0.25;
constexpr double kRegionWeight = 0.10;

// Raw base-rate offsets; standardized under each marginal's pick
// distribution so every category term has unit variance.
double industry_raw_effect(const std::string& name) {
  if (name == "Finance") return 1.0;
  if (name == "Tech") return 0.2;
  if (name == "Retail") return -0.35;
  return -0.85;  // Healthcare
}

double firm_raw_effect(const std::string& name) {
  if (name == "PwC") return 0.8;
  if (name == "Deloitte") return 0.15;
  if (name == "KPMG") return -0.4;
  return -0.55;  // EY
}

const std::vector<std::pair<const char*, double>>& region_marginal() {
  static const std::vector<std::pair<const char*, double>> m = {
      {"North America", 0.55}, {"EMEA", 0.25}, {"APAC", 0.15}, {"LATAM", 0.05}};
  return m;
}

const std::vector<std::pair<const char*, double>>& status_marginal() {
  static const std::vector<std::pair<const char*, double>> m = {
      {"Stable", 0.70}, {"Growth", 0.20}, {"Distressed", 0.10}};
  return m;
}

double region_raw_effect(const std::string& name) {
  if (name == "North America") return -0.2;
  if (name == "EMEA") return 0.1;
  if (name == "APAC") return 0.35;
  return 0.8;  // LATAM
}

double status_raw_effect(const std::string& name) {
  if (name == "Distressed") return 1.5;
  if (name == "Growth") return 0.2;
  return -0.27;  // Stable
}

// Standardizes raw effects to mean 0, variance 1 under the pick
// probabilities; a degenerate marginal (single category) contributes zero.
std::vector<double> standardized_effects(const std::vector<std::string>& names,
                                         const std::vector<double>& probs,
                                         double (*raw)(const std::string&)) {
  std::vector<double> values(names.size());
  for (std::size_t i = 0; i < names.size(); ++i) values[i] = raw(names[i]);
  double mean = 0.0;
  for (std::size_t i = 0; i < names.size(); ++i) mean += probs[i] * values[i];
  double var = 0.0;
  for (std::size_t i = 0; i < names.size(); ++i)
    var += probs[i] * (values[i] - mean) * (values[i] - mean);
  if (var <= 1e-12) return std::vector<double>(names.size(), 0.0);
  for (double& v : values) v = (v - mean) / std::sqrt(var);
  return values;
}

std::vector<double> uniform_probs(std::size_t n) {
  return std::vector<double>(n, 1.0 / static_cast<double>(n));
}

// Category table shared by the pilot calibration and generation.
struct CategoryModel {
  std::vector<std::string> industries, firms, regions, statuses;
  std::vector<double> region_probs, status_probs;
  std::vector<double> e_industry, e_firm, e_region, e_status;
  double v_cat = 0.0;  // realizable share of the category variance

  std::size_t pick_weighted(Rng& rng, const std::vector<double>& probs) const {
    double u = rng.uniform01();
    for (std::size_t i = 0; i < probs.size(); ++i) {
      if (u < probs[i]) return i;
      u -= probs[i];
    }
    return probs.size() - 1;
  }
};

CategoryModel build_category_model(const SynthConfig& config) {
  CategoryModel cm;
  cm.firms = config.firms.empty() ? firm_enumeration() : config.firms;
  cm.industries =
      config.industries.empty() ? industry_enumeration() : config.industries;
  for (const auto& [name, p] : region_marginal()) {
    cm.regions.push_back(name);
    cm.region_probs.push_back(p);
  }
  for (const auto& [name, p] : status_marginal()) {
    cm.statuses.push_back(name);
    cm.status_probs.push_back(p);
  }
  cm.e_industry = standardized_effects(
      cm.industries, uniform_probs(cm.industries.size()), industry_raw_effect);
  cm.e_firm = standardized_effects(cm.firms, uniform_probs(cm.firms.size()),
                                   firm_raw_effect);
  cm.e_region =
      standardized_effects(cm.regions, cm.region_probs, region_raw_effect);
  cm.e_status =
      standardized_effects(cm.statuses, cm.status_probs, status_raw_effect);

  auto has_var = [](const std::vector<double>& e) {
    for (double v : e)
      if (v != 0.0) return 1.0;
    return 0.0;
  };
  cm.v_cat = kIndustryWeight * has_var(cm.e_industry) +
             kFirmWeight * has_var(cm.e_firm) +
             kRegionWeight * has_var(cm.e_region) +
             kStatusWeight * has_var(cm.e_status);
  return cm;
}

constexpr std::uint64_t kCalibrationSeed = 0x43414c4942ULL;
constexpr std::size_t kPilotSize = 20000;
constexpr std::size_t kGenBlockSize = 256;

struct LatentDraw {
  double g_eng, g_frd, g_cv, g_wl, g_eps;
  double e_industry = 0.0;  // standardized base-rate effects of the picks
  double e_firm = 0.0;
  double e_region = 0.0;
  double e_status = 0.0;
};

struct CoreSample {
  double engagements;  // count, >= 1
  double fraud;        // count
  double risk_pct;     // observed H / T
  double high_risk;    // count
};

// Unused category variance (degenerate marginals) folds back into the noise
// term so the risk latent keeps unit variance.
void resolve_weights(LatentParams& lp, double v_cat) {
  const double rem = 1.0 - lp.s_noise * lp.s_noise - lp.a_eng * lp.a_eng;
  if (rem < 0.0)
    throw Error::config(
        "generation",
        "infeasible correlation structure: the (Total_Audit_Engagements, "
        "Risk_Percentage) target needs |latent weight| " +
            format_double(lp.a_eng) + " but noise_level " +
            format_double(lp.s_noise) + " leaves no variance for the signal");
  lp.a_cv = std::sqrt(kViolationShare * rem);
  lp.a_wl = std::sqrt(kWorkloadShare * rem);
  lp.a_cat = std::sqrt(kCategoryShare * rem);
  lp.s_effective = std::sqrt(lp.s_noise * lp.s_noise +
                             lp.a_cat * lp.a_cat * (1.0 - v_cat));
}

double signal_part(const LatentParams& lp, const LatentDraw& d) {
  return lp.a_cv * d.g_cv + lp.a_wl * d.g_wl + lp.a_eng * d.g_eng +
         lp.a_cat * (std::sqrt(kIndustryWeight) * d.e_industry +
                     std::sqrt(kFirmWeight) * d.e_firm +
                     std::sqrt(kRegionWeight) * d.e_region +
                     std::sqrt(kStatusWeight) * d.e_status);
}

CoreSample transform_core(const LatentParams& lp, const LatentDraw& d) {
  CoreSample s;
  const double t_real =
      std::exp(kLogEngagementsMedian + kLogEngagementsSigma * d.g_eng);
  s.engagements = std::max(1.0, std::round(t_real));

  const double z_frd =
      lp.r_tf * d.g_eng + std::sqrt(1.0 - lp.r_tf * lp.r_tf) * d.g_frd;
  s.fraud =
      static_cast<double>(poisson_quantile(normal_cdf(z_frd), kFraudLambda));

  const double z_risk = signal_part(lp, d) + lp.s_effective * d.g_eps;
  const double p = std::clamp(lp.mu_p + lp.sigma_p * z_risk, 0.0, kRiskPctMax);
  s.high_risk = std::min(s.engagements, std::round(p * s.engagements));
  s.risk_pct = s.high_risk / s.engagements;
  return s;
}

double sample_pearson(const std::vector<double>& x,
                      const std::vector<double>& y) {
  const auto r = pearson(x, y);
  return r ? *r : 0.0;
}

const CorrelationTarget* find_target(const SynthConfig& config,
                                     const std::string& a,
                                     const std::string& b) {
  for (const auto& t : config.target_correlations) {
    if ((t.a == a && t.b == b) || (t.a == b && t.b == a)) return &t;
  }
  return nullptr;
}

// Monotone-increasing root find on pilot correlations; the pilot draws are
// fixed, so f is a smooth deterministic function of the parameter.
double bisect_increasing(double lo, double hi,
                         const std::function<double(double)>& f, double target,
                         const std::string& pair_name) {
  double flo = f(lo), fhi = f(hi);
  if (target < flo || target > fhi)
    throw Error::config("generation",
                        "infeasible correlation target for " + pair_name +
                            ": achievable range is [" + format_double(flo) +
                            ", " + format_double(fhi) + "]");
  for (int it = 0; it < 30; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) < target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

std::string calibration_key(const SynthConfig& config) {
  std::string key = format_double(config.noise_level) + "|" +
                    format_double(config.positive_rate_hint);
  for (const auto& t : config.target_correlations)
    key += "|" + t.a + "~" + t.b + "=" + format_double(t.target);
  for (const auto& f : config.firms) key += "|f:" + f;
  for (const auto& i : config.industries) key += "|i:" + i;
  return key;
}

}  // namespace

LatentParams calibrate_latents(const SynthConfig& config) {
  config.validate();

  // Calibration depends only on the targets, the noise level, and the rate
  // hint; memoize so repeated generation does not re-run the pilot search.
  static std::mutex cache_mutex;
  static std::map<std::string, LatentParams> cache;
  const std::string key = calibration_key(config);
  {
    std::lock_guard<std::mutex> lock(cache_mutex);
    const auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }

  const CategoryModel cm = build_category_model(config);
  const double v_cat = cm.v_cat;

  std::vector<LatentDraw> pilot(kPilotSize);
  Rng rng(kCalibrationSeed);
  for (auto& d : pilot) {
    d = {rng.normal(), rng.normal(), rng.normal(), rng.normal(), rng.normal()};
    d.e_industry = cm.e_industry[rng.below(cm.e_industry.size())];
    d.e_firm = cm.e_firm[rng.below(cm.e_firm.size())];
    d.e_region = cm.e_region[cm.pick_weighted(rng, cm.region_probs)];
    d.e_status = cm.e_status[cm.pick_weighted(rng, cm.status_probs)];
  }

  LatentParams lp;
  lp.s_noise = config.noise_level;
  const double max_a =
      std::sqrt(std::max(0.0, 1.0 - lp.s_noise * lp.s_noise)) - 1e-6;

  const auto* t_eng_risk = find_target(config, kVarEngagements, kVarRiskPct);
  const auto* t_hr_risk = find_target(config, kVarHighRisk, kVarRiskPct);
  const auto* t_eng_frd = find_target(config, kVarEngagements, kVarFraud);
  for (const auto& t : config.target_correlations) {
    const bool known = (&t == t_eng_risk) || (&t == t_hr_risk) ||
                       (&t == t_eng_frd);
    if (!known)
      throw Error::config("generation", "unsupported correlation pair (" +
                                            t.a + ", " + t.b + ")");
  }

  auto corr_of = [&](const auto& extract_pair) {
    std::vector<double> xs(pilot.size()), ys(pilot.size());
    for (std::size_t i = 0; i < pilot.size(); ++i) {
      const auto [x, y] = extract_pair(pilot[i]);
      xs[i] = x;
      ys[i] = y;
    }
    return sample_pearson(xs, ys);
  };

  // mu_p tracks sigma_p so that the positive rate stays near the hint.
  auto update_mu = [&](LatentParams& p) {
    p.mu_p = kDefaultLabelThreshold -
             normal_quantile(1.0 - config.positive_rate_hint) * p.sigma_p;
  };
  update_mu(lp);

  // Two passes settle the weak coupling between the engagement weight and
  // the risk-percentage scale.
  for (int pass = 0; pass < 2; ++pass) {
    if (t_eng_risk) {
      lp.a_eng = bisect_increasing(
          -max_a, max_a,
          [&](double a) {
            LatentParams cand = lp;
            cand.a_eng = a;
            resolve_weights(cand, v_cat);
            return corr_of([&](const LatentDraw& d) {
              const auto s = transform_core(cand, d);
              return std::pair{s.engagements, s.risk_pct};
            });
          },
          t_eng_risk->target, "(" + t_eng_risk->a + ", " + t_eng_risk->b + ")");
    }
    resolve_weights(lp, v_cat);

    if (t_hr_risk) {
      lp.sigma_p = bisect_increasing(
          0.005, 0.30,
          [&](double sp) {
            LatentParams cand = lp;
            cand.sigma_p = sp;
            update_mu(cand);
            return corr_of([&](const LatentDraw& d) {
              const auto s = transform_core(cand, d);
              return std::pair{s.high_risk, s.risk_pct};
            });
          },
          t_hr_risk->target, "(" + t_hr_risk->a + ", " + t_hr_risk->b + ")");
      update_mu(lp);
    }
  }

  if (t_eng_frd) {
    lp.r_tf = bisect_increasing(
        -0.949, 0.949,
        [&](double r) {
          LatentParams cand = lp;
          cand.r_tf = r;
          return corr_of([&](const LatentDraw& d) {
            const auto s = transform_core(cand, d);
            return std::pair{s.engagements, s.fraud};
          });
        },
        t_eng_frd->target, "(" + t_eng_frd->a + ", " + t_eng_frd->b + ")");
  }

  resolve_weights(lp, v_cat);
  {
    std::lock_guard<std::mutex> lock(cache_mutex);
    cache[key] = lp;
  }
  return lp;
}

GenerationResult generate(const SynthConfig& config, std::uint64_t seed) {
  config.validate();
  const LatentParams lp = calibrate_latents(config);

  const CategoryModel cm = build_category_model(config);

  GenerationResult result;
  result.latent = lp;
  result.records.resize(config.n_records);
  result.true_risk_signal.resize(config.n_records);

  const std::size_t n_blocks =
      (config.n_records + kGenBlockSize - 1) / kGenBlockSize;
  for (std::size_t block = 0; block < n_blocks; ++block) {
    Rng rng = Rng::derive(seed, block);
    const std::size_t begin = block * kGenBlockSize;
    const std::size_t end = std::min(config.n_records, begin + kGenBlockSize);
    for (std::size_t i = begin; i < end; ++i) {
      LatentDraw d = {rng.normal(), rng.normal(), rng.normal(),
                      rng.normal(), rng.normal()};
      const double g_mv = rng.normal();
      const double g_rev = rng.normal();
      const std::size_t firm_idx = rng.below(cm.firms.size());
      const std::size_t industry_idx = rng.below(cm.industries.size());
      const std::size_t region_idx = cm.pick_weighted(rng, cm.region_probs);
      const std::size_t status_idx = cm.pick_weighted(rng, cm.status_probs);
      d.e_firm = cm.e_firm[firm_idx];
      d.e_industry = cm.e_industry[industry_idx];
      d.e_region = cm.e_region[region_idx];
      d.e_status = cm.e_status[status_idx];
      const CoreSample core = transform_core(lp, d);

      AuditRecord rec;
      rec.year = config.year_min +
                 static_cast<long long>(rng.below(static_cast<std::uint64_t>(
                     config.year_max - config.year_min + 1)));
      rec.firm_name = cm.firms[firm_idx];
      rec.industry_affected = cm.industries[industry_idx];
      rec.total_audit_engagements = static_cast<long long>(core.engagements);
      rec.high_risk_cases = static_cast<long long>(core.high_risk);
      rec.fraud_cases_detected = static_cast<long long>(core.fraud);
      rec.compliance_violations =
          poisson_quantile(normal_cdf(d.g_cv), kViolationLambda);
      rec.employee_workload = std::clamp(
          kWorkloadMean + kWorkloadSigma * d.g_wl, kWorkloadMin, kWorkloadMax);
      rec.market_value =
          std::exp(kLogMarketValueMedian + kLogMarketValueSigma * g_mv);
      rec.total_revenue_impact =
          std::exp(kLogRevenueMedian + kLogRevenueSigma * g_rev);
      rec.ai_used_for_auditing = rng.uniform01() < 0.85;
      rec.region = cm.regions[region_idx];
      rec.financial_status = cm.statuses[status_idx];

      if (config.missing_rate > 0.0) {
        if (rng.uniform01() < config.missing_rate)
          rec.total_revenue_impact.reset();
        if (rng.uniform01() < config.missing_rate)
          rec.employee_workload.reset();
        if (rng.uniform01() < config.missing_rate) rec.market_value.reset();
      }

      validate_record(rec, i + 1);
      result.records[i] = std::move(rec);
      result.true_risk_signal[i] = signal_part(lp, d);
    }
  }
  return result;
}

ValidationReport validate_generation(const std::vector<AuditRecord>& records,
                                     const SynthConfig& config) {
  if (records.empty())
    throw Error::data("generation", "cannot validate an empty record set");

  auto column_of = [&](const std::string& name) {
    std::vector<double> col;
    col.reserve(records.size());
    for (const auto& r : records) {
      if (name == kVarEngagements)
        col.push_back(
            static_cast<double>(r.total_audit_engagements.value_or(0)));
      else if (name == kVarFraud)
        col.push_back(static_cast<double>(r.fraud_cases_detected.value_or(0)));
      else if (name == kVarHighRisk)
        col.push_back(static_cast<double>(r.high_risk_cases.value_or(0)));
      else if (name == kVarRiskPct) {
        const double t =
            static_cast<double>(r.total_audit_engagements.value_or(0));
        col.push_back(t > 0.0
                          ? static_cast<double>(r.high_risk_cases.value_or(0)) /
                                t
                          : 0.0);
      } else {
        throw Error::config("generation",
                            "unsupported correlation variable '" + name + "'");
      }
    }
    return col;
  };

  ValidationReport report;
  report.low_n = records.size() < 1000;
  bool all = true;
  for (const auto& t : config.target_correlations) {
    ValidationReport::TargetRow row;
    row.a = t.a;
    row.b = t.b;
    row.target = t.target;
    const auto r = pearson(column_of(t.a), column_of(t.b));
    row.defined = r.has_value();
    if (r) {
      row.achieved = *r;
      row.abs_deviation = std::abs(*r - t.target);
      row.pass = row.abs_deviation <= kCorrelationTolerance;
    }
    all = all && row.pass;
    report.targets.push_back(row);
  }

  std::size_t positives = 0, labelable = 0;
  for (const auto& r : records) {
    if (!r.total_audit_engagements || *r.total_audit_engagements == 0)
      continue;
    ++labelable;
    const double pct =
        static_cast<double>(r.high_risk_cases.value_or(0)) /
        static_cast<double>(*r.total_audit_engagements);
    if (pct >= kDefaultLabelThreshold) ++positives;
  }
  report.positive_rate =
      labelable ? static_cast<double>(positives) / static_cast<double>(labelable)
                : 0.0;
  report.all_pass = report.low_n ? true : all;
  return report;
}

}  // namespace auditml
