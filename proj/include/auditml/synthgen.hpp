#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "auditml/record.hpp"

namespace auditml {

struct CorrelationTarget {
  std::string a;
  std::string b;
  double target = 0.0;
};

// Knobs for the seeded generator. The defaults reproduce the reference
// correlation structure (0.55 / 0.27 / -0.63) and a ~30% positive rate
// under the default label threshold.
struct SynthConfig {
  std::size_t n_records = 5000;
  int year_min = kYearMin;
  int year_max = kYearMax;
  std::vector<std::string> firms;       // empty -> full enumeration
  std::vector<std::string> industries;  // empty -> full enumeration
  std::vector<CorrelationTarget> target_correlations = default_targets();
  double noise_level = 0.32;  // stddev share of the risk latent that is noise
  double positive_rate_hint = 0.30;
  double missing_rate = 0.03;

  static std::vector<CorrelationTarget> default_targets();
  void validate() const;
};

// Names accepted in correlation targets. Risk_Percentage is the derived
// High_Risk_Cases / Total_Audit_Engagements column.
inline constexpr const char* kVarEngagements = "Total_Audit_Engagements";
inline constexpr const char* kVarFraud = "Fraud_Cases_Detected";
inline constexpr const char* kVarHighRisk = "High_Risk_Cases";
inline constexpr const char* kVarRiskPct = "Risk_Percentage";

// Latent-model parameters resolved by calibration against the configured
// correlation targets.
struct LatentParams {
  double a_eng = -0.65;    // engagement weight in the risk latent (negative)
  double a_cv = 0.0;       // compliance-violation weight
  double a_wl = 0.0;       // workload weight
  double a_cat = 0.0;      // industry/firm base-rate weight
  double s_noise = 0.05;   // configured noise weight
  double s_effective = 0.05;  // noise after folding unused category variance
  double r_tf = 0.28;      // latent corr between engagements and fraud
  double mu_p = 0.11;      // risk-percentage location
  double sigma_p = 0.08;   // risk-percentage scale
};

struct GenerationResult {
  std::vector<AuditRecord> records;
  // Noiseless part of each record's risk latent; the Bayes-style reference
  // for how predictable the planted signal is.
  std::vector<double> true_risk_signal;
  LatentParams latent;
};

// Deterministic for a given (config, seed) regardless of thread count:
// records are produced in fixed-size blocks with per-block derived streams.
GenerationResult generate(const SynthConfig& config, std::uint64_t seed);

struct ValidationReport {
  struct TargetRow {
    std::string a;
    std::string b;
    double target = 0.0;
    bool defined = false;  // false when a column had zero variance
    double achieved = 0.0;
    double abs_deviation = 0.0;
    bool pass = false;
  };
  std::vector<TargetRow> targets;
  double positive_rate = 0.0;  // under the default LabelSpec
  bool low_n = false;          // n < 1000: tolerance check is advisory only
  bool all_pass = false;
};

inline constexpr double kCorrelationTolerance = 0.05;

ValidationReport validate_generation(const std::vector<AuditRecord>& records,
                                     const SynthConfig& config);

// Calibration helpers, exposed for the generator's tests.
double normal_cdf(double z);
double normal_quantile(double q);
long long poisson_quantile(double u, double lambda);
LatentParams calibrate_latents(const SynthConfig& config);

}  // namespace auditml
