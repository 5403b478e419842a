#include "auditml/svm.hpp"

#include <algorithm>
#include <cmath>

#include "auditml/rng.hpp"

namespace auditml {

void SVMParams::validate() const {
  if (!(C > 0.0)) throw Error::config("parameter", "svm C must be positive");
  if (!(gamma > 0.0))
    throw Error::config("parameter", "svm gamma must be positive");
  if (!(tolerance > 0.0))
    throw Error::config("parameter", "svm tolerance must be positive");
  if (max_passes < 1)
    throw Error::config("parameter", "svm max_passes must be >= 1");
}

double rbf_kernel(std::span<const double> x, std::span<const double> z,
                  double gamma) {
  if (x.size() != z.size())
    throw Error::data("kernel", "kernel dimension mismatch: " +
                                    std::to_string(x.size()) + " vs " +
                                    std::to_string(z.size()));
  return std::exp(-gamma * squared_distance(x, z));
}

BalancedWeights balanced_weights(const std::vector<int>& labels) {
  std::size_t n1 = 0;
  for (int y : labels) n1 += static_cast<std::size_t>(y);
  const std::size_t n0 = labels.size() - n1;
  if (n0 == 0 || n1 == 0)
    throw Error::train("weighting",
                       "balanced weights need both classes present");
  const double n = static_cast<double>(labels.size());
  return {n / (2.0 * static_cast<double>(n0)),
          n / (2.0 * static_cast<double>(n1))};
}

namespace {

// Full kernel matrix when it fits; rows recomputed on demand otherwise.
constexpr std::size_t kKernelCacheLimit = 4000;

class KernelTable {
 public:
  KernelTable(const Matrix& x, double gamma)
      : x_(x), gamma_(gamma), n_(x.rows()), cached_(n_ <= kKernelCacheLimit) {
    if (cached_) {
      table_.resize(n_ * n_);
      for (std::size_t i = 0; i < n_; ++i) {
        table_[i * n_ + i] = 1.0;
        for (std::size_t j = i + 1; j < n_; ++j) {
          const double k = rbf_kernel(x_.row(i), x_.row(j), gamma_);
          table_[i * n_ + j] = k;
          table_[j * n_ + i] = k;
        }
      }
    } else {
      scratch_a_.resize(n_);
      scratch_b_.resize(n_);
    }
  }

  double at(std::size_t i, std::size_t j) const {
    if (cached_) return table_[i * n_ + j];
    return rbf_kernel(x_.row(i), x_.row(j), gamma_);
  }

  // Row view valid until the next row() call with the same slot.
  std::span<const double> row(std::size_t i, int slot) {
    if (cached_) return {table_.data() + i * n_, n_};
    auto& buf = slot == 0 ? scratch_a_ : scratch_b_;
    for (std::size_t j = 0; j < n_; ++j)
      buf[j] = rbf_kernel(x_.row(i), x_.row(j), gamma_);
    return buf;
  }

 private:
  const Matrix& x_;
  double gamma_;
  std::size_t n_;
  bool cached_;
  std::vector<double> table_;
  std::vector<double> scratch_a_, scratch_b_;
};

struct Solver {
  const Matrix& x;
  const std::vector<int>& y;      // {-1, +1}
  const std::vector<double>& cap; // per-sample C_i
  const SVMParams& params;
  KernelTable kernel;
  Rng rng;

  std::vector<double> alpha;
  std::vector<double> error;  // E_i = f(x_i) - y_i, maintained incrementally
  double b = 0.0;
  double last_objective = 0.0;

  Solver(const Matrix& x_, const std::vector<int>& y_,
         const std::vector<double>& cap_, const SVMParams& p)
      : x(x_),
        y(y_),
        cap(cap_),
        params(p),
        kernel(x_, p.gamma),
        rng(Rng::derive(p.seed, 0x534d4fULL)),
        alpha(x_.rows(), 0.0),
        error(x_.rows()) {
    for (std::size_t i = 0; i < x.rows(); ++i)
      error[i] = -static_cast<double>(y[i]);  // f == 0 initially
  }

  std::size_t n() const { return x.rows(); }

  bool non_bound(std::size_t i) const {
    return alpha[i] > 0.0 && alpha[i] < cap[i];
  }

  double dual_objective() const {
    double sum = 0.0, quad = 0.0;
    for (std::size_t i = 0; i < n(); ++i) {
      if (alpha[i] == 0.0) continue;
      sum += alpha[i];
      for (std::size_t j = 0; j < n(); ++j) {
        if (alpha[j] == 0.0) continue;
        quad += alpha[i] * alpha[j] * y[i] * y[j] * kernel.at(i, j);
      }
    }
    return sum - 0.5 * quad;
  }

  bool take_step(std::size_t i1, std::size_t i2) {
    if (i1 == i2) return false;
    const double a1 = alpha[i1], a2 = alpha[i2];
    const int y1 = y[i1], y2 = y[i2];
    const double e1 = error[i1], e2 = error[i2];
    const double s = static_cast<double>(y1 * y2);

    double lo, hi;
    if (y1 != y2) {
      lo = std::max(0.0, a2 - a1);
      hi = std::min(cap[i2], cap[i1] + a2 - a1);
    } else {
      lo = std::max(0.0, a1 + a2 - cap[i1]);
      hi = std::min(cap[i2], a1 + a2);
    }
    if (lo >= hi) return false;

    const double k11 = kernel.at(i1, i1);
    const double k12 = kernel.at(i1, i2);
    const double k22 = kernel.at(i2, i2);
    const double eta = k11 + k22 - 2.0 * k12;

    double a2_new;
    if (eta > 0.0) {
      a2_new = a2 + static_cast<double>(y2) * (e1 - e2) / eta;
      a2_new = std::clamp(a2_new, lo, hi);
    } else {
      // Objective at the segment ends (Platt's degenerate-eta case).
      const double f1 = static_cast<double>(y1) * (e1 + b) - a1 * k11 - s * a2 * k12;
      const double f2 = static_cast<double>(y2) * (e2 + b) - s * a1 * k12 - a2 * k22;
      const double l1 = a1 + s * (a2 - lo);
      const double h1 = a1 + s * (a2 - hi);
      const double lobj = l1 * f1 + lo * f2 + 0.5 * l1 * l1 * k11 +
                          0.5 * lo * lo * k22 + s * lo * l1 * k12;
      const double hobj = h1 * f1 + hi * f2 + 0.5 * h1 * h1 * k11 +
                          0.5 * hi * hi * k22 + s * hi * h1 * k12;
      if (lobj < hobj - 1e-12)
        a2_new = lo;
      else if (lobj > hobj + 1e-12)
        a2_new = hi;
      else
        return false;
    }

    if (std::abs(a2_new - a2) < 1e-12 * (a2_new + a2 + 1e-12)) return false;
    const double a1_new = a1 + s * (a2 - a2_new);

    const double d1 = static_cast<double>(y1) * (a1_new - a1);
    const double d2 = static_cast<double>(y2) * (a2_new - a2);
    const double b1 = b - e1 - d1 * k11 - d2 * k12;
    const double b2 = b - e2 - d1 * k12 - d2 * k22;
    double b_new;
    if (a1_new > 0.0 && a1_new < cap[i1])
      b_new = b1;
    else if (a2_new > 0.0 && a2_new < cap[i2])
      b_new = b2;
    else
      b_new = 0.5 * (b1 + b2);

    const auto row1 = kernel.row(i1, 0);
    const auto row2 = kernel.row(i2, 1);
    const double db = b_new - b;
    for (std::size_t i = 0; i < n(); ++i)
      error[i] += d1 * row1[i] + d2 * row2[i] + db;

    alpha[i1] = a1_new;
    alpha[i2] = a2_new;
    b = b_new;
    error[i1] = decision_error(i1);
    error[i2] = decision_error(i2);

    if (params.check_objective) {
      const double obj = dual_objective();
      if (obj < last_objective - 1e-9)
        throw Error::train("convergence",
                           "dual objective decreased across an SMO step");
      last_objective = obj;
    }
    return true;
  }

  // Exact recomputation for the two changed points keeps the incremental
  // error cache from drifting.
  double decision_error(std::size_t i) {
    double f = b;
    const auto row = kernel.row(i, 0);
    for (std::size_t j = 0; j < n(); ++j)
      if (alpha[j] > 0.0) f += alpha[j] * y[j] * row[j];
    return f - static_cast<double>(y[i]);
  }

  bool examine(std::size_t i2) {
    const double e2 = error[i2];
    const double r2 = e2 * static_cast<double>(y[i2]);
    const bool violated = (r2 < -params.tolerance && alpha[i2] < cap[i2]) ||
                          (r2 > params.tolerance && alpha[i2] > 0.0);
    if (!violated) return false;

    // Second choice: maximize |E1 - E2| over non-bound points.
    std::size_t best = n();
    double best_gap = -1.0;
    for (std::size_t i = 0; i < n(); ++i) {
      if (!non_bound(i)) continue;
      const double gap = std::abs(error[i] - e2);
      if (gap > best_gap) {
        best_gap = gap;
        best = i;
      }
    }
    if (best < n() && take_step(best, i2)) return true;

    const std::size_t start = static_cast<std::size_t>(rng.below(n()));
    for (std::size_t k = 0; k < n(); ++k) {
      const std::size_t i1 = (start + k) % n();
      if (non_bound(i1) && take_step(i1, i2)) return true;
    }
    const std::size_t start2 = static_cast<std::size_t>(rng.below(n()));
    for (std::size_t k = 0; k < n(); ++k) {
      const std::size_t i1 = (start2 + k) % n();
      if (take_step(i1, i2)) return true;
    }
    return false;
  }

  // Runs outer sweeps until a full sweep finds no KKT violator to improve
  // (converged) or max_passes is hit.
  bool converged_after_sweeps(int* sweeps_out) {
    int sweeps = 0;
    bool examine_all = true;
    while (sweeps < params.max_passes) {
      ++sweeps;
      std::size_t changed = 0;
      const bool full = examine_all;
      if (full) {
        for (std::size_t i = 0; i < n(); ++i)
          changed += static_cast<std::size_t>(examine(i));
      } else {
        for (std::size_t i = 0; i < n(); ++i)
          if (non_bound(i)) changed += static_cast<std::size_t>(examine(i));
      }
      if (full && changed == 0) {
        *sweeps_out = sweeps;
        return true;
      }
      if (full)
        examine_all = false;
      else if (changed == 0)
        examine_all = true;
    }
    *sweeps_out = sweeps;
    return false;
  }
};

double kkt_excess_one(double alpha, double cap, double margin) {
  if (alpha <= 0.0) return std::max(0.0, 1.0 - margin);
  if (alpha >= cap) return std::max(0.0, margin - 1.0);
  return std::abs(margin - 1.0);
}

}  // namespace

SVMFitResult smo_fit(const Dataset& ds, const SVMParams& params) {
  params.validate();
  if (ds.rows() == 0) throw Error::train("training", "empty training dataset");
  if (ds.single_class)
    throw Error::train("training", "SVM training requires both classes present");

  std::vector<int> y(ds.rows());
  for (std::size_t i = 0; i < ds.rows(); ++i) y[i] = ds.labels[i] ? 1 : -1;

  std::vector<double> cap(ds.rows(), params.C);
  if (params.class_weighting == ClassWeighting::balanced) {
    const auto w = balanced_weights(ds.labels);
    for (std::size_t i = 0; i < ds.rows(); ++i)
      cap[i] = params.C * (ds.labels[i] ? w.w1 : w.w0);
  }

  Solver solver(ds.features, y, cap, params);
  if (params.check_objective) solver.last_objective = 0.0;

  int sweeps = 0;
  const bool converged = solver.converged_after_sweeps(&sweeps);

  SVMFitResult result;
  result.converged = converged;
  result.sweeps = sweeps;

  SVMModel& model = result.model;
  model.gamma = params.gamma;
  model.feature_names = ds.feature_names;
  model.bias = solver.b;
  for (std::size_t i = 0; i < ds.rows(); ++i) {
    if (solver.alpha[i] <= 0.0) continue;
    model.support_vectors.append_row(ds.features.row(i));
    model.alpha.push_back(solver.alpha[i]);
    model.sv_labels.push_back(y[i]);
  }

  // KKT slack on the full training set, bound rows included.
  double worst = 0.0;
  for (std::size_t i = 0; i < ds.rows(); ++i) {
    const double f = decision_value(model, ds.features.row(i));
    worst = std::max(worst, kkt_excess_one(solver.alpha[i], cap[i],
                                           static_cast<double>(y[i]) * f));
  }
  result.max_kkt_excess = worst;
  return result;
}

double decision_value(const SVMModel& model, std::span<const double> row) {
  if (!model.support_vectors.empty() &&
      row.size() != model.support_vectors.cols())
    throw Error::data("prediction",
                      "row width " + std::to_string(row.size()) +
                          " does not match support-vector width " +
                          std::to_string(model.support_vectors.cols()));
  double f = model.bias;
  for (std::size_t i = 0; i < model.alpha.size(); ++i)
    f += model.alpha[i] * static_cast<double>(model.sv_labels[i]) *
         rbf_kernel(model.support_vectors.row(i), row, model.gamma);
  return f;
}

std::vector<SVMPrediction> decision_and_predict(const SVMModel& model,
                                                const Matrix& rows) {
  std::vector<SVMPrediction> out(rows.rows());
  for (std::size_t r = 0; r < rows.rows(); ++r) {
    const double f = decision_value(model, rows.row(r));
    out[r] = {f, f >= 0.0 ? 1 : 0};
  }
  return out;
}

double kkt_max_excess(const SVMModel& model, const Dataset& ds,
                      const SVMParams& params) {
  std::vector<double> cap(ds.rows(), params.C);
  if (params.class_weighting == ClassWeighting::balanced) {
    const auto w = balanced_weights(ds.labels);
    for (std::size_t i = 0; i < ds.rows(); ++i)
      cap[i] = params.C * (ds.labels[i] ? w.w1 : w.w0);
  }

  // Recover each training row's alpha: zero unless it matches a support
  // vector (exact row equality; support vectors are copies of training rows).
  double worst = 0.0;
  for (std::size_t i = 0; i < ds.rows(); ++i) {
    const auto row = ds.features.row(i);
    double a = 0.0;
    for (std::size_t s = 0; s < model.alpha.size(); ++s) {
      const auto sv = model.support_vectors.row(s);
      if (std::equal(row.begin(), row.end(), sv.begin(), sv.end())) {
        a = model.alpha[s];
        break;
      }
    }
    const double margin = static_cast<double>(ds.labels[i] ? 1 : -1) *
                          decision_value(model, row);
    worst = std::max(worst, kkt_excess_one(a, cap[i], margin));
  }
  return worst;
}

}  // namespace auditml
