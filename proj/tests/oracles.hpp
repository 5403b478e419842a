#pragma once

// Independent oracles used by the unit and acceptance suites. These stay
// deliberately naive  - plain counting, exhaustive search, direct formula
// evaluation - and never call the implementation paths they check.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace oracle {

struct Counts {
  long long tp = 0, fp = 0, fn = 0, tn = 0;
};

inline Counts count_confusion(const std::vector<int>& truth,
                              const std::vector<int>& pred) {
  Counts c;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] == 1 && pred[i] == 1) ++c.tp;
    if (truth[i] == 0 && pred[i] == 1) ++c.fp;
    if (truth[i] == 1 && pred[i] == 0) ++c.fn;
    if (truth[i] == 0 && pred[i] == 0) ++c.tn;
  }
  return c;
}

inline double safe_div(double a, double b) { return b == 0.0 ? 0.0 : a / b; }

inline double accuracy_of(const Counts& c) {
  return safe_div(static_cast<double>(c.tp + c.tn),
                  static_cast<double>(c.tp + c.fp + c.fn + c.tn));
}
inline double precision_of(const Counts& c) {
  return safe_div(static_cast<double>(c.tp), static_cast<double>(c.tp + c.fp));
}
inline double recall_of(const Counts& c) {
  return safe_div(static_cast<double>(c.tp), static_cast<double>(c.tp + c.fn));
}
inline double f1_of(const Counts& c) {
  const double p = precision_of(c), r = recall_of(c);
  return safe_div(2.0 * p * r, p + r);
}

// Quantile with midpoint positions (i + 0.5)/n, linearly interpolated.
inline double quantile_midpoint(std::vector<double> values, double q) {
  std::sort(values.begin(), values.end());
  const double h = q * static_cast<double>(values.size()) - 0.5;
  if (h <= 0.0) return values.front();
  if (h >= static_cast<double>(values.size() - 1)) return values.back();
  const std::size_t lo = static_cast<std::size_t>(h);
  return values[lo] + (h - static_cast<double>(lo)) * (values[lo + 1] - values[lo]);
}

inline double euclidean(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

struct NeighborRow {
  std::size_t index;
  double distance;
};

// Exhaustive nearest-neighbor scan; ties by lower index.
inline std::vector<NeighborRow> exhaustive_knn(
    const std::vector<std::vector<double>>& rows, std::span<const double> query,
    std::size_t k) {
  std::vector<NeighborRow> all;
  all.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    all.push_back({i, euclidean(rows[i], query)});
  std::stable_sort(all.begin(), all.end(),
                   [](const NeighborRow& a, const NeighborRow& b) {
                     if (a.distance != b.distance) return a.distance < b.distance;
                     return a.index < b.index;
                   });
  all.resize(k);
  return all;
}

// Whether p lies on the closed segment [a, b] within tolerance.
inline bool on_segment(std::span<const double> p, std::span<const double> a,
                       std::span<const double> b, double tol = 1e-9) {
  // p = a + u (b - a) for a single u shared by every coordinate.
  double u = -1.0;
  for (std::size_t c = 0; c < p.size(); ++c) {
    const double den = b[c] - a[c];
    if (std::abs(den) > tol) {
      u = (p[c] - a[c]) / den;
      break;
    }
  }
  if (u == -1.0) {  // degenerate segment: a == b
    for (std::size_t c = 0; c < p.size(); ++c)
      if (std::abs(p[c] - a[c]) > tol) return false;
    return true;
  }
  if (u < -tol || u > 1.0 + tol) return false;
  for (std::size_t c = 0; c < p.size(); ++c)
    if (std::abs(p[c] - (a[c] + u * (b[c] - a[c]))) > tol) return false;
  return true;
}

// Best-F1 threshold rule on a scalar score: predict positive iff
// score >= t, t swept over every observed score.
inline double best_threshold_f1(const std::vector<double>& scores,
                                const std::vector<int>& labels) {
  std::vector<double> candidates = scores;
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()),
                   candidates.end());
  double best = 0.0;
  for (double t : candidates) {
    Counts c;
    for (std::size_t i = 0; i < scores.size(); ++i) {
      const int pred = scores[i] >= t ? 1 : 0;
      if (labels[i] == 1 && pred == 1) ++c.tp;
      if (labels[i] == 0 && pred == 1) ++c.fp;
      if (labels[i] == 1 && pred == 0) ++c.fn;
      if (labels[i] == 0 && pred == 0) ++c.tn;
    }
    best = std::max(best, f1_of(c));
  }
  return best;
}

}  // namespace oracle
