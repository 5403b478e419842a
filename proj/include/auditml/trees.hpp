#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "auditml/dataset.hpp"
#include "auditml/rng.hpp"

namespace auditml {

inline constexpr int kUnboundedDepth = -1;

struct TreeParams {
  int max_depth = 15;          // kUnboundedDepth for no limit
  int min_samples_split = 10;
  int min_samples_leaf = 5;
  int features_per_split = 0;  // 0 -> floor(sqrt(p))

  void validate(std::size_t n_features) const;
  int resolved_features_per_split(std::size_t n_features) const;
};

struct RFParams {
  int n_estimators = 200;
  TreeParams tree;
  bool bootstrap = true;
  std::uint64_t seed = 0;

  void validate(std::size_t n_features) const;
};

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double count0 = 0.0;  // training class counts reaching this node
  double count1 = 0.0;
};

struct DecisionTree {
  std::vector<TreeNode> nodes;  // node 0 is the root; empty means untrained
  int depth = 0;

  int route(std::span<const double> row) const;  // leaf node index
};

struct Forest {
  std::vector<DecisionTree> trees;
  std::vector<std::string> feature_names;
  RFParams params;
  std::vector<std::uint64_t> tree_seeds;
};

struct Prediction {
  int label = 0;
  double prob1 = 0.0;  // vote fraction for class 1
};

// 1 - sum (c_i/n)^2 over the two classes.
double gini(double count0, double count1);

struct SplitCandidate {
  int feature = 0;
  double threshold = 0.0;
  double gain = 0.0;  // parent impurity minus child-weighted impurity
};

// Exhaustive midpoint-threshold search over the candidate features.
// Returns nullopt when no split satisfies min_samples_leaf or no threshold
// separates the rows. Ties resolve to the lower feature index, then the
// lower threshold.
std::optional<SplitCandidate> best_split(
    const Matrix& features, const std::vector<int>& labels,
    std::span<const std::size_t> rows,
    std::span<const int> candidate_features, const TreeParams& params);

DecisionTree fit_tree(const Dataset& ds, const TreeParams& params, Rng& rng);

// Bootstrap-aggregated forest; per-tree seeds derive from params.seed by
// tree index, so parallel and serial construction build identical models.
Forest fit_forest(const Dataset& ds, const RFParams& params,
                  int n_threads = 1);

Prediction predict_tree(const DecisionTree& tree, std::span<const double> row);
Prediction predict_forest(const Forest& forest, std::span<const double> row);
std::vector<Prediction> predict_forest(const Forest& forest,
                                       const Matrix& rows);

// Mean decrease in impurity per feature, normalized to sum to 1.
std::vector<double> gini_importance(const Forest& forest);

}  // namespace auditml
