#include "auditml/trees.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace auditml {

void TreeParams::validate(std::size_t n_features) const {
  if (max_depth != kUnboundedDepth && max_depth < 1)
    throw Error::config("parameter", "max_depth must be >= 1 or unbounded");
  if (min_samples_split < 2)
    throw Error::config("parameter", "min_samples_split must be >= 2");
  if (min_samples_leaf < 1)
    throw Error::config("parameter", "min_samples_leaf must be >= 1");
  if (features_per_split < 0 ||
      static_cast<std::size_t>(features_per_split) > n_features)
    throw Error::config("parameter",
                        "features_per_split must lie in [1, n_features]");
}

int TreeParams::resolved_features_per_split(std::size_t n_features) const {
  if (features_per_split > 0) return features_per_split;
  const int m = static_cast<int>(
      std::floor(std::sqrt(static_cast<double>(n_features))));
  return std::max(1, m);
}

void RFParams::validate(std::size_t n_features) const {
  if (n_estimators < 1)
    throw Error::config("parameter", "n_estimators must be >= 1");
  tree.validate(n_features);
}

double gini(double count0, double count1) {
  const double n = count0 + count1;
  if (!(n > 0.0))
    throw Error::data("impurity", "gini undefined for all-zero class counts");
  const double p0 = count0 / n, p1 = count1 / n;
  return 1.0 - (p0 * p0 + p1 * p1);
}

std::optional<SplitCandidate> best_split(
    const Matrix& features, const std::vector<int>& labels,
    std::span<const std::size_t> rows,
    std::span<const int> candidate_features, const TreeParams& params) {
  const std::size_t n = rows.size();
  if (n < static_cast<std::size_t>(params.min_samples_split))
    return std::nullopt;

  double c0 = 0.0, c1 = 0.0;
  for (std::size_t r : rows) (labels[r] ? c1 : c0) += 1.0;
  if (c0 == 0.0 || c1 == 0.0) return std::nullopt;
  const double parent = gini(c0, c1);
  const double total = static_cast<double>(n);

  std::optional<SplitCandidate> best;
  std::vector<std::pair<double, int>> vals(n);

  for (int feature : candidate_features) {
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t r = rows[i];
      vals[i] = {features.at(r, static_cast<std::size_t>(feature)), labels[r]};
    }
    std::sort(vals.begin(), vals.end());

    double l0 = 0.0, l1 = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      (vals[i].second ? l1 : l0) += 1.0;
      if (vals[i].first == vals[i + 1].first) continue;
      const double nl = l0 + l1, nr = total - nl;
      if (nl < params.min_samples_leaf || nr < params.min_samples_leaf)
        continue;
      const double weighted =
          (nl * gini(l0, l1) + nr * gini(c0 - l0, c1 - l1)) / total;
      // Zero-gain splits stay eligible (an XOR root improves nothing yet
      // must still split); gain is never negative for Gini.
      const double gain = parent - weighted;
      const double threshold = vals[i].first + 0.5 * (vals[i + 1].first - vals[i].first);
      if (!best || gain > best->gain ||
          (gain == best->gain &&
           (feature < best->feature ||
            (feature == best->feature && threshold < best->threshold)))) {
        best = SplitCandidate{feature, threshold, gain};
      }
    }
  }
  return best;
}

int DecisionTree::route(std::span<const double> row) const {
  int node = 0;
  while (nodes[static_cast<std::size_t>(node)].feature >= 0) {
    const auto& nd = nodes[static_cast<std::size_t>(node)];
    node = row[static_cast<std::size_t>(nd.feature)] <= nd.threshold ? nd.left
                                                                     : nd.right;
  }
  return node;
}

namespace {

struct TreeBuilder {
  const Matrix& features;
  const std::vector<int>& labels;
  const TreeParams& params;
  Rng& rng;
  int m;  // candidate features per node
  std::vector<int> feature_pool;
  DecisionTree tree;

  // Draws a sorted uniform subset of size m (partial Fisher-Yates).
  std::vector<int> draw_candidates() {
    const std::size_t p = feature_pool.size();
    for (std::size_t i = 0; i < static_cast<std::size_t>(m); ++i) {
      const std::size_t j = i + static_cast<std::size_t>(rng.below(p - i));
      std::swap(feature_pool[i], feature_pool[j]);
    }
    std::vector<int> out(feature_pool.begin(),
                         feature_pool.begin() + m);
    std::sort(out.begin(), out.end());
    return out;
  }

  int build(std::vector<std::size_t>& rows, int depth) {
    double c0 = 0.0, c1 = 0.0;
    for (std::size_t r : rows) (labels[r] ? c1 : c0) += 1.0;

    const int node_id = static_cast<int>(tree.nodes.size());
    tree.nodes.push_back({-1, 0.0, -1, -1, c0, c1});
    tree.depth = std::max(tree.depth, depth);

    const bool pure = (c0 == 0.0 || c1 == 0.0);
    const bool depth_capped =
        params.max_depth != kUnboundedDepth && depth >= params.max_depth;
    if (pure || depth_capped ||
        rows.size() < static_cast<std::size_t>(params.min_samples_split))
      return node_id;

    const auto candidates = draw_candidates();
    const auto split = best_split(features, labels, rows, candidates, params);
    if (!split) return node_id;

    std::vector<std::size_t> left_rows, right_rows;
    left_rows.reserve(rows.size());
    right_rows.reserve(rows.size());
    for (std::size_t r : rows) {
      if (features.at(r, static_cast<std::size_t>(split->feature)) <=
          split->threshold)
        left_rows.push_back(r);
      else
        right_rows.push_back(r);
    }
    rows.clear();
    rows.shrink_to_fit();

    tree.nodes[static_cast<std::size_t>(node_id)].feature = split->feature;
    tree.nodes[static_cast<std::size_t>(node_id)].threshold = split->threshold;
    const int left = build(left_rows, depth + 1);
    tree.nodes[static_cast<std::size_t>(node_id)].left = left;
    const int right = build(right_rows, depth + 1);
    tree.nodes[static_cast<std::size_t>(node_id)].right = right;
    return node_id;
  }
};

}  // namespace

DecisionTree fit_tree(const Dataset& ds, const TreeParams& params, Rng& rng) {
  if (ds.rows() == 0) throw Error::train("training", "empty training dataset");
  params.validate(ds.cols());

  TreeBuilder builder{ds.features, ds.labels, params, rng,
                      params.resolved_features_per_split(ds.cols()),
                      {},
                      {}};
  builder.feature_pool.resize(ds.cols());
  for (std::size_t i = 0; i < ds.cols(); ++i)
    builder.feature_pool[i] = static_cast<int>(i);

  std::vector<std::size_t> rows(ds.rows());
  for (std::size_t i = 0; i < ds.rows(); ++i) rows[i] = i;
  builder.build(rows, 0);
  return std::move(builder.tree);
}

Forest fit_forest(const Dataset& ds, const RFParams& params, int n_threads) {
  if (ds.rows() == 0) throw Error::train("training", "empty training dataset");
  params.validate(ds.cols());
  if (ds.single_class)
    throw Error::train("training",
                       "forest training requires both classes present");

  Forest forest;
  forest.feature_names = ds.feature_names;
  forest.params = params;
  forest.trees.resize(static_cast<std::size_t>(params.n_estimators));
  forest.tree_seeds.resize(forest.trees.size());
  for (std::size_t t = 0; t < forest.trees.size(); ++t)
    forest.tree_seeds[t] = Rng::mix(params.seed, t);

  const std::size_t n = ds.rows();
  auto fit_one = [&](std::size_t t) {
    Rng rng(forest.tree_seeds[t]);
    if (params.bootstrap) {
      std::vector<std::size_t> sample(n);
      for (std::size_t i = 0; i < n; ++i)
        sample[i] = static_cast<std::size_t>(rng.below(n));
      Dataset boot = ds.take_rows(sample);
      forest.trees[t] = fit_tree(boot, params.tree, rng);
    } else {
      forest.trees[t] = fit_tree(ds, params.tree, rng);
    }
  };

  const int threads = std::max(1, n_threads);
  if (threads == 1 || forest.trees.size() == 1) {
    for (std::size_t t = 0; t < forest.trees.size(); ++t) fit_one(t);
  } else {
    std::vector<std::thread> pool;
    const std::size_t total = forest.trees.size();
    for (int w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t t = static_cast<std::size_t>(w); t < total;
             t += static_cast<std::size_t>(threads))
          fit_one(t);
      });
    }
    for (auto& th : pool) th.join();
  }
  return forest;
}

namespace {

int leaf_vote(const TreeNode& leaf) {
  return leaf.count1 > leaf.count0 ? 1 : 0;  // tie -> class 0
}

void check_width(std::size_t got, std::size_t want) {
  if (got != want)
    throw Error::data("prediction", "row width " + std::to_string(got) +
                                        " does not match training width " +
                                        std::to_string(want));
}

std::size_t model_width(const Forest& forest) {
  return forest.feature_names.size();
}

}  // namespace

Prediction predict_tree(const DecisionTree& tree, std::span<const double> row) {
  const auto& leaf = tree.nodes[static_cast<std::size_t>(tree.route(row))];
  const int label = leaf_vote(leaf);
  return {label, static_cast<double>(label)};
}

Prediction predict_forest(const Forest& forest, std::span<const double> row) {
  check_width(row.size(), model_width(forest));
  std::size_t votes1 = 0;
  for (const auto& tree : forest.trees)
    votes1 += static_cast<std::size_t>(
        leaf_vote(tree.nodes[static_cast<std::size_t>(tree.route(row))]));
  const double frac =
      static_cast<double>(votes1) / static_cast<double>(forest.trees.size());
  return {frac > 0.5 ? 1 : 0, frac};
}

std::vector<Prediction> predict_forest(const Forest& forest,
                                       const Matrix& rows) {
  check_width(rows.cols(), model_width(forest));
  std::vector<Prediction> out(rows.rows());
  for (std::size_t r = 0; r < rows.rows(); ++r)
    out[r] = predict_forest(forest, rows.row(r));
  return out;
}

std::vector<double> gini_importance(const Forest& forest) {
  const std::size_t p = forest.feature_names.size();
  std::vector<double> importance(p, 0.0);
  bool any_internal = false;

  for (const auto& tree : forest.trees) {
    if (tree.nodes.empty()) continue;
    const double root_n = tree.nodes[0].count0 + tree.nodes[0].count1;
    for (const auto& node : tree.nodes) {
      if (node.feature < 0) continue;
      any_internal = true;
      const auto& l = tree.nodes[static_cast<std::size_t>(node.left)];
      const auto& r = tree.nodes[static_cast<std::size_t>(node.right)];
      const double n = node.count0 + node.count1;
      const double nl = l.count0 + l.count1, nr = r.count0 + r.count1;
      const double decrease =
          gini(node.count0, node.count1) -
          (nl * gini(l.count0, l.count1) + nr * gini(r.count0, r.count1)) / n;
      importance[static_cast<std::size_t>(node.feature)] +=
          (n / root_n) * decrease / static_cast<double>(forest.trees.size());
    }
  }
  if (!any_internal)
    throw Error::train("importance",
                       "importance undefined: forest has no internal nodes");

  double sum = 0.0;
  for (double v : importance) sum += v;
  for (double& v : importance) v /= sum;
  return importance;
}

}  // namespace auditml
