//
// Project molxfer - Copyright 2026 The molxfer Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "molxfer/baseline.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <string>

#include "molxfer/random.h"

namespace molxfer {
namespace {
struct NodeStats {
  double n = 0;
  double sum = 0;
  double sumsq = 0;

  void add(double y) {
    n += 1;
    sum += y;
    sumsq += y * y;
  }
  // Regression: sum of squared deviations. Classification: n * Gini.
  double impurity(Task task) const {
    if (n == 0)
      return 0;
    if (task == Task::kRegression)
      return std::max(0.0, sumsq - sum * sum / n);
    double p = sum / n;
    return n * 2.0 * p * (1.0 - p);
  }
};

class TreeBuilder {
public:
  TreeBuilder(std::span<const Fingerprint> fps, std::span<const double> y,
              Task task, const ForestConfig &cfg, Rng &rng)
      : fps_(fps), y_(y), task_(task), cfg_(cfg), rng_(rng) {
    words_ = fps.empty() ? 0 : static_cast<int>(fps[0].words().size());
    n_bits_ = fps.empty() ? 0 : fps[0].n_bits();
    max_features_ = cfg.features_per_split == FeatureRule::kAll
                        ? n_bits_
                        : std::max(1, static_cast<int>(std::sqrt(n_bits_)));
  }

  DecisionTree build(std::vector<int> rows) {
    grow(std::move(rows), 0);
    return std::move(tree_);
  }

private:
  int grow(std::vector<int> rows, int depth) {
    int id = static_cast<int>(tree_.nodes.size());
    tree_.nodes.emplace_back();

    NodeStats stats;
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (int r: rows) {
      stats.add(y_[r]);
      lo = std::min(lo, y_[r]);
      hi = std::max(hi, y_[r]);
    }
    tree_.nodes[id].value = stats.sum / stats.n;

    const int n = static_cast<int>(rows.size());
    if (lo == hi || n < 2 * cfg_.min_samples_leaf
        || (cfg_.max_depth && depth >= *cfg_.max_depth))
      return id;

    // Bits that vary inside this node.
    std::vector<std::uint64_t> any(words_, 0), all(words_, ~0ULL);
    for (int r: rows) {
      auto w = fps_[r].words();
      for (int i = 0; i < words_; ++i) {
        any[i] |= w[i];
        all[i] &= w[i];
      }
    }
    std::vector<int> varying;
    for (int i = 0; i < words_; ++i) {
      std::uint64_t m = any[i] & ~all[i];
      while (m) {
        varying.push_back(i * 64 + std::countr_zero(m));
        m &= m - 1;
      }
    }
    if (varying.empty())
      return id;

    // Uniform subset of the varying bits, in random order.
    const int m = std::min<int>(max_features_, static_cast<int>(varying.size()));
    for (int i = 0; i < m; ++i) {
      std::size_t j = i + uniform_index(rng_, varying.size() - i);
      std::swap(varying[i], varying[j]);
    }

    int best_feature = -1;
    double best_score = std::numeric_limits<double>::infinity();
    for (int c = 0; c < m; ++c) {
      int bit = varying[c];
      NodeStats left, right;
      for (int r: rows) {
        if (fps_[r].test(bit))
          right.add(y_[r]);
        else
          left.add(y_[r]);
      }
      if (left.n < cfg_.min_samples_leaf || right.n < cfg_.min_samples_leaf)
        continue;
      double score = left.impurity(task_) + right.impurity(task_);
      if (score < best_score) {
        best_score = score;
        best_feature = bit;
      }
    }
    if (best_feature < 0)
      return id;

    std::vector<int> left_rows, right_rows;
    for (int r: rows)
      (fps_[r].test(best_feature) ? right_rows : left_rows).push_back(r);
    rows.clear();
    rows.shrink_to_fit();

    tree_.nodes[id].feature = best_feature;
    int left = grow(std::move(left_rows), depth + 1);
    int right = grow(std::move(right_rows), depth + 1);
    tree_.nodes[id].left = left;
    tree_.nodes[id].right = right;
    return id;
  }

  std::span<const Fingerprint> fps_;
  std::span<const double> y_;
  Task task_;
  const ForestConfig &cfg_;
  Rng &rng_;
  int words_ = 0;
  int n_bits_ = 0;
  int max_features_ = 1;
  DecisionTree tree_;
};

int subtree_depth(const DecisionTree &t, int node) {
  const TreeNode &n = t.nodes[node];
  if (n.feature < 0)
    return 0;
  return 1 + std::max(subtree_depth(t, n.left), subtree_depth(t, n.right));
}
}  // namespace

void ForestConfig::validate() const {
  if (n_trees < 1)
    throw Error("ForestConfig: n_trees must be >= 1");
  if (min_samples_leaf < 1)
    throw Error("ForestConfig: min_samples_leaf must be >= 1");
  if (max_depth && *max_depth < 0)
    throw Error("ForestConfig: max_depth must be >= 0");
}

double DecisionTree::predict(const Fingerprint &fp) const {
  int node = 0;
  while (nodes[node].feature >= 0)
    node = fp.test(nodes[node].feature) ? nodes[node].right : nodes[node].left;
  return nodes[node].value;
}

int DecisionTree::depth() const {
  return nodes.empty() ? 0 : subtree_depth(*this, 0);
}

Forest fit_forest_fingerprints(std::span<const Fingerprint> fps,
                               std::span<const double> targets, Task task,
                               const ForestConfig &config) {
  config.validate();
  if (fps.size() != targets.size())
    throw ShapeError("fit_forest: fingerprint and target counts differ");
  if (fps.size() < 2)
    throw Error("fit_forest: need at least 2 training records");
  for (const Fingerprint &fp: fps) {
    if (fp.n_bits() != fps[0].n_bits())
      throw LengthMismatch("fit_forest: fingerprints differ in width");
  }
  for (double y: targets) {
    if (!std::isfinite(y)
        || (task == Task::kBinaryClassification && y != 0.0 && y != 1.0))
      throw Error("fit_forest: invalid target " + std::to_string(y));
  }

  Forest forest;
  forest.task = task;
  forest.radius = fps[0].radius();
  forest.n_bits = fps[0].n_bits();
  const int n = static_cast<int>(fps.size());
  for (int t = 0; t < config.n_trees; ++t) {
    Rng rng(derive_seed(config.seed, "tree", static_cast<std::uint64_t>(t)));
    std::vector<int> rows(n);
    for (int i = 0; i < n; ++i)
      rows[i] = config.bootstrap ? static_cast<int>(uniform_index(rng, n)) : i;
    TreeBuilder builder(fps, targets, task, config, rng);
    forest.trees.push_back(builder.build(std::move(rows)));
  }
  return forest;
}

Forest fit_forest(const Dataset &ds, const ForestConfig &config) {
  std::vector<Fingerprint> fps;
  fps.reserve(ds.size());
  for (const Record &r: ds.records) {
    try {
      fps.push_back(ecfp(parse_smiles(r.smiles), config.radius, config.n_bits));
    } catch (const SmilesError &e) {
      throw DatasetError(r.id, "record '" + r.id + "': " + e.what());
    }
  }
  std::vector<double> y = ds.targets();
  return fit_forest_fingerprints(fps, y, ds.task, config);
}

double predict_forest(const Forest &forest, const Fingerprint &fp) {
  if (fp.n_bits() != forest.n_bits)
    throw LengthMismatch("predict_forest: fingerprint width "
                         + std::to_string(fp.n_bits()) + " vs forest "
                         + std::to_string(forest.n_bits));
  double sum = 0;
  for (const DecisionTree &t: forest.trees)
    sum += t.predict(fp);
  return sum / static_cast<double>(forest.trees.size());
}

double predict_forest(const Forest &forest, const MolecularGraph &mol) {
  return predict_forest(forest, ecfp(mol, forest.radius, forest.n_bits));
}

}  // namespace molxfer
