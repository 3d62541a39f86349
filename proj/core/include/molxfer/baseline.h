//
// Project molxfer - Copyright 2026 The molxfer Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef MOLXFER_BASELINE_H_
#define MOLXFER_BASELINE_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "molxfer/fingerprint.h"
#include "molxfer/neuralnet.h"
#include "molxfer/sampling.h"

namespace molxfer {

enum class FeatureRule { kSqrt, kAll };

struct ForestConfig {
  int n_trees = 100;
  std::optional<int> max_depth;
  int min_samples_leaf = 1;
  FeatureRule features_per_split = FeatureRule::kSqrt;
  bool bootstrap = true;
  std::uint64_t seed = 0;
  int radius = kEcfp6Radius;
  int n_bits = kDefaultFingerprintBits;

  void validate() const;
};

// Internal nodes route bit == 0 to `left` and bit == 1 to `right`.
struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  int left = -1;
  int right = -1;
  double value = 0;  // leaf mean target or positive fraction
};

struct DecisionTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  double predict(const Fingerprint &fp) const;
  int depth() const;
  bool is_single_leaf() const { return nodes.size() == 1; }
};

struct Forest {
  std::vector<DecisionTree> trees;
  Task task = Task::kRegression;
  int radius = kEcfp6Radius;
  int n_bits = kDefaultFingerprintBits;
};

// CART on binary features: variance reduction for regression, Gini for
// classification, bootstrap rows and per-split feature subsampling.
Forest fit_forest_fingerprints(std::span<const Fingerprint> fps,
                               std::span<const double> targets, Task task,
                               const ForestConfig &config);

// Featurizes every record with ECFP at config.radius. Parse failures raise
// DatasetError naming the record.
Forest fit_forest(const Dataset &ds, const ForestConfig &config);

// Mean tree output: regression value or positive-class score in [0, 1].
double predict_forest(const Forest &forest, const Fingerprint &fp);
double predict_forest(const Forest &forest, const MolecularGraph &mol);

}  // namespace molxfer

#endif  // MOLXFER_BASELINE_H_
