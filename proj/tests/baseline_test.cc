//
// Project molxfer - Copyright 2026 The molxfer Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>

#include <gtest/gtest.h>

#include "molxfer/analysis.h"
#include "molxfer/baseline.h"
#include "test_util.h"

namespace molxfer {
namespace {
Dataset generated(int n, std::uint64_t seed) {
  std::vector<std::string> smiles = test::generated_smiles(n, seed);
  return label_dataset(smiles, Formula::kDonorDefault, 0, seed);
}

TEST(Forest, PlantedClustersSeparate) {
  test::PlantedClusters train = test::planted_clusters(40, 256, 1);
  test::PlantedClusters held = test::planted_clusters(40, 256, 2);
  ForestConfig cfg;
  cfg.seed = 3;
  Forest f = fit_forest_fingerprints(train.fps, train.labels,
                                     Task::kBinaryClassification, cfg);
  std::vector<double> scores;
  for (const Fingerprint &fp: held.fps) {
    double s = predict_forest(f, fp);
    EXPECT_GE(s, 0);
    EXPECT_LE(s, 1);
    scores.push_back(s);
  }
  EXPECT_GE(roc_auc(held.labels, scores), 0.9);
}

TEST(Forest, ConstantTargetsGiveSingleLeaves) {
  Dataset ds = generated(30, 4);
  for (Record &r: ds.records)
    r.target = 2.5;
  ForestConfig cfg;
  cfg.n_trees = 10;
  Forest f = fit_forest(ds, cfg);
  for (const DecisionTree &t: f.trees) {
    EXPECT_TRUE(t.is_single_leaf());
    EXPECT_EQ(t.nodes[0].value, 2.5);
  }
  EXPECT_EQ(predict_forest(f, parse_smiles("CCO")), 2.5);
}

TEST(Forest, MemorizesWithoutBootstrap) {
  Dataset ds = generated(60, 5);
  ForestConfig cfg;
  cfg.bootstrap = false;
  cfg.n_trees = 5;
  Forest f = fit_forest(ds, cfg);
  for (const Record &r: ds.records)
    EXPECT_NEAR(predict_forest(f, parse_smiles(r.smiles)), r.target, 1e-12)
        << r.smiles;
}

TEST(Forest, Deterministic) {
  Dataset ds = generated(40, 6);
  ForestConfig cfg;
  cfg.n_trees = 20;
  cfg.seed = 11;
  Forest a = fit_forest(ds, cfg), b = fit_forest(ds, cfg);
  cfg.seed = 12;
  Forest c = fit_forest(ds, cfg);
  bool differs = false;
  for (const std::string &s: test::generated_smiles(20, 7)) {
    MolecularGraph m = parse_smiles(s);
    EXPECT_EQ(predict_forest(a, m), predict_forest(b, m));
    differs |= predict_forest(a, m) != predict_forest(c, m);
  }
  EXPECT_TRUE(differs);
}

TEST(Forest, SingleTreeEqualsLeaf) {
  Dataset ds = generated(20, 8);
  ForestConfig cfg;
  cfg.n_trees = 1;
  Forest f = fit_forest(ds, cfg);
  Fingerprint fp = ecfp(parse_smiles("c1ccccc1O"), kEcfp6Radius);
  EXPECT_EQ(predict_forest(f, fp), f.trees[0].predict(fp));
}

TEST(Forest, PredictionsWithinTargetRange) {
  Dataset ds = generated(50, 9);
  std::vector<double> y = ds.targets();
  auto [lo, hi] = std::minmax_element(y.begin(), y.end());
  Forest f = fit_forest(ds, ForestConfig {});
  for (const std::string &s: test::generated_smiles(50, 10)) {
    double p = predict_forest(f, parse_smiles(s));
    EXPECT_GE(p, *lo);
    EXPECT_LE(p, *hi);
  }
}

TEST(Forest, TreeOrderInvariant) {
  Dataset ds = generated(30, 11);
  ForestConfig cfg;
  cfg.n_trees = 7;
  Forest f = fit_forest(ds, cfg);
  Forest r = f;
  std::reverse(r.trees.begin(), r.trees.end());
  for (const std::string &s: test::generated_smiles(10, 12)) {
    MolecularGraph m = parse_smiles(s);
    EXPECT_NEAR(predict_forest(f, m), predict_forest(r, m), 1e-12);
  }
}

TEST(Forest, DuplicatesDoNotHurtOwnFit) {
  Dataset ds = generated(25, 13);
  ForestConfig cfg;
  cfg.seed = 2;
  Forest f = fit_forest(ds, cfg);
  MolecularGraph m0 = parse_smiles(ds.records[0].smiles);
  double before = std::abs(predict_forest(f, m0) - ds.records[0].target);
  Dataset dup = ds;
  for (int i = 0; i < 5; ++i) {
    Record r = ds.records[0];
    r.id += "_" + std::to_string(i);
    dup.records.push_back(r);
  }
  cfg.bootstrap = false;
  double after = std::abs(predict_forest(fit_forest(dup, cfg), m0)
                          - ds.records[0].target);
  EXPECT_LE(after, before + 1e-12);
}

TEST(Forest, MaxDepth) {
  Dataset ds = generated(60, 14);
  ForestConfig cfg;
  cfg.n_trees = 5;
  cfg.max_depth = 2;
  for (const DecisionTree &t: fit_forest(ds, cfg).trees)
    EXPECT_LE(t.depth(), 2);
  cfg.max_depth = 0;
  for (const DecisionTree &t: fit_forest(ds, cfg).trees)
    EXPECT_TRUE(t.is_single_leaf());
}

TEST(Forest, MinSamplesLeaf) {
  test::PlantedClusters pc = test::planted_clusters(20, 128, 15);
  ForestConfig cfg;
  cfg.n_trees = 3;
  cfg.min_samples_leaf = 50;
  for (const DecisionTree &t:
       fit_forest_fingerprints(pc.fps, pc.labels, Task::kBinaryClassification, cfg).trees)
    EXPECT_TRUE(t.is_single_leaf());
}

TEST(Forest, Errors) {
  ForestConfig cfg;
  cfg.n_trees = 0;
  Dataset ds = generated(5, 1);
  EXPECT_THROW(fit_forest(ds, cfg), Error);
  cfg = {};
  cfg.min_samples_leaf = 0;
  EXPECT_THROW(fit_forest(ds, cfg), Error);
  Dataset one = ds;
  one.records.resize(1);
  EXPECT_THROW(fit_forest(one, ForestConfig {}), Error);
  Dataset broken = ds;
  broken.records[1].smiles = "C(";
  EXPECT_THROW(fit_forest(broken, ForestConfig {}), DatasetError);
  Forest f = fit_forest(ds, ForestConfig {});
  EXPECT_THROW(predict_forest(f, Fingerprint(64, 3)), LengthMismatch);
  std::vector<Fingerprint> fps = { Fingerprint(64, 3), Fingerprint(64, 3) };
  std::vector<double> bad = { 0, 0.5 };
  EXPECT_THROW(fit_forest_fingerprints(fps, bad, Task::kBinaryClassification,
                                       ForestConfig {}),
               Error);
}
}  // namespace
}  // namespace molxfer
