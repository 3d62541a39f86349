//
// Project molxfer - Copyright 2026 The molxfer Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <numeric>

#include <gtest/gtest.h>

#include "molxfer/appdomain.h"
#include "molxfer/random.h"
#include "oracles.h"
#include "test_util.h"

namespace molxfer {
namespace {
std::vector<MolecularGraph> parse_all(const std::vector<std::string> &smiles) {
  std::vector<MolecularGraph> out;
  for (const std::string &s: smiles)
    out.push_back(parse_smiles(s));
  return out;
}

std::vector<Fingerprint> ecfp4_all(const std::vector<MolecularGraph> &mols) {
  std::vector<Fingerprint> out;
  for (const MolecularGraph &m: mols)
    out.push_back(ecfp(m, 2, 2048));
  return out;
}

test::BruteAd brute_fit(const std::vector<MolecularGraph> &mols, int k) {
  return test::brute_fit_ad(ecfp4_all(mols), k);
}

double brute_dn(const test::BruteAd &ad, const MolecularGraph &mol) {
  return test::brute_d_n(ad, ecfp(mol, 2, 2048));
}

TEST(FitAd, IdenticalPair) {
  AdModel ad = fit_ad(parse_all({ "CCO", "CCO" }), 5);
  EXPECT_EQ(ad.effective_k, 1);
  EXPECT_EQ(ad.per_train_avg, (std::vector<double> { 0, 0 }));
  EXPECT_EQ(ad.d_train, 0);
}

TEST(FitAd, EquidistantSet) {
  // Disjoint single-bit fingerprints are all at distance 1.
  std::vector<Fingerprint> fps;
  for (int i = 0; i < 6; ++i) {
    Fingerprint fp(64, 2);
    fp.set(i);
    fps.push_back(fp);
  }
  for (int k: { 1, 3, 5, 9 }) {
    AdOptions opt;
    opt.k = k;
    opt.n_bits = 64;
    EXPECT_EQ(fit_ad_fingerprints(fps, opt).d_train, 1.0);
  }
}

TEST(FitAd, MatchesBruteForce) {
  for (std::uint64_t seed: { 1, 2, 3, 4 }) {
    std::vector<MolecularGraph> train = parse_all(test::generated_smiles(10 + 10 * seed, seed));
    AdModel ad = fit_ad(train, 5);
    test::BruteAd oracle = brute_fit(train, 5);
    EXPECT_NEAR(ad.d_train, oracle.d_train, 1e-12);
    EXPECT_EQ(ad.effective_k, oracle.k);
    std::vector<MolecularGraph> test = parse_all(test::generated_smiles(10, seed + 100));
    for (const MolecularGraph &m: test) {
      AdQuery q = in_domain(ad, m);
      double dn = brute_dn(oracle, m);
      EXPECT_NEAR(q.d_n, dn, 1e-12);
      EXPECT_EQ(q.included, dn < oracle.d_train);
    }
  }
}

TEST(FitAd, FiftyMoleculesBruteForce) {
  std::vector<MolecularGraph> train = parse_all(test::generated_smiles(50, 9));
  AdModel ad = fit_ad(train, 5);
  EXPECT_NEAR(ad.d_train, brute_fit(train, 5).d_train, 1e-12);
}

TEST(FitAd, Errors) {
  EXPECT_THROW(fit_ad(parse_all({ "CC" }), 5), TooFewMolecules);
  EXPECT_THROW(fit_ad(parse_all({ "CC", "CO" }), 0), Error);
}

TEST(InDomain, TrainingMemberIncluded) {
  std::vector<MolecularGraph> train = parse_all(test::generated_smiles(20, 5));
  AdModel ad = fit_ad(train, 1);
  ASSERT_GT(ad.d_train, 0);
  AdQuery q = in_domain(ad, train[4]);
  EXPECT_EQ(q.d_n, 0);
  EXPECT_TRUE(q.included);
}

TEST(InDomain, DisjointExcluded) {
  std::vector<Fingerprint> fps;
  for (int i = 0; i < 5; ++i) {
    Fingerprint fp(64, 2);
    fp.set(i);
    fp.set(i + 1);
    fps.push_back(fp);
  }
  AdOptions opt;
  opt.n_bits = 64;
  AdModel ad = fit_ad_fingerprints(fps, opt);
  ASSERT_LT(ad.d_train, 1);
  Fingerprint far(64, 2);
  far.set(40);
  AdQuery q = in_domain(ad, far);
  EXPECT_EQ(q.d_n, 1);
  EXPECT_FALSE(q.included);
}

TEST(InDomain, StrictVersusInclusiveBoundary) {
  std::vector<MolecularGraph> train = parse_all({ "CCO", "CCO", "CCO" });
  AdModel strict = fit_ad(train, 2);
  EXPECT_FALSE(in_domain(strict, train[0]).included);
  AdOptions opt;
  opt.k = 2;
  opt.strict = false;
  AdModel inclusive = fit_ad(train, opt);
  EXPECT_TRUE(in_domain(inclusive, train[0]).included);
}

TEST(InDomain, OrderInvariant) {
  std::vector<MolecularGraph> train = parse_all(test::generated_smiles(25, 6));
  std::vector<MolecularGraph> rev(train.rbegin(), train.rend());
  AdModel a = fit_ad(train, 5), b = fit_ad(rev, 5);
  EXPECT_NEAR(a.d_train, b.d_train, 1e-12);
  for (const MolecularGraph &m: parse_all(test::generated_smiles(15, 7))) {
    EXPECT_NEAR(in_domain(a, m).d_n, in_domain(b, m).d_n, 1e-12);
    EXPECT_EQ(in_domain(a, m).included, in_domain(b, m).included);
  }
}

TEST(InDomain, AddingCopiesNeverIncreasesDistance) {
  std::vector<MolecularGraph> train = parse_all(test::generated_smiles(12, 8));
  MolecularGraph query = parse_smiles("CCOc1ccccc1");
  double prev = in_domain(fit_ad(train, 5), query).d_n;
  for (int i = 0; i < 6; ++i) {
    train.push_back(query);
    double cur = in_domain(fit_ad(train, 5), query).d_n;
    EXPECT_LE(cur, prev);
    prev = cur;
  }
  EXPECT_EQ(prev, 0);
}

TEST(Coverage, Degenerate) {
  Dataset dup;
  dup.records = { { "a", "CCO", 0 }, { "b", "CCO", 0 }, { "c", "CCO", 0 } };
  std::vector<MolecularGraph> train = parse_all({ "CCO", "CCO", "CCO" });
  EXPECT_EQ(ad_coverage(fit_ad(train, 5), dup), 0);
}

TEST(Coverage, MatchesFlags) {
  std::vector<std::string> smiles = test::generated_smiles(60, 10);
  std::vector<MolecularGraph> train =
      parse_all(std::vector<std::string>(smiles.begin(), smiles.begin() + 30));
  Dataset test;
  for (int i = 30; i < 60; ++i)
    test.records.push_back({ "t" + std::to_string(i), smiles[i], 0 });
  AdModel ad = fit_ad(train, 5);
  int inside = 0;
  for (const Record &r: test.records)
    inside += in_domain(ad, parse_smiles(r.smiles)).included;
  EXPECT_DOUBLE_EQ(ad_coverage(ad, test), inside / 30.0);
}

TEST(Coverage, DisjointChemistryIsZero) {
  std::vector<MolecularGraph> train =
      parse_all({ "CCCC", "CCCCC", "CCCCCC", "CC(C)CC" });
  Dataset test;
  test.records = { { "x", "FC(F)(F)Br", 0 }, { "y", "ClC(Cl)(Cl)I", 0 } };
  EXPECT_EQ(ad_coverage(fit_ad(train, 5), test), 0);
}

TEST(Coverage, Errors) {
  AdModel ad = fit_ad(parse_all({ "CC", "CO" }), 1);
  EXPECT_THROW(ad_coverage(ad, Dataset {}), Error);
  Dataset bad;
  bad.records = { { "z", "C1CC", 0 } };
  EXPECT_THROW(ad_coverage(ad, bad), DatasetError);
}
}  // namespace
}  // namespace molxfer
