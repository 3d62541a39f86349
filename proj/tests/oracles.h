//
// Project molxfer - Copyright 2026 The molxfer Authors.
// SPDX-License-Identifier: Apache-2.0
//

// Brute-force reference implementations. Each one is written directly from
// the definition, without sharing code with the library.

#ifndef MOLXFER_TESTS_ORACLES_H_
#define MOLXFER_TESTS_ORACLES_H_

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "molxfer/analysis.h"
#include "molxfer/fingerprint.h"
#include "molxfer/sampling.h"

namespace molxfer::test {

// (wins + ties / 2) / (P * N) over every positive-negative pair.
inline double auc_brute_force(const std::vector<double> &y,
                              const std::vector<double> &s) {
  double wins = 0, pairs = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    for (std::size_t j = 0; j < y.size(); ++j) {
      if (y[i] != 1 || y[j] != 0)
        continue;
      pairs += 1;
      if (s[i] > s[j])
        wins += 1;
      else if (s[i] == s[j])
        wins += 0.5;
    }
  }
  return wins / pairs;
}

// Rank 1 = largest metric; tied entries share the mean of their positions.
inline std::vector<double>
rank_sum_oracle(const std::vector<std::vector<double>> &m) {
  std::vector<double> sums(m.size(), 0);
  for (std::size_t r = 0; r < m[0].size(); ++r) {
    for (std::size_t p = 0; p < m.size(); ++p) {
      int better = 0, equal = 0;
      for (std::size_t q = 0; q < m.size(); ++q) {
        if (m[q][r] > m[p][r])
          ++better;
        else if (m[q][r] == m[p][r])
          ++equal;
      }
      sums[p] += better + (equal + 1) / 2.0;
    }
  }
  return sums;
}

// Exhaustive greedy: scores every remaining candidate at each step. Ties go
// to the smaller value, then the smaller id.
inline std::vector<std::string> maxmin_oracle(const std::vector<IdValue> &values,
                                              std::size_t k) {
  std::vector<std::string> picked;
  std::vector<bool> used(values.size(), false);
  auto before = [](const IdValue &a, const IdValue &b) {
    return a.value < b.value || (a.value == b.value && a.id < b.id);
  };
  for (std::size_t step = 0; step < k; ++step) {
    int best = -1;
    double best_score = -1;
    for (std::size_t c = 0; c < values.size(); ++c) {
      if (used[c])
        continue;
      double score;
      if (step == 0)
        score = -values[c].value;
      else if (step == 1)
        score = values[c].value;
      else {
        score = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < values.size(); ++j)
          if (used[j])
            score = std::min(score, std::abs(values[c].value - values[j].value));
      }
      if (best < 0 || score > best_score
          || (score == best_score && before(values[c], values[best]))) {
        best = static_cast<int>(c);
        best_score = score;
      }
    }
    used[best] = true;
    picked.push_back(values[best].id);
  }
  return picked;
}

inline double mean_of_smallest(std::vector<double> d, int k) {
  std::sort(d.begin(), d.end());
  return std::accumulate(d.begin(), d.begin() + k, 0.0) / k;
}

struct BruteAd {
  std::vector<Fingerprint> fps;
  int k = 1;
  double d_train = 0;
};

inline BruteAd brute_fit_ad(std::vector<Fingerprint> fps, int k) {
  BruteAd ad;
  ad.fps = std::move(fps);
  const int n = static_cast<int>(ad.fps.size());
  ad.k = std::min(k, n - 1);
  double total = 0;
  for (int i = 0; i < n; ++i) {
    std::vector<double> d;
    for (int j = 0; j < n; ++j)
      if (j != i)
        d.push_back(tanimoto_distance(ad.fps[i], ad.fps[j]));
    total += mean_of_smallest(d, ad.k);
  }
  ad.d_train = total / n;
  return ad;
}

inline double brute_d_n(const BruteAd &ad, const Fingerprint &fp) {
  std::vector<double> d;
  for (const Fingerprint &t: ad.fps)
    d.push_back(tanimoto_distance(fp, t));
  return mean_of_smallest(d, ad.k);
}

// Ascending eigenvalues of the population covariance of the 0/1 matrix.
inline Eigen::VectorXd dense_covariance_eigenvalues(
    const std::vector<IdFingerprint> &fps, Eigen::MatrixXd *eigenvectors = nullptr) {
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(fps.size(), fps[0].fp.n_bits());
  for (std::size_t i = 0; i < fps.size(); ++i)
    for (int b: fps[i].fp.on_bits())
      x(i, b) = 1;
  Eigen::MatrixXd centered = x.rowwise() - x.colwise().mean();
  Eigen::MatrixXd cov =
      centered.transpose() * centered / static_cast<double>(fps.size());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  if (eigenvectors)
    *eigenvectors = eig.eigenvectors();
  return eig.eigenvalues();
}

}  // namespace molxfer::test

#endif  // MOLXFER_TESTS_ORACLES_H_
