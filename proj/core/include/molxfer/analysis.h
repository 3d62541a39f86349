//
// Project molxfer - Copyright 2026 The molxfer Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef MOLXFER_ANALYSIS_H_
#define MOLXFER_ANALYSIS_H_

#include <array>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "molxfer/error.h"
#include "molxfer/fingerprint.h"
#include "molxfer/sampling.h"

namespace molxfer {

class ZeroVariance: public Error {
public:
  using Error::Error;
};

class OneClassOnly: public Error {
public:
  using Error::Error;
};

class ConvergenceError: public Error {
public:
  using Error::Error;
};

enum class MetricName { kR2, kRocAuc };

std::string_view to_string(MetricName m);

struct MetricReport {
  MetricName metric = MetricName::kR2;
  double value = 0;
  std::size_t n = 0;
};

// 1 - SS_res / SS_tot. Throws ZeroVariance or ShapeError.
double r2_score(std::span<const double> y_true, std::span<const double> y_pred);

// Rank-based AUC with half credit for tied positive/negative pairs.
double roc_auc(std::span<const double> y_true, std::span<const double> scores);

// r2 for regression, ROC AUC for classification.
MetricReport evaluate(Task task, std::span<const double> y_true,
                      std::span<const double> y_pred);

// Average ranks (1-based, ties share the mean rank) in ascending order.
std::vector<double> average_ranks(std::span<const double> values);

double spearman_correlation(std::span<const double> a,
                            std::span<const double> b);

struct IdFingerprint {
  std::string id;
  Fingerprint fp;
};

struct PcaOptions {
  int max_iterations = 1000;
  double tolerance = 1e-9;
};

struct PcaProjection {
  std::array<Eigen::VectorXd, 2> components;
  Eigen::VectorXd mean;
  std::array<double, 2> explained_variance = { 0, 0 };
  std::vector<Projection> points;
};

// Top two principal directions of the bit vectors by power iteration with
// deflation, using only covariance-vector products X^T (X v) / n on the
// centered data. Each component's largest-magnitude coordinate is made
// positive. Throws ConvergenceError.
PcaProjection pca_fit_transform(std::span<const IdFingerprint> fps,
                                const PcaOptions &options = {});

// Projects a fingerprint with a fitted projection.
Projection pca_project(const PcaProjection &pca, const IdFingerprint &fp);

// rows = splitting properties, cols = repetitions. Within each column,
// properties are ranked by metric descending (1 = best, ties share the mean
// rank); returns per-row sums. Throws ShapeError.
std::vector<double> rank_sum(const std::vector<std::vector<double>> &results);

}  // namespace molxfer

#endif  // MOLXFER_ANALYSIS_H_
