//
// Project molxfer - Copyright 2026 The molxfer Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "molxfer/analysis.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "molxfer/random.h"

namespace molxfer {
namespace {
void check_lengths(std::span<const double> a, std::span<const double> b,
                   const char *what) {
  if (a.size() != b.size())
    throw ShapeError(std::string(what) + ": length mismatch ("
                     + std::to_string(a.size()) + " vs "
                     + std::to_string(b.size()) + ")");
  if (a.empty())
    throw ShapeError(std::string(what) + ": empty input");
}

// Sparse 0/1 design matrix with implicit centering.
class BitMatrix {
public:
  explicit BitMatrix(std::span<const IdFingerprint> fps)
      : n_(static_cast<int>(fps.size())),
        d_(fps.empty() ? 0 : fps[0].fp.n_bits()), mean_(Eigen::VectorXd::Zero(d_)) {
    rows_.reserve(fps.size());
    for (const IdFingerprint &p: fps) {
      if (p.fp.n_bits() != d_)
        throw LengthMismatch("pca: fingerprints differ in width");
      rows_.push_back(p.fp.on_bits());
      for (int b: rows_.back())
        mean_[b] += 1.0;
    }
    mean_ /= n_;
  }

  int n() const { return n_; }
  int d() const { return d_; }
  const Eigen::VectorXd &mean() const { return mean_; }

  double row_dot(int i, const Eigen::VectorXd &v) const {
    double s = 0;
    for (int b: rows_[i])
      s += v[b];
    return s;
  }

  // (X - 1 mean^T)^T (X - 1 mean^T) v / n
  Eigen::VectorXd cov_times(const Eigen::VectorXd &v) const {
    const double mv = mean_.dot(v);
    Eigen::VectorXd out = Eigen::VectorXd::Zero(d_);
    double total = 0;
    for (int i = 0; i < n_; ++i) {
      double u = row_dot(i, v) - mv;
      total += u;
      for (int b: rows_[i])
        out[b] += u;
    }
    out -= total * mean_;
    return out / n_;
  }

  double trace() const {
    return (mean_.array() * (1.0 - mean_.array())).sum();
  }

private:
  int n_;
  int d_;
  std::vector<std::vector<int>> rows_;
  Eigen::VectorXd mean_;
};

void fix_sign(Eigen::VectorXd &v) {
  Eigen::Index arg = 0;
  for (Eigen::Index i = 1; i < v.size(); ++i) {
    if (std::abs(v[i]) > std::abs(v[arg]))
      arg = i;
  }
  if (v[arg] < 0)
    v = -v;
}

// Power iteration for the dominant eigenpair of C restricted to the subspace
// orthogonal to `against`.
std::pair<Eigen::VectorXd, double>
dominant_eigenpair(const BitMatrix &x, const std::vector<Eigen::VectorXd> &against,
                   const PcaOptions &opt, int which) {
  const int d = x.d();
  Rng rng(derive_seed(0x5ca1ab1eULL, "pca_start", static_cast<std::uint64_t>(which)));
  Eigen::VectorXd v(d);
  for (int i = 0; i < d; ++i)
    v[i] = standard_normal(rng);
  auto project_out = [&](Eigen::VectorXd &w) {
    for (const auto &u: against)
      w -= u.dot(w) * u;
  };
  project_out(v);
  v.normalize();

  const double floor = 1e-10 * std::max(x.trace(), 1e-300);
  for (int it = 0; it < opt.max_iterations; ++it) {
    Eigen::VectorXd w = x.cov_times(v);
    project_out(w);
    double norm = w.norm();
    if (norm <= floor)
      return { v, 0.0 };
    w /= norm;
    double cosine = std::abs(w.dot(v));
    v = std::move(w);
    if (1.0 - cosine < opt.tolerance) {
      Eigen::VectorXd cv = x.cov_times(v);
      project_out(cv);
      return { v, std::max(0.0, v.dot(cv)) };
    }
  }
  throw ConvergenceError("pca: power iteration for component "
                         + std::to_string(which + 1) + " did not converge in "
                         + std::to_string(opt.max_iterations) + " iterations");
}
}  // namespace

std::string_view to_string(MetricName m) {
  return m == MetricName::kR2 ? "r2" : "roc_auc";
}

double r2_score(std::span<const double> y_true, std::span<const double> y_pred) {
  check_lengths(y_true, y_pred, "r2_score");
  const double mean =
      std::accumulate(y_true.begin(), y_true.end(), 0.0) / y_true.size();
  double ss_tot = 0, ss_res = 0;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    ss_tot += (y_true[i] - mean) * (y_true[i] - mean);
    ss_res += (y_true[i] - y_pred[i]) * (y_true[i] - y_pred[i]);
  }
  if (ss_tot == 0)
    throw ZeroVariance("r2_score: y_true has zero variance");
  return 1.0 - ss_res / ss_tot;
}

std::vector<double> average_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t { 0 });
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]])
      ++j;
    double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k)
      ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

double roc_auc(std::span<const double> y_true, std::span<const double> scores) {
  check_lengths(y_true, scores, "roc_auc");
  double pos = 0, neg = 0;
  for (double y: y_true) {
    if (y == 1.0)
      pos += 1;
    else if (y == 0.0)
      neg += 1;
    else
      throw Error("roc_auc: labels must be 0 or 1");
  }
  if (pos == 0 || neg == 0)
    throw OneClassOnly("roc_auc: both classes must be present");
  std::vector<double> ranks = average_ranks(scores);
  double rank_sum_pos = 0;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    if (y_true[i] == 1.0)
      rank_sum_pos += ranks[i];
  }
  return (rank_sum_pos - pos * (pos + 1) / 2) / (pos * neg);
}

MetricReport evaluate(Task task, std::span<const double> y_true,
                      std::span<const double> y_pred) {
  MetricReport report;
  report.n = y_true.size();
  if (task == Task::kRegression) {
    report.metric = MetricName::kR2;
    report.value = r2_score(y_true, y_pred);
  } else {
    report.metric = MetricName::kRocAuc;
    report.value = roc_auc(y_true, y_pred);
  }
  return report;
}

double spearman_correlation(std::span<const double> a,
                            std::span<const double> b) {
  check_lengths(a, b, "spearman_correlation");
  std::vector<double> ra = average_ranks(a), rb = average_ranks(b);
  const double n = static_cast<double>(a.size());
  const double mean = (n + 1) / 2;
  double cov = 0, va = 0, vb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    cov += (ra[i] - mean) * (rb[i] - mean);
    va += (ra[i] - mean) * (ra[i] - mean);
    vb += (rb[i] - mean) * (rb[i] - mean);
  }
  if (va == 0 || vb == 0)
    throw ZeroVariance("spearman_correlation: constant input");
  return cov / std::sqrt(va * vb);
}

PcaProjection pca_fit_transform(std::span<const IdFingerprint> fps,
                                const PcaOptions &options) {
  if (fps.size() < 3)
    throw Error("pca_fit_transform: need at least 3 points");
  BitMatrix x(fps);

  PcaProjection pca;
  pca.mean = x.mean();
  std::vector<Eigen::VectorXd> found;
  for (int c = 0; c < 2; ++c) {
    auto [v, lambda] = dominant_eigenpair(x, found, options, c);
    fix_sign(v);
    pca.components[c] = v;
    pca.explained_variance[c] = lambda;
    found.push_back(std::move(v));
  }
  // Deflated eigenvalues can come out marginally larger in degenerate cases.
  pca.explained_variance[1] =
      std::min(pca.explained_variance[1], pca.explained_variance[0]);

  pca.points.reserve(fps.size());
  for (const IdFingerprint &p: fps)
    pca.points.push_back(pca_project(pca, p));
  return pca;
}

Projection pca_project(const PcaProjection &pca, const IdFingerprint &fp) {
  Projection p;
  p.id = fp.id;
  const double m0 = pca.mean.dot(pca.components[0]);
  const double m1 = pca.mean.dot(pca.components[1]);
  double x = 0, y = 0;
  for (int b: fp.fp.on_bits()) {
    x += pca.components[0][b];
    y += pca.components[1][b];
  }
  p.x = x - m0;
  p.y = y - m1;
  return p;
}

std::vector<double> rank_sum(const std::vector<std::vector<double>> &results) {
  if (results.size() < 2)
    throw ShapeError("rank_sum: need at least 2 properties");
  const std::size_t reps = results.front().size();
  if (reps == 0)
    throw ShapeError("rank_sum: need at least 1 repetition");
  for (const auto &row: results) {
    if (row.size() != reps)
      throw ShapeError("rank_sum: ragged result matrix");
    for (double v: row) {
      if (std::isnan(v))
        throw ShapeError("rank_sum: NaN metric");
    }
  }
  std::vector<double> sums(results.size(), 0.0);
  std::vector<double> column(results.size());
  for (std::size_t r = 0; r < reps; ++r) {
    for (std::size_t p = 0; p < results.size(); ++p)
      column[p] = -results[p][r];
    std::vector<double> ranks = average_ranks(column);
    for (std::size_t p = 0; p < results.size(); ++p)
      sums[p] += ranks[p];
  }
  return sums;
}

}  // namespace molxfer
