//
// Project molxfer - Copyright 2026 The molxfer Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "molxfer/appdomain.h"

#include <algorithm>
#include <numeric>
#include <string>

namespace molxfer {
namespace {
// Mean of the k smallest entries of d (d is clobbered).
double mean_of_smallest(std::vector<double> &d, int k) {
  std::partial_sort(d.begin(), d.begin() + k, d.end());
  double sum = 0;
  for (int i = 0; i < k; ++i)
    sum += d[i];
  return sum / k;
}
}  // namespace

AdModel fit_ad_fingerprints(std::vector<Fingerprint> train_fps,
                            const AdOptions &options) {
  if (options.k < 1)
    throw Error("fit_ad: k must be >= 1");
  const int n = static_cast<int>(train_fps.size());
  if (n < 2)
    throw TooFewMolecules("fit_ad: need at least 2 training molecules, got "
                          + std::to_string(n));
  AdModel ad;
  ad.options = options;
  ad.effective_k = std::min(options.k, n - 1);
  ad.train_fps = std::move(train_fps);

  std::vector<double> dist(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      double d = tanimoto_distance(ad.train_fps[i], ad.train_fps[j]);
      dist[static_cast<std::size_t>(i) * n + j] = d;
      dist[static_cast<std::size_t>(j) * n + i] = d;
    }
  }
  std::vector<double> row;
  for (int i = 0; i < n; ++i) {
    row.clear();
    for (int j = 0; j < n; ++j) {
      if (j != i)
        row.push_back(dist[static_cast<std::size_t>(i) * n + j]);
    }
    ad.per_train_avg.push_back(mean_of_smallest(row, ad.effective_k));
  }
  ad.d_train = std::accumulate(ad.per_train_avg.begin(), ad.per_train_avg.end(),
                               0.0)
               / n;
  return ad;
}

AdModel fit_ad(std::span<const MolecularGraph> train_mols,
               const AdOptions &options) {
  std::vector<Fingerprint> fps;
  fps.reserve(train_mols.size());
  for (const MolecularGraph &m: train_mols)
    fps.push_back(ecfp(m, options.radius, options.n_bits));
  return fit_ad_fingerprints(std::move(fps), options);
}

AdModel fit_ad(std::span<const MolecularGraph> train_mols, int k) {
  AdOptions options;
  options.k = k;
  return fit_ad(train_mols, options);
}

AdQuery in_domain(const AdModel &ad, const Fingerprint &fp) {
  std::vector<double> d;
  d.reserve(ad.train_fps.size());
  for (const Fingerprint &t: ad.train_fps)
    d.push_back(tanimoto_distance(fp, t));
  AdQuery q;
  q.d_n = mean_of_smallest(d, ad.effective_k);
  q.included = ad.options.strict ? q.d_n < ad.d_train : q.d_n <= ad.d_train;
  return q;
}

AdQuery in_domain(const AdModel &ad, const MolecularGraph &mol) {
  return in_domain(ad, ecfp(mol, ad.options.radius, ad.options.n_bits));
}

double ad_coverage(const AdModel &ad, const Dataset &test) {
  if (test.empty())
    throw Error("ad_coverage: empty test set");
  int inside = 0;
  for (const Record &r: test.records) {
    try {
      inside += in_domain(ad, parse_smiles(r.smiles)).included ? 1 : 0;
    } catch (const SmilesError &e) {
      throw DatasetError(r.id, "record '" + r.id + "': " + e.what());
    }
  }
  return static_cast<double>(inside) / static_cast<double>(test.size());
}

}  // namespace molxfer
