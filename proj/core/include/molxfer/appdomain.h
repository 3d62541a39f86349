//
// Project molxfer - Copyright 2026 The molxfer Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef MOLXFER_APPDOMAIN_H_
#define MOLXFER_APPDOMAIN_H_

#include <span>
#include <vector>

#include "molxfer/error.h"
#include "molxfer/fingerprint.h"
#include "molxfer/molgraph.h"
#include "molxfer/sampling.h"

namespace molxfer {

inline constexpr int kDefaultAdNeighbors = 5;

class TooFewMolecules: public Error {
public:
  using Error::Error;
};

struct AdOptions {
  int k = kDefaultAdNeighbors;
  int radius = kEcfp4Radius;
  int n_bits = kDefaultFingerprintBits;
  // d_n < d_train when true; d_n <= d_train otherwise.
  bool strict = true;
};

// kNN average-distance applicability domain in Tanimoto/ECFP4 space.
struct AdModel {
  std::vector<Fingerprint> train_fps;
  AdOptions options;
  int effective_k = 1;                // min(k, |train| - 1)
  std::vector<double> per_train_avg;  // mean distance to k' nearest others
  double d_train = 0;                 // mean of per_train_avg
};

AdModel fit_ad_fingerprints(std::vector<Fingerprint> train_fps,
                            const AdOptions &options = {});
AdModel fit_ad(std::span<const MolecularGraph> train_mols,
               const AdOptions &options = {});
AdModel fit_ad(std::span<const MolecularGraph> train_mols, int k);

struct AdQuery {
  bool included = false;
  double d_n = 0;
};

AdQuery in_domain(const AdModel &ad, const Fingerprint &fp);
AdQuery in_domain(const AdModel &ad, const MolecularGraph &mol);

// Fraction of test molecules inside the domain. Throws DatasetError naming
// the record on parse failures.
double ad_coverage(const AdModel &ad, const Dataset &test);

}  // namespace molxfer

#endif  // MOLXFER_APPDOMAIN_H_
