//
// Project molxfer - Copyright 2026 The molxfer Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef MOLXFER_TESTS_TEST_UTIL_H_
#define MOLXFER_TESTS_TEST_UTIL_H_

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "molxfer/datagen.h"
#include "molxfer/fingerprint.h"
#include "molxfer/random.h"

namespace molxfer::test {

inline std::filesystem::path data_path(const std::string &name) {
  return std::filesystem::path(MOLXFER_TEST_DATA_DIR) / name;
}

inline std::string read_file(const std::filesystem::path &path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::vector<std::string> generated_smiles(int n, std::uint64_t seed,
                                                 int max_atoms = 12) {
  GenConfig cfg;
  cfg.n_molecules = n;
  cfg.seed = seed;
  cfg.max_heavy_atoms = max_atoms;
  return generate_molecules(cfg);
}

// Two clusters in bit space: cluster c sets bits from its own half of the
// vector with probability p_on; each record also gets sparse shared noise.
struct PlantedClusters {
  std::vector<Fingerprint> fps;
  std::vector<double> labels;
};

inline PlantedClusters planted_clusters(int n_per_cluster, int n_bits,
                                        std::uint64_t seed, double p_on = 0.3,
                                        double p_noise = 0.02) {
  PlantedClusters out;
  Rng rng(seed);
  const int half = n_bits / 2;
  for (int c = 0; c < 2; ++c) {
    for (int i = 0; i < n_per_cluster; ++i) {
      Fingerprint fp(n_bits, 2);
      for (int b = 0; b < n_bits; ++b) {
        bool own = (b < half) == (c == 0);
        if (uniform01(rng) < (own ? p_on : p_noise))
          fp.set(b);
      }
      out.fps.push_back(std::move(fp));
      out.labels.push_back(c);
    }
  }
  return out;
}

}  // namespace molxfer::test

#endif  // MOLXFER_TESTS_TEST_UTIL_H_
