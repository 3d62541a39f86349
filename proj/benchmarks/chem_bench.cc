//
// Project molxfer - Copyright 2026 The molxfer Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "molxfer/datagen.h"
#include "molxfer/fingerprint.h"
#include "molxfer/molgraph.h"

namespace molxfer {
namespace {
const std::vector<std::string> &corpus() {
  static const std::vector<std::string> smiles = [] {
    GenConfig cfg;
    cfg.n_molecules = 256;
    cfg.seed = 11;
    return generate_molecules(cfg);
  }();
  return smiles;
}

void BM_ParseSmiles(benchmark::State &state) {
  const auto &smiles = corpus();
  std::size_t i = 0;
  for (auto _: state) {
    benchmark::DoNotOptimize(parse_smiles(smiles[i++ % smiles.size()]));
  }
}
BENCHMARK(BM_ParseSmiles);

void BM_Descriptors(benchmark::State &state) {
  std::vector<MolecularGraph> mols;
  for (const std::string &s: corpus())
    mols.push_back(parse_smiles(s));
  std::size_t i = 0;
  for (auto _: state)
    benchmark::DoNotOptimize(compute_descriptors(mols[i++ % mols.size()]));
}
BENCHMARK(BM_Descriptors);

void BM_Ecfp(benchmark::State &state) {
  std::vector<MolecularGraph> mols;
  for (const std::string &s: corpus())
    mols.push_back(parse_smiles(s));
  const int radius = static_cast<int>(state.range(0));
  std::size_t i = 0;
  for (auto _: state)
    benchmark::DoNotOptimize(ecfp(mols[i++ % mols.size()], radius, 2048));
}
BENCHMARK(BM_Ecfp)->Arg(1)->Arg(2)->Arg(3);

void BM_GenerateMolecules(benchmark::State &state) {
  GenConfig cfg;
  cfg.n_molecules = static_cast<int>(state.range(0));
  for (auto _: state) {
    benchmark::DoNotOptimize(generate_molecules(cfg));
    ++cfg.seed;
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GenerateMolecules)->Arg(500)->Unit(benchmark::kMillisecond);
}  // namespace
}  // namespace molxfer
