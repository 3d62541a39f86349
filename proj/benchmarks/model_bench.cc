//
// Project molxfer - Copyright 2026 The molxfer Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <vector>

#include <benchmark/benchmark.h>

#include "molxfer/datagen.h"
#include "molxfer/neuralnet.h"

namespace molxfer {
namespace {
std::vector<Example> batch(int n) {
  GenConfig cfg;
  cfg.n_molecules = n;
  cfg.seed = 12;
  std::vector<Example> out;
  int i = 0;
  for (const std::string &s: generate_molecules(cfg))
    out.push_back({ make_graph_input(parse_smiles(s)), 0.1 * i++ });
  return out;
}

void BM_Forward(benchmark::State &state) {
  const int width = static_cast<int>(state.range(0));
  GcnnModel model = build_model(default_architecture(width, width),
                                Task::kRegression, Readout::kMean, 1);
  std::vector<Example> data = batch(64);
  std::size_t i = 0;
  for (auto _: state)
    benchmark::DoNotOptimize(forward(model, data[i++ % data.size()].graph));
}
BENCHMARK(BM_Forward)->Arg(16)->Arg(32)->Arg(64);

void BM_Gradients(benchmark::State &state) {
  GcnnModel model =
      build_model(default_architecture(), Task::kRegression, Readout::kMean, 1);
  std::vector<Example> data = batch(static_cast<int>(state.range(0)));
  for (auto _: state)
    benchmark::DoNotOptimize(gradients(model, data));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Gradients)->Arg(32);

void BM_TrainEpoch(benchmark::State &state) {
  GcnnModel model =
      build_model(default_architecture(), Task::kRegression, Readout::kMean, 1);
  std::vector<Example> data = batch(200);
  TrainConfig cfg;
  cfg.epochs = 1;
  for (auto _: state)
    benchmark::DoNotOptimize(train(model, data, cfg));
}
BENCHMARK(BM_TrainEpoch)->Unit(benchmark::kMillisecond);
}  // namespace
}  // namespace molxfer
