//
// Project molxfer - Copyright 2026 The molxfer Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef MOLXFER_NEURALNET_H_
#define MOLXFER_NEURALNET_H_

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "molxfer/error.h"
#include "molxfer/molgraph.h"

namespace molxfer {

enum class LayerKind { kGraphConv, kDense };
enum class Activation { kRelu, kLinear, kSigmoid };
enum class Task { kRegression, kBinaryClassification };
enum class Readout { kMean, kSum };

std::string_view to_string(LayerKind kind);
std::string_view to_string(Activation act);
std::string_view to_string(Task task);
std::string_view to_string(Readout readout);
std::optional<LayerKind> layer_kind_from_string(std::string_view s);
std::optional<Activation> activation_from_string(std::string_view s);
std::optional<Task> task_from_string(std::string_view s);
std::optional<Readout> readout_from_string(std::string_view s);

struct LayerSpec {
  LayerKind kind = LayerKind::kDense;
  int in_dim = 0;
  int out_dim = 0;
  Activation activation = Activation::kRelu;

  bool operator==(const LayerSpec &) const = default;
};

// graph_conv: h'_v = act(h_v W_self + (sum_{u in N(v)} h_u) W_neigh + b)
// dense:      y   = act(x W + b)
// `weight` holds W_self or W (in x out); `neighbor_weight` is empty for dense.
struct Layer {
  LayerSpec spec;
  Eigen::MatrixXd weight;
  Eigen::MatrixXd neighbor_weight;
  Eigen::VectorXd bias;
};

class GcnnModel {
public:
  GcnnModel() = default;
  GcnnModel(std::vector<Layer> layers, Task task, Readout readout,
            std::uint64_t seed);

  const std::vector<Layer> &layers() const { return layers_; }
  std::vector<Layer> &mutable_layers() { return layers_; }
  const Layer &layer(int i) const { return layers_[i]; }
  int num_layers() const { return static_cast<int>(layers_.size()); }
  int num_graph_layers() const;
  std::vector<LayerSpec> specs() const;

  Task task() const { return task_; }
  Readout readout() const { return readout_; }
  std::uint64_t seed() const { return seed_; }

  // Layers the optimizer must leave untouched.
  const std::set<int> &frozen_layers() const { return frozen_; }
  void set_frozen_layers(std::set<int> frozen);

  bool all_finite() const;

private:
  std::vector<Layer> layers_;
  Task task_ = Task::kRegression;
  Readout readout_ = Readout::kMean;
  std::uint64_t seed_ = 0;
  std::set<int> frozen_;
};

// Checks chaining, ordering (graph_conv before dense) and a scalar head.
// Throws ShapeError.
void validate_specs(std::span<const LayerSpec> specs);

// Glorot-uniform weights, zero biases, deterministic in seed.
GcnnModel build_model(std::span<const LayerSpec> specs, Task task,
                      Readout readout, std::uint64_t seed);

// 2 graph_conv layers followed by 3 dense layers, relu everywhere but the
// linear scalar head.
std::vector<LayerSpec> default_architecture(int graph_width = 32,
                                            int dense_width = 32);

// Precomputed network input for one molecule.
struct GraphInput {
  Eigen::MatrixXd features;                 // atoms x kAtomFeatureDim
  std::vector<std::vector<int>> neighbors;  // heavy-atom adjacency
};

GraphInput make_graph_input(const MolecularGraph &mol);

struct Example {
  GraphInput graph;
  double target = 0;
};

// Output of the last layer before any task link function.
double forward_logit(const GcnnModel &model, const GraphInput &graph);
// Regression value, or positive-class probability for classification.
double forward(const GcnnModel &model, const GraphInput &graph);
double forward(const GcnnModel &model, const MolecularGraph &mol);

// Per-atom outputs of graph_conv layer `layer` (0-based), for inspection.
Eigen::MatrixXd graph_layer_output(const GcnnModel &model,
                                   const GraphInput &graph, int layer);
// Pooled graph vector fed into the first dense layer.
Eigen::VectorXd pooled_embedding(const GcnnModel &model,
                                 const GraphInput &graph);

class BadTarget: public Error {
public:
  using Error::Error;
};

// Mean squared error, or mean binary cross-entropy on the logit.
double loss(const GcnnModel &model, std::span<const Example> batch);

struct LayerGradient {
  Eigen::MatrixXd weight;
  Eigen::MatrixXd neighbor_weight;
  Eigen::VectorXd bias;
};

struct Gradients {
  std::vector<LayerGradient> layers;
  double loss = 0;
};

// Analytic gradient of loss(model, batch) for every parameter, frozen or not.
Gradients gradients(const GcnnModel &model, std::span<const Example> batch);

struct TrainConfig {
  int epochs = 300;
  int batch_size = 32;
  double learning_rate = 0.005;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  std::set<int> frozen_layers;
  std::uint64_t seed = 0;

  void validate() const;
};

class DivergenceError: public Error {
public:
  DivergenceError(int epoch, const std::string &what)
      : Error(what), epoch_(epoch) { }
  int epoch() const { return epoch_; }

private:
  int epoch_;
};

struct TrainResult {
  GcnnModel model;
  std::vector<double> loss_history;  // mean example loss per epoch
};

// Minibatch Adam. Frozen layers (config's set plus the model's own) are
// copied through bit-for-bit. Epoch 0 returns the model unchanged.
TrainResult train(GcnnModel model, std::span<const Example> dataset,
                  const TrainConfig &config);

std::vector<double> predict(const GcnnModel &model,
                            std::span<const GraphInput> graphs);

}  // namespace molxfer

#endif  // MOLXFER_NEURALNET_H_
