//
// Project molxfer - Copyright 2026 The molxfer Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "molxfer/neuralnet.h"

#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include "molxfer/random.h"

namespace molxfer {
namespace {
using Eigen::MatrixXd;
using Eigen::RowVectorXd;
using Eigen::VectorXd;

void activate(MatrixXd &z, Activation act) {
  switch (act) {
  case Activation::kRelu:
    z = z.cwiseMax(0.0);
    break;
  case Activation::kSigmoid:
    z = (1.0 + (-z.array()).exp()).inverse().matrix();
    break;
  case Activation::kLinear:
    break;
  }
}

// d act / d z expressed through the activation output a.
void scale_by_derivative(MatrixXd &grad, const MatrixXd &out, Activation act) {
  switch (act) {
  case Activation::kRelu:
    grad = (out.array() > 0.0).select(grad, 0.0);
    break;
  case Activation::kSigmoid:
    grad.array() *= out.array() * (1.0 - out.array());
    break;
  case Activation::kLinear:
    break;
  }
}

MatrixXd neighbor_sum(const GraphInput &graph, const MatrixXd &h) {
  MatrixXd m = MatrixXd::Zero(h.rows(), h.cols());
  for (std::size_t v = 0; v < graph.neighbors.size(); ++v) {
    for (int u: graph.neighbors[v])
      m.row(static_cast<Eigen::Index>(v)) += h.row(u);
  }
  return m;
}

double sigmoid(double x) {
  if (x >= 0)
    return 1.0 / (1.0 + std::exp(-x));
  double e = std::exp(x);
  return e / (1.0 + e);
}

// log(1 + exp(x)) without overflow.
double softplus(double x) {
  return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

// Activations of one forward pass, kept for backpropagation.
struct Trace {
  std::vector<MatrixXd> graph_in;     // input to each graph layer
  std::vector<MatrixXd> graph_neigh;  // neighbor sums of those inputs
  std::vector<MatrixXd> graph_out;
  std::vector<MatrixXd> dense_in;     // 1 x in
  std::vector<MatrixXd> dense_out;    // 1 x out
  double logit = 0;
};

Trace run_forward(const GcnnModel &model, const GraphInput &graph) {
  if (graph.features.rows() == 0)
    throw ShapeError("forward: molecule has no atoms");
  const auto &layers = model.layers();
  if (graph.features.cols() != layers.front().spec.in_dim)
    throw ShapeError("forward: feature width "
                     + std::to_string(graph.features.cols())
                     + " does not match first layer in_dim "
                     + std::to_string(layers.front().spec.in_dim));
  Trace t;
  MatrixXd h = graph.features;
  std::size_t i = 0;
  for (; i < layers.size() && layers[i].spec.kind == LayerKind::kGraphConv;
       ++i) {
    const Layer &layer = layers[i];
    MatrixXd m = neighbor_sum(graph, h);
    MatrixXd z = h * layer.weight + m * layer.neighbor_weight;
    z.rowwise() += layer.bias.transpose();
    activate(z, layer.spec.activation);
    t.graph_in.push_back(std::move(h));
    t.graph_neigh.push_back(std::move(m));
    t.graph_out.push_back(z);
    h = std::move(z);
  }

  MatrixXd x = h.colwise().sum();
  if (model.readout() == Readout::kMean)
    x /= static_cast<double>(h.rows());

  for (; i < layers.size(); ++i) {
    const Layer &layer = layers[i];
    MatrixXd z = x * layer.weight + layer.bias.transpose();
    activate(z, layer.spec.activation);
    t.dense_in.push_back(std::move(x));
    t.dense_out.push_back(z);
    x = std::move(z);
  }
  t.logit = x(0, 0);
  return t;
}

double example_loss(Task task, double logit, double target) {
  if (task == Task::kRegression) {
    double r = logit - target;
    return r * r;
  }
  return softplus(logit) - target * logit;
}

double example_loss_grad(Task task, double logit, double target) {
  if (task == Task::kRegression)
    return 2.0 * (logit - target);
  return sigmoid(logit) - target;
}

void check_targets(const GcnnModel &model, std::span<const Example> batch) {
  if (batch.empty())
    throw Error("loss: empty batch");
  for (const Example &ex: batch) {
    if (!std::isfinite(ex.target))
      throw BadTarget("non-finite target");
    if (model.task() == Task::kBinaryClassification && ex.target != 0.0
        && ex.target != 1.0)
      throw BadTarget("classification target "
                      + std::to_string(ex.target) + " is not 0 or 1");
  }
}

Gradients zero_gradients(const GcnnModel &model) {
  Gradients g;
  for (const Layer &layer: model.layers()) {
    LayerGradient lg;
    lg.weight = MatrixXd::Zero(layer.weight.rows(), layer.weight.cols());
    lg.neighbor_weight = MatrixXd::Zero(layer.neighbor_weight.rows(),
                                        layer.neighbor_weight.cols());
    lg.bias = VectorXd::Zero(layer.bias.size());
    g.layers.push_back(std::move(lg));
  }
  return g;
}

// Adds d(scale * example loss)/d(params) into grads; returns the example loss.
double accumulate(const GcnnModel &model, const Example &ex, double scale,
                  Gradients &grads) {
  Trace t = run_forward(model, ex.graph);
  const auto &layers = model.layers();
  const int n_graph = static_cast<int>(t.graph_out.size());

  MatrixXd delta(1, 1);
  delta(0, 0) = scale * example_loss_grad(model.task(), t.logit, ex.target);

  for (int i = model.num_layers() - 1; i >= n_graph; --i) {
    const int d = i - n_graph;
    scale_by_derivative(delta, t.dense_out[d], layers[i].spec.activation);
    grads.layers[i].weight.noalias() += t.dense_in[d].transpose() * delta;
    grads.layers[i].bias += delta.row(0).transpose();
    MatrixXd prev = delta * layers[i].weight.transpose();
    delta = std::move(prev);
  }

  const Eigen::Index n_atoms = ex.graph.features.rows();
  MatrixXd dh = delta.replicate(n_atoms, 1);
  if (model.readout() == Readout::kMean)
    dh /= static_cast<double>(n_atoms);

  for (int i = n_graph - 1; i >= 0; --i) {
    scale_by_derivative(dh, t.graph_out[i], layers[i].spec.activation);
    grads.layers[i].weight.noalias() += t.graph_in[i].transpose() * dh;
    grads.layers[i].neighbor_weight.noalias() +=
        t.graph_neigh[i].transpose() * dh;
    grads.layers[i].bias += dh.colwise().sum().transpose();
    if (i > 0) {
      MatrixXd through_neigh = dh * layers[i].neighbor_weight.transpose();
      MatrixXd prev = dh * layers[i].weight.transpose();
      prev += neighbor_sum(ex.graph, through_neigh);
      dh = std::move(prev);
    }
  }
  return example_loss(model.task(), t.logit, ex.target);
}

struct AdamState {
  std::vector<LayerGradient> m, v;
  long step = 0;
};

void adam_update(MatrixXd &param, MatrixXd &m, MatrixXd &v,
                 const MatrixXd &g, const TrainConfig &cfg, double bc1,
                 double bc2) {
  m = cfg.adam_beta1 * m + (1.0 - cfg.adam_beta1) * g;
  v = cfg.adam_beta2 * v + (1.0 - cfg.adam_beta2) * g.cwiseAbs2();
  param.array() -= cfg.learning_rate * (m.array() / bc1)
                   / ((v.array() / bc2).sqrt() + cfg.adam_eps);
}

template <class Vec>
void adam_update_vec(Vec &param, Vec &m, Vec &v, const Vec &g,
                     const TrainConfig &cfg, double bc1, double bc2) {
  m = cfg.adam_beta1 * m + (1.0 - cfg.adam_beta1) * g;
  v = cfg.adam_beta2 * v + (1.0 - cfg.adam_beta2) * g.cwiseAbs2();
  param.array() -= cfg.learning_rate * (m.array() / bc1)
                   / ((v.array() / bc2).sqrt() + cfg.adam_eps);
}
}  // namespace

std::string_view to_string(LayerKind kind) {
  return kind == LayerKind::kGraphConv ? "graph_conv" : "dense";
}

std::string_view to_string(Activation act) {
  switch (act) {
  case Activation::kRelu:
    return "relu";
  case Activation::kLinear:
    return "linear";
  case Activation::kSigmoid:
    return "sigmoid";
  }
  return "";
}

std::string_view to_string(Task task) {
  return task == Task::kRegression ? "regression" : "binary_classification";
}

std::string_view to_string(Readout readout) {
  return readout == Readout::kMean ? "mean" : "sum";
}

std::optional<LayerKind> layer_kind_from_string(std::string_view s) {
  if (s == "graph_conv")
    return LayerKind::kGraphConv;
  if (s == "dense")
    return LayerKind::kDense;
  return std::nullopt;
}

std::optional<Activation> activation_from_string(std::string_view s) {
  for (Activation a: { Activation::kRelu, Activation::kLinear,
                       Activation::kSigmoid }) {
    if (to_string(a) == s)
      return a;
  }
  return std::nullopt;
}

std::optional<Task> task_from_string(std::string_view s) {
  if (s == "regression")
    return Task::kRegression;
  if (s == "binary_classification" || s == "classification")
    return Task::kBinaryClassification;
  return std::nullopt;
}

std::optional<Readout> readout_from_string(std::string_view s) {
  if (s == "mean")
    return Readout::kMean;
  if (s == "sum")
    return Readout::kSum;
  return std::nullopt;
}

GcnnModel::GcnnModel(std::vector<Layer> layers, Task task, Readout readout,
                     std::uint64_t seed)
    : layers_(std::move(layers)), task_(task), readout_(readout), seed_(seed) {
  std::vector<LayerSpec> s = specs();
  validate_specs(s);
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const Layer &l = layers_[i];
    bool graph = l.spec.kind == LayerKind::kGraphConv;
    if (l.weight.rows() != l.spec.in_dim || l.weight.cols() != l.spec.out_dim
        || l.bias.size() != l.spec.out_dim
        || (graph
            && (l.neighbor_weight.rows() != l.spec.in_dim
                || l.neighbor_weight.cols() != l.spec.out_dim))
        || (!graph && l.neighbor_weight.size() != 0))
      throw ShapeError("layer " + std::to_string(i)
                       + ": weight tensor shapes do not match its spec");
  }
}

int GcnnModel::num_graph_layers() const {
  int n = 0;
  for (const Layer &l: layers_)
    n += l.spec.kind == LayerKind::kGraphConv ? 1 : 0;
  return n;
}

std::vector<LayerSpec> GcnnModel::specs() const {
  std::vector<LayerSpec> s;
  for (const Layer &l: layers_)
    s.push_back(l.spec);
  return s;
}

void GcnnModel::set_frozen_layers(std::set<int> frozen) {
  for (int i: frozen) {
    if (i < 0 || i >= num_layers())
      throw ShapeError("frozen layer index " + std::to_string(i)
                       + " out of range");
  }
  frozen_ = std::move(frozen);
}

bool GcnnModel::all_finite() const {
  for (const Layer &l: layers_) {
    if (!l.weight.allFinite() || !l.neighbor_weight.allFinite()
        || !l.bias.allFinite())
      return false;
  }
  return true;
}

void validate_specs(std::span<const LayerSpec> specs) {
  if (specs.empty())
    throw ShapeError("model needs at least one layer");
  bool seen_dense = false;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const LayerSpec &s = specs[i];
    if (s.in_dim <= 0 || s.out_dim <= 0)
      throw ShapeError("layer " + std::to_string(i)
                       + ": dimensions must be positive");
    if (s.kind == LayerKind::kDense)
      seen_dense = true;
    else if (seen_dense)
      throw ShapeError("layer " + std::to_string(i)
                       + ": graph_conv layer follows a dense layer");
    if (i > 0 && specs[i - 1].out_dim != s.in_dim)
      throw ShapeError("layer " + std::to_string(i) + ": in_dim "
                       + std::to_string(s.in_dim)
                       + " does not match previous out_dim "
                       + std::to_string(specs[i - 1].out_dim));
  }
  if (specs.back().kind != LayerKind::kDense || specs.back().out_dim != 1)
    throw ShapeError("last layer must be dense with out_dim 1");
}

GcnnModel build_model(std::span<const LayerSpec> specs, Task task,
                      Readout readout, std::uint64_t seed) {
  validate_specs(specs);
  Rng rng(seed);
  auto glorot = [&](int in, int out) {
    double limit = std::sqrt(6.0 / (in + out));
    MatrixXd w(in, out);
    for (int r = 0; r < in; ++r) {
      for (int c = 0; c < out; ++c)
        w(r, c) = uniform(rng, -limit, limit);
    }
    return w;
  };
  std::vector<Layer> layers;
  for (const LayerSpec &s: specs) {
    Layer l;
    l.spec = s;
    l.weight = glorot(s.in_dim, s.out_dim);
    if (s.kind == LayerKind::kGraphConv)
      l.neighbor_weight = glorot(s.in_dim, s.out_dim);
    l.bias = VectorXd::Zero(s.out_dim);
    layers.push_back(std::move(l));
  }
  return GcnnModel(std::move(layers), task, readout, seed);
}

std::vector<LayerSpec> default_architecture(int graph_width, int dense_width) {
  return {
    { LayerKind::kGraphConv, kAtomFeatureDim, graph_width, Activation::kRelu },
    { LayerKind::kGraphConv, graph_width, graph_width, Activation::kRelu },
    { LayerKind::kDense, graph_width, dense_width, Activation::kRelu },
    { LayerKind::kDense, dense_width, dense_width / 2, Activation::kRelu },
    { LayerKind::kDense, dense_width / 2, 1, Activation::kLinear },
  };
}

GraphInput make_graph_input(const MolecularGraph &mol) {
  GraphInput g;
  g.features = atom_feature_matrix(mol);
  g.neighbors.resize(mol.num_atoms());
  for (int v = 0; v < mol.num_atoms(); ++v) {
    for (const Neighbor &nb: mol.neighbors(v))
      g.neighbors[v].push_back(nb.atom);
  }
  return g;
}

double forward_logit(const GcnnModel &model, const GraphInput &graph) {
  return run_forward(model, graph).logit;
}

double forward(const GcnnModel &model, const GraphInput &graph) {
  double logit = forward_logit(model, graph);
  return model.task() == Task::kRegression ? logit : sigmoid(logit);
}

double forward(const GcnnModel &model, const MolecularGraph &mol) {
  return forward(model, make_graph_input(mol));
}

Eigen::MatrixXd graph_layer_output(const GcnnModel &model,
                                   const GraphInput &graph, int layer) {
  Trace t = run_forward(model, graph);
  if (layer < 0 || layer >= static_cast<int>(t.graph_out.size()))
    throw ShapeError("graph_layer_output: no graph layer "
                     + std::to_string(layer));
  return t.graph_out[layer];
}

Eigen::VectorXd pooled_embedding(const GcnnModel &model,
                                 const GraphInput &graph) {
  Trace t = run_forward(model, graph);
  return t.dense_in.front().row(0).transpose();
}

double loss(const GcnnModel &model, std::span<const Example> batch) {
  check_targets(model, batch);
  double total = 0;
  for (const Example &ex: batch)
    total += example_loss(model.task(), forward_logit(model, ex.graph),
                          ex.target);
  return total / static_cast<double>(batch.size());
}

Gradients gradients(const GcnnModel &model, std::span<const Example> batch) {
  check_targets(model, batch);
  Gradients g = zero_gradients(model);
  const double scale = 1.0 / static_cast<double>(batch.size());
  double total = 0;
  for (const Example &ex: batch)
    total += accumulate(model, ex, scale, g);
  g.loss = total * scale;
  return g;
}

void TrainConfig::validate() const {
  if (epochs < 0)
    throw Error("TrainConfig: epochs must be >= 0");
  if (batch_size < 1)
    throw Error("TrainConfig: batch_size must be >= 1");
  if (!(learning_rate > 0))
    throw Error("TrainConfig: learning_rate must be > 0");
  if (!(adam_beta1 > 0 && adam_beta1 < 1 && adam_beta2 > 0 && adam_beta2 < 1))
    throw Error("TrainConfig: Adam betas must lie in (0, 1)");
  if (!(adam_eps > 0))
    throw Error("TrainConfig: adam_eps must be > 0");
}

TrainResult train(GcnnModel model, std::span<const Example> dataset,
                  const TrainConfig &config) {
  config.validate();
  if (dataset.empty())
    throw Error("train: empty dataset");
  check_targets(model, dataset);

  std::set<int> frozen = model.frozen_layers();
  for (int i: config.frozen_layers) {
    if (i < 0 || i >= model.num_layers())
      throw ShapeError("frozen layer index " + std::to_string(i)
                       + " out of range");
    frozen.insert(i);
  }

  TrainResult result;
  AdamState adam;
  adam.m = zero_gradients(model).layers;
  adam.v = adam.m;

  Rng rng(config.seed);
  std::vector<std::size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), std::size_t { 0 });
  std::vector<Example> batch;

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    shuffle(order, rng);
    double epoch_loss = 0;
    for (std::size_t start = 0; start < order.size();
         start += static_cast<std::size_t>(config.batch_size)) {
      std::size_t stop =
          std::min(order.size(), start + static_cast<std::size_t>(config.batch_size));
      Gradients g = zero_gradients(model);
      const double scale = 1.0 / static_cast<double>(stop - start);
      double batch_loss = 0;
      for (std::size_t k = start; k < stop; ++k)
        batch_loss += accumulate(model, dataset[order[k]], scale, g);
      epoch_loss += batch_loss;

      ++adam.step;
      const double bc1 = 1.0 - std::pow(config.adam_beta1, adam.step);
      const double bc2 = 1.0 - std::pow(config.adam_beta2, adam.step);
      auto &layers = model.mutable_layers();
      for (int i = 0; i < model.num_layers(); ++i) {
        if (frozen.count(i))
          continue;
        adam_update(layers[i].weight, adam.m[i].weight, adam.v[i].weight,
                    g.layers[i].weight, config, bc1, bc2);
        if (layers[i].neighbor_weight.size() > 0)
          adam_update(layers[i].neighbor_weight, adam.m[i].neighbor_weight,
                      adam.v[i].neighbor_weight, g.layers[i].neighbor_weight,
                      config, bc1, bc2);
        adam_update_vec(layers[i].bias, adam.m[i].bias, adam.v[i].bias,
                        g.layers[i].bias, config, bc1, bc2);
      }
    }
    epoch_loss /= static_cast<double>(order.size());
    if (!std::isfinite(epoch_loss) || !model.all_finite())
      throw DivergenceError(epoch, "training diverged at epoch "
                                       + std::to_string(epoch));
    result.loss_history.push_back(epoch_loss);
  }
  result.model = std::move(model);
  return result;
}

std::vector<double> predict(const GcnnModel &model,
                            std::span<const GraphInput> graphs) {
  std::vector<double> out;
  out.reserve(graphs.size());
  for (const GraphInput &g: graphs)
    out.push_back(forward(model, g));
  return out;
}

}  // namespace molxfer
