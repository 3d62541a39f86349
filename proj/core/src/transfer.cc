//
// Project molxfer - Copyright 2026 The molxfer Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "molxfer/transfer.h"

#include <fstream>
#include <sstream>
#include <string>
#include <utility>

namespace molxfer {
namespace {
using nlohmann::json;

std::vector<double> flatten(const Eigen::MatrixXd &m) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(m.size()));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      out.push_back(m(r, c));
  }
  return out;
}

Eigen::MatrixXd unflatten(const std::vector<double> &v, int rows, int cols) {
  Eigen::MatrixXd m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c)
      m(r, c) = v[static_cast<std::size_t>(r) * cols + c];
  }
  return m;
}

Layer layer_from_archive(const ArchiveLayer &al) {
  Layer l;
  l.spec = al.spec;
  l.weight = unflatten(al.weight, al.spec.in_dim, al.spec.out_dim);
  if (al.spec.kind == LayerKind::kGraphConv)
    l.neighbor_weight =
        unflatten(al.neighbor_weight, al.spec.in_dim, al.spec.out_dim);
  l.bias = Eigen::Map<const Eigen::VectorXd>(al.bias.data(),
                                             static_cast<Eigen::Index>(al.bias.size()));
  return l;
}

template <class T>
T require(const json &obj, const char *key, const std::string &where) {
  if (!obj.contains(key))
    throw ArchiveFormatError(where + ": missing key '" + key + "'");
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception &e) {
    throw ArchiveFormatError(where + ": bad value for '" + key
                             + "': " + e.what());
  }
}

void check_length(const std::vector<double> &v, std::size_t expected,
                  const std::string &what) {
  if (v.size() != expected)
    throw ArchiveFormatError(what + " has " + std::to_string(v.size())
                             + " values, expected "
                             + std::to_string(expected));
}
}  // namespace

WeightArchive export_weights(const GcnnModel &model, ArchiveMetadata metadata) {
  WeightArchive archive;
  metadata.task = model.task();
  metadata.readout = model.readout();
  archive.metadata = std::move(metadata);
  for (const Layer &l: model.layers()) {
    ArchiveLayer al;
    al.spec = l.spec;
    al.weight = flatten(l.weight);
    if (l.spec.kind == LayerKind::kGraphConv)
      al.neighbor_weight = flatten(l.neighbor_weight);
    al.bias.assign(l.bias.data(), l.bias.data() + l.bias.size());
    archive.layers.push_back(std::move(al));
  }
  return archive;
}

json archive_to_json(const WeightArchive &archive) {
  json doc;
  doc["format_version"] = archive.format_version;
  json layers = json::array();
  for (const ArchiveLayer &al: archive.layers) {
    json entry;
    entry["kind"] = std::string(to_string(al.spec.kind));
    entry["in_dim"] = al.spec.in_dim;
    entry["out_dim"] = al.spec.out_dim;
    entry["activation"] = std::string(to_string(al.spec.activation));
    if (al.spec.kind == LayerKind::kGraphConv) {
      entry["w_self"] = al.weight;
      entry["w_neigh"] = al.neighbor_weight;
    } else {
      entry["w"] = al.weight;
    }
    entry["b"] = al.bias;
    layers.push_back(std::move(entry));
  }
  doc["layers"] = std::move(layers);

  json meta = json::object();
  for (const auto &[k, v]: archive.metadata.extra)
    meta[k] = v;
  meta["donor_dataset"] = archive.metadata.donor_dataset;
  meta["seed"] = archive.metadata.seed;
  meta["epochs"] = archive.metadata.epochs;
  meta["task"] = std::string(to_string(archive.metadata.task));
  meta["readout"] = std::string(to_string(archive.metadata.readout));
  doc["metadata"] = std::move(meta);
  return doc;
}

WeightArchive archive_from_json(const json &doc) {
  if (!doc.is_object())
    throw ArchiveFormatError("archive: top level must be an object");
  WeightArchive archive;
  archive.format_version = require<int>(doc, "format_version", "archive");
  if (archive.format_version != kArchiveFormatVersion)
    throw VersionError("archive format_version "
                       + std::to_string(archive.format_version)
                       + " is not supported (expected "
                       + std::to_string(kArchiveFormatVersion) + ")");

  const json &layers = doc.contains("layers") ? doc.at("layers") : json();
  if (!layers.is_array())
    throw ArchiveFormatError("archive: 'layers' must be an array");
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const json &entry = layers[i];
    std::string where = "archive layer " + std::to_string(i);
    ArchiveLayer al;
    auto kind = layer_kind_from_string(require<std::string>(entry, "kind", where));
    auto act = activation_from_string(
        require<std::string>(entry, "activation", where));
    if (!kind || !act)
      throw ArchiveFormatError(where + ": unknown kind or activation");
    al.spec = { *kind, require<int>(entry, "in_dim", where),
                require<int>(entry, "out_dim", where), *act };
    if (al.spec.in_dim <= 0 || al.spec.out_dim <= 0)
      throw ArchiveFormatError(where + ": dimensions must be positive");
    const std::size_t cells =
        static_cast<std::size_t>(al.spec.in_dim) * al.spec.out_dim;
    if (*kind == LayerKind::kGraphConv) {
      al.weight = require<std::vector<double>>(entry, "w_self", where);
      al.neighbor_weight = require<std::vector<double>>(entry, "w_neigh", where);
      check_length(al.neighbor_weight, cells, where + " w_neigh");
      check_length(al.weight, cells, where + " w_self");
    } else {
      al.weight = require<std::vector<double>>(entry, "w", where);
      check_length(al.weight, cells, where + " w");
    }
    al.bias = require<std::vector<double>>(entry, "b", where);
    check_length(al.bias, static_cast<std::size_t>(al.spec.out_dim),
                 where + " b");
    archive.layers.push_back(std::move(al));
  }

  if (!doc.contains("metadata") || !doc.at("metadata").is_object())
    throw ArchiveFormatError("archive: 'metadata' must be an object");
  const json &meta = doc.at("metadata");
  ArchiveMetadata &m = archive.metadata;
  for (const auto &[k, v]: meta.items()) {
    if (k == "donor_dataset") {
      m.donor_dataset = v.get<std::string>();
    } else if (k == "seed") {
      m.seed = v.get<std::uint64_t>();
    } else if (k == "epochs") {
      m.epochs = v.get<int>();
    } else if (k == "task") {
      auto t = task_from_string(v.get<std::string>());
      if (!t)
        throw ArchiveFormatError("archive metadata: unknown task");
      m.task = *t;
    } else if (k == "readout") {
      auto r = readout_from_string(v.get<std::string>());
      if (!r)
        throw ArchiveFormatError("archive metadata: unknown readout");
      m.readout = *r;
    } else if (v.is_string()) {
      m.extra[k] = v.get<std::string>();
    } else {
      m.extra[k] = v.dump();
    }
  }
  return archive;
}

void write_archive(const WeightArchive &archive,
                   const std::filesystem::path &path) {
  std::ofstream out(path);
  if (!out)
    throw Error("cannot write archive to " + path.string());
  out << archive_to_json(archive).dump(1) << '\n';
}

WeightArchive read_archive(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in)
    throw Error("cannot read archive " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error &e) {
    throw ArchiveFormatError("archive " + path.string()
                             + " is not valid JSON: " + e.what());
  }
  return archive_from_json(doc);
}

GcnnModel model_from_archive(const WeightArchive &archive) {
  if (archive.format_version != kArchiveFormatVersion)
    throw VersionError("unsupported archive version");
  std::vector<Layer> layers;
  for (const ArchiveLayer &al: archive.layers)
    layers.push_back(layer_from_archive(al));
  return GcnnModel(std::move(layers), archive.metadata.task,
                   archive.metadata.readout, archive.metadata.seed);
}

std::string_view to_string(TransferMode mode) {
  return mode == TransferMode::kFeatureExtraction ? "feature_extraction"
                                                  : "fine_tuning";
}

std::optional<TransferMode> transfer_mode_from_string(std::string_view s) {
  if (s == "feature_extraction")
    return TransferMode::kFeatureExtraction;
  if (s == "fine_tuning")
    return TransferMode::kFineTuning;
  return std::nullopt;
}

TransferPlan default_plan(const WeightArchive &archive, Task acceptor_task,
                          TransferMode mode) {
  TransferPlan plan;
  plan.mode = mode;
  for (std::size_t i = 0; i < archive.layers.size(); ++i) {
    if (archive.layers[i].spec.kind == LayerKind::kGraphConv)
      plan.copied_layers.insert(static_cast<int>(i));
  }
  plan.reinit_head = archive.metadata.task != acceptor_task;
  return plan;
}

GcnnModel import_weights(const WeightArchive &archive,
                         const AcceptorSpec &target, const TransferPlan &plan,
                         std::uint64_t seed) {
  if (archive.format_version != kArchiveFormatVersion)
    throw VersionError("archive format_version "
                       + std::to_string(archive.format_version)
                       + " is not supported");
  if (plan.copied_layers.empty())
    throw Error("transfer plan copies no layers");

  GcnnModel model = build_model(target.layers, target.task, target.readout, seed);
  const int head = model.num_layers() - 1;
  const bool reinit_head = plan.reinit_head || archive.metadata.task != target.task;

  for (int i: plan.copied_layers) {
    if (i < 0 || i >= static_cast<int>(archive.layers.size())
        || i >= model.num_layers())
      throw ShapeIncompatible(i, "layer " + std::to_string(i)
                                     + " is missing from the archive or the "
                                       "acceptor architecture");
    const LayerSpec &donor = archive.layers[i].spec;
    const LayerSpec &acc = model.layer(i).spec;
    if (donor.kind != acc.kind || donor.in_dim != acc.in_dim
        || donor.out_dim != acc.out_dim)
      throw ShapeIncompatible(
          i, "layer " + std::to_string(i) + ": donor "
                 + std::string(to_string(donor.kind)) + " "
                 + std::to_string(donor.in_dim) + "x"
                 + std::to_string(donor.out_dim) + " vs acceptor "
                 + std::string(to_string(acc.kind)) + " "
                 + std::to_string(acc.in_dim) + "x"
                 + std::to_string(acc.out_dim));
  }

  std::set<int> copied;
  auto &layers = model.mutable_layers();
  for (int i: plan.copied_layers) {
    if (i == head && reinit_head)
      continue;
    Layer donor = layer_from_archive(archive.layers[i]);
    donor.spec.activation = layers[i].spec.activation;
    layers[i] = std::move(donor);
    copied.insert(i);
  }
  model.set_frozen_layers(plan.mode == TransferMode::kFeatureExtraction
                              ? copied
                              : std::set<int> {});
  return model;
}

TrainResult transfer_train(const WeightArchive &archive,
                           std::span<const Example> acceptor,
                           const AcceptorSpec &target,
                           const TransferPlan &plan,
                           const TrainConfig &config) {
  if (acceptor.empty())
    throw Error("transfer_train: empty acceptor dataset");
  GcnnModel model = import_weights(archive, target, plan, config.seed);
  TrainConfig cfg = config;
  if (plan.mode == TransferMode::kFineTuning)
    cfg.frozen_layers.clear();
  return train(std::move(model), acceptor, cfg);
}

}  // namespace molxfer
