//
// Project molxfer - Copyright 2026 The molxfer Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef MOLXFER_TRANSFER_H_
#define MOLXFER_TRANSFER_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "molxfer/neuralnet.h"

namespace molxfer {

inline constexpr int kArchiveFormatVersion = 1;

struct ArchiveLayer {
  LayerSpec spec;
  std::vector<double> weight;           // row-major in x out (w_self or w)
  std::vector<double> neighbor_weight;  // graph_conv only
  std::vector<double> bias;
};

// Donor training metadata. The named fields are always written; `extra`
// carries any other string-valued keys verbatim.
struct ArchiveMetadata {
  std::string donor_dataset;
  std::uint64_t seed = 0;
  int epochs = 0;
  Task task = Task::kRegression;
  Readout readout = Readout::kMean;
  std::map<std::string, std::string> extra;

  bool operator==(const ArchiveMetadata &) const = default;
};

struct WeightArchive {
  int format_version = kArchiveFormatVersion;
  std::vector<ArchiveLayer> layers;
  ArchiveMetadata metadata;
};

class VersionError: public Error {
public:
  using Error::Error;
};

class ShapeIncompatible: public Error {
public:
  ShapeIncompatible(int layer, const std::string &what)
      : Error(what), layer_(layer) { }
  int layer() const { return layer_; }

private:
  int layer_;
};

class ArchiveFormatError: public Error {
public:
  using Error::Error;
};

// Task and readout in `metadata` are overwritten from the model.
WeightArchive export_weights(const GcnnModel &model, ArchiveMetadata metadata);

nlohmann::json archive_to_json(const WeightArchive &archive);
// Throws VersionError or ArchiveFormatError.
WeightArchive archive_from_json(const nlohmann::json &doc);

void write_archive(const WeightArchive &archive,
                   const std::filesystem::path &path);
WeightArchive read_archive(const std::filesystem::path &path);

// Rebuilds the archived model verbatim.
GcnnModel model_from_archive(const WeightArchive &archive);

enum class TransferMode { kFeatureExtraction, kFineTuning };

std::string_view to_string(TransferMode mode);
std::optional<TransferMode> transfer_mode_from_string(std::string_view s);

struct TransferPlan {
  std::set<int> copied_layers;
  TransferMode mode = TransferMode::kFeatureExtraction;
  bool reinit_head = false;
};

// Copies exactly the graph_conv layers; the head is reinitialized when the
// donor and acceptor tasks differ.
TransferPlan default_plan(const WeightArchive &archive, Task acceptor_task,
                          TransferMode mode = TransferMode::kFeatureExtraction);

struct AcceptorSpec {
  std::vector<LayerSpec> layers;
  Task task = Task::kRegression;
  Readout readout = Readout::kMean;
};

// Builds a fresh acceptor from seed and overwrites the copied layers with
// donor tensors. In feature_extraction mode the returned model's frozen set
// is the copied set (minus a reinitialized head). Throws ShapeIncompatible
// naming the first mismatched layer, or VersionError.
GcnnModel import_weights(const WeightArchive &archive,
                         const AcceptorSpec &target, const TransferPlan &plan,
                         std::uint64_t seed);

// import_weights followed by train(). Fine-tuning trains every layer.
TrainResult transfer_train(const WeightArchive &archive,
                           std::span<const Example> acceptor,
                           const AcceptorSpec &target,
                           const TransferPlan &plan,
                           const TrainConfig &config);

}  // namespace molxfer

#endif  // MOLXFER_TRANSFER_H_
