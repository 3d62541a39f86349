//
// Project molxfer - Copyright 2026 The molxfer Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef MOLXFER_EXPERIMENT_H_
#define MOLXFER_EXPERIMENT_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "molxfer/datagen.h"
#include "molxfer/error.h"
#include "molxfer/neuralnet.h"
#include "molxfer/sampling.h"
#include "molxfer/transfer.h"

namespace molxfer {

std::string_view toolkit_version();

class ConfigError: public Error {
public:
  using Error::Error;
};

// "gen:n=2000,seed=1,formula=donor_default,noise=0,max_atoms=12,prefix=m"
struct GeneratorSpec {
  int n = 1000;
  std::uint64_t seed = 0;
  Formula formula = Formula::kDonorDefault;
  double noise_sd = 0;
  int max_heavy_atoms = 12;
  std::string id_prefix = "m";
};

bool is_generator_spec(std::string_view source);
GeneratorSpec parse_generator_spec(std::string_view source);

// A CSV path or a generator spec.
Dataset load_dataset(const std::string &source,
                     Task task = Task::kRegression);

struct NamedBox {
  std::string name;
  Box box;
};

struct ExperimentConfig {
  std::string donor;
  std::string acceptor;
  Task acceptor_task = Task::kRegression;
  std::string donor_archive;  // optional pre-trained donor
  std::string dataset;        // generate / featurize input
  std::string pca_a, pca_b;

  std::vector<int> train_sizes = { 10, 20, 50, 100 };
  std::vector<int> donor_sizes = { 100, 500, 2000 };
  std::vector<SplitProperty> split_properties = { SplitProperty::kEndpoint };
  TransferMode transfer_mode = TransferMode::kFeatureExtraction;
  std::vector<std::uint64_t> seeds = { 0, 1, 2, 3, 4 };
  std::uint64_t seed = 0;

  int epochs = 300;
  int donor_epochs = 300;
  int batch_size = 32;
  double learning_rate = 0.005;
  int graph_width = 32;
  int dense_width = 32;
  Readout readout = Readout::kMean;
  double holdout_fraction = 0.2;
  int rf_trees = 100;
  int ad_k = 5;

  std::vector<NamedBox> boxes;
  int box_max_n = 10000;
  int fingerprint_radius = 2;
  int fingerprint_bits = 2048;

  std::filesystem::path out_dir = "molxfer-out";
  int jobs = 1;

  // Applies one key=value assignment. Throws ConfigError.
  void set(std::string_view key, std::string_view value);
  void validate() const;
  nlohmann::ordered_json to_json() const;
};

// Grammar: one `key = value` per line; '#' starts a comment; blank lines
// ignored; lists are comma-separated.
ExperimentConfig parse_config(std::istream &in);
ExperimentConfig parse_config_file(const std::filesystem::path &path);

struct DonorResult {
  WeightArchive archive;
  std::vector<std::string> train_ids;
  std::vector<std::string> holdout_ids;
  std::optional<double> holdout_r2;
  std::vector<double> loss_history;
};

// Trains the default architecture on a seeded (1 - holdout) share of the donor
// and scores the rest.
DonorResult train_donor(const Dataset &donor, const ExperimentConfig &cfg);

// Donor training ids for the configured donor and seed (the same partition
// train_donor uses).
std::vector<std::string> donor_train_ids(const Dataset &donor,
                                         const ExperimentConfig &cfg);

std::string cell_id(int train_size, SplitProperty prop, std::uint64_t seed);

// Each returns the report written to cfg.out_dir and writes any artifacts.
nlohmann::ordered_json cmd_train_donor(const ExperimentConfig &cfg);
nlohmann::ordered_json cmd_compare(const ExperimentConfig &cfg);
nlohmann::ordered_json cmd_donor_size_sweep(const ExperimentConfig &cfg);
nlohmann::ordered_json cmd_rank_splitters(const ExperimentConfig &cfg);
nlohmann::ordered_json cmd_ad_report(const ExperimentConfig &cfg);
nlohmann::ordered_json cmd_pca(const ExperimentConfig &cfg);
nlohmann::ordered_json cmd_generate(const ExperimentConfig &cfg);
nlohmann::ordered_json cmd_featurize(const ExperimentConfig &cfg);

// Dispatch by subcommand name ("train-donor", "compare", ...).
nlohmann::ordered_json run_command(std::string_view name,
                                   const ExperimentConfig &cfg);
const std::vector<std::string> &command_names();

int failed_cell_count(const nlohmann::ordered_json &report);

// Report copy without the timestamp field, for reproducibility checks.
nlohmann::ordered_json strip_timestamp(nlohmann::ordered_json report);

}  // namespace molxfer

#endif  // MOLXFER_EXPERIMENT_H_
