//
// Project molxfer - Copyright 2026 The molxfer Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "molxfer/experiment.h"

namespace {
constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitUsage = 2;
constexpr int kExitFailedCells = 3;

struct CommonOptions {
  std::string config;
  std::vector<std::string> sets;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<int> jobs;
  std::optional<std::string> donor, acceptor, donor_archive, dataset;
  bool quiet = false;
};

void add_common(CLI::App *cmd, CommonOptions &o) {
  cmd->add_option("-c,--config", o.config, "key = value config file")
      ->check(CLI::ExistingFile);
  cmd->add_option("--set", o.sets, "override a config key (key=value)");
  cmd->add_option("--seed", o.seed, "master seed");
  cmd->add_option("--out-dir", o.out_dir, "output directory");
  cmd->add_option("--jobs", o.jobs, "worker threads for experiment cells");
  cmd->add_option("--donor", o.donor, "donor CSV or gen:... spec");
  cmd->add_option("--acceptor", o.acceptor, "acceptor CSV or gen:... spec");
  cmd->add_option("--donor-archive", o.donor_archive, "pre-trained donor archive");
  cmd->add_option("--dataset", o.dataset, "input CSV or gen:... spec");
  cmd->add_flag("-q,--quiet", o.quiet, "suppress the summary line");
}

molxfer::ExperimentConfig build_config(const CommonOptions &o) {
  molxfer::ExperimentConfig cfg;
  if (!o.config.empty())
    cfg = molxfer::parse_config_file(o.config);
  auto apply = [&](const char *key, const std::optional<std::string> &v) {
    if (v)
      cfg.set(key, *v);
  };
  apply("donor", o.donor);
  apply("acceptor", o.acceptor);
  apply("donor_archive", o.donor_archive);
  apply("dataset", o.dataset);
  for (const std::string &kv: o.sets) {
    std::size_t eq = kv.find('=');
    if (eq == std::string::npos)
      throw molxfer::ConfigError("--set expects key=value, got '" + kv + "'");
    cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (o.seed)
    cfg.seed = *o.seed;
  if (o.out_dir)
    cfg.out_dir = *o.out_dir;
  if (o.jobs)
    cfg.jobs = *o.jobs;
  return cfg;
}
}  // namespace

int main(int argc, char **argv) {
  CLI::App app { "molxfer: transfer learning experiments for molecular "
                 "property models" };
  app.set_version_flag("--version", std::string(molxfer::toolkit_version()));
  app.require_subcommand(1);

  CommonOptions opts;
  for (const std::string &name: molxfer::command_names()) {
    CLI::App *cmd = app.add_subcommand(name);
    add_common(cmd, opts);
  }
  app.get_subcommand("train-donor")->description("train and export a donor model");
  app.get_subcommand("compare")->description(
      "pure GCNN vs transfer vs random forest on shared splits");
  app.get_subcommand("donor-size-sweep")->description(
      "transfer quality against nested donor subsample sizes");
  app.get_subcommand("rank-splitters")->description(
      "rank-sum table of splitting properties");
  app.get_subcommand("ad-report")->description(
      "applicability-domain coverage with and without the donor");
  app.get_subcommand("pca")->description(
      "joint ECFP4 PCA projection of two datasets with box filters");
  app.get_subcommand("generate")->description("write a synthetic dataset");
  app.get_subcommand("featurize")->description(
      "descriptor and fingerprint tables for a dataset");

  CLI11_PARSE(app, argc, argv);

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    molxfer::ExperimentConfig cfg = build_config(opts);
    nlohmann::ordered_json report = molxfer::run_command(command, cfg);
    const int failed = molxfer::failed_cell_count(report);
    if (!opts.quiet) {
      std::string name = command;
      std::replace(name.begin(), name.end(), '-', '_');
      std::cout << command << ": report "
                << (cfg.out_dir / (name + "_report.json")).string() << ", "
                << report["cells"].size() << " cells, " << failed << " failed\n";
    }
    return failed == 0 ? kExitOk : kExitFailedCells;
  } catch (const molxfer::ConfigError &e) {
    std::cerr << "molxfer " << command << ": config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception &e) {
    std::cerr << "molxfer " << command << ": " << e.what() << '\n';
    return kExitError;
  }
}
