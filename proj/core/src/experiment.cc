//
// Project molxfer - Copyright 2026 The molxfer Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "molxfer/experiment.h"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <map>
#include <thread>
#include <unordered_map>

#include "molxfer/analysis.h"
#include "molxfer/appdomain.h"
#include "molxfer/baseline.h"
#include "molxfer/fingerprint.h"
#include "molxfer/random.h"

#ifndef MOLXFER_VERSION
#define MOLXFER_VERSION "0.0.0"
#endif

namespace molxfer {
namespace {
using ojson = nlohmann::ordered_json;

constexpr int kReportSchemaVersion = 1;

// Reference scales the desk-scale defaults stand in for.
constexpr int kReferenceDonorSize = 1500000;
const std::vector<int> kReferenceDonorSizes = { 1000, 10000, 100000, 1500000 };
const std::vector<int> kReferenceTrainSizes = { 10, 20, 50, 100 };

std::string utc_timestamp() {
  std::time_t t = std::chrono::system_clock::to_time_t(
      std::chrono::system_clock::now());
  std::tm tm {};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

ojson report_header(std::string_view command, const ExperimentConfig &cfg) {
  ojson r;
  r["schema_version"] = kReportSchemaVersion;
  r["toolkit"] = { { "name", "molxfer" }, { "version", toolkit_version() } };
  r["command"] = command;
  r["timestamp"] = utc_timestamp();
  r["config"] = cfg.to_json();
  r["cells"] = ojson::array();
  r["failed_cells"] = 0;
  return r;
}

void finish_report(ojson &report, std::string_view command,
                   const ExperimentConfig &cfg) {
  int failed = 0;
  for (const auto &cell: report["cells"]) {
    if (cell["status"] != "ok")
      ++failed;
  }
  report["failed_cells"] = failed;
  std::filesystem::create_directories(cfg.out_dir);
  std::string name(command);
  std::replace(name.begin(), name.end(), '-', '_');
  std::ofstream out(cfg.out_dir / (name + "_report.json"));
  out << report.dump(2) << '\n';
  if (!out)
    throw Error("cannot write report to " + cfg.out_dir.string());
}

template <class F>
void parallel_for(std::size_t n, int jobs, F &&fn) {
  if (jobs <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i)
      fn(i);
    return;
  }
  std::atomic<std::size_t> next { 0 };
  std::vector<std::jthread> pool;
  const int workers = std::min<int>(jobs, static_cast<int>(n));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++)
        fn(i);
    });
  }
}

double median(std::vector<double> v) {
  if (v.empty())
    return std::nan("");
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

ojson number_or_null(double v) {
  return std::isfinite(v) ? ojson(v) : ojson(nullptr);
}

std::vector<std::string> ids_of(const Dataset &ds) {
  std::vector<std::string> ids;
  ids.reserve(ds.size());
  for (const Record &r: ds.records)
    ids.push_back(r.id);
  return ids;
}

// Parsed acceptor records shared by every cell.
struct Prepared {
  Dataset ds;
  std::unordered_map<std::string, int> index;
  std::vector<GraphInput> graphs;
  std::vector<Fingerprint> ecfp6;
  std::vector<Fingerprint> ecfp4;

  std::vector<int> rows(std::span<const std::string> ids) const {
    std::vector<int> out;
    out.reserve(ids.size());
    for (const std::string &id: ids)
      out.push_back(index.at(id));
    return out;
  }
  std::vector<Example> examples(std::span<const int> rows) const {
    std::vector<Example> out;
    out.reserve(rows.size());
    for (int r: rows)
      out.push_back({ graphs[r], ds.records[r].target });
    return out;
  }
  std::vector<double> targets(std::span<const int> rows) const {
    std::vector<double> out;
    for (int r: rows)
      out.push_back(ds.records[r].target);
    return out;
  }
};

Prepared prepare(Dataset ds, bool want_ecfp4 = false) {
  Prepared p;
  p.graphs.reserve(ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const Record &r = ds.records[i];
    try {
      MolecularGraph mol = parse_smiles(r.smiles);
      p.graphs.push_back(make_graph_input(mol));
      p.ecfp6.push_back(ecfp(mol, kEcfp6Radius));
      if (want_ecfp4)
        p.ecfp4.push_back(ecfp(mol, kEcfp4Radius));
    } catch (const Error &e) {
      throw DatasetError(r.id, "record '" + r.id + "': " + e.what());
    }
    p.index.emplace(r.id, static_cast<int>(i));
  }
  p.ds = std::move(ds);
  return p;
}

std::vector<Example> examples_of(const Dataset &ds) {
  std::vector<Example> out;
  out.reserve(ds.size());
  for (const Record &r: ds.records) {
    try {
      out.push_back({ make_graph_input(parse_smiles(r.smiles)), r.target });
    } catch (const Error &e) {
      throw DatasetError(r.id, "record '" + r.id + "': " + e.what());
    }
  }
  return out;
}

std::vector<LayerSpec> architecture(const ExperimentConfig &cfg) {
  return default_architecture(cfg.graph_width, cfg.dense_width);
}

TrainConfig train_config(const ExperimentConfig &cfg, int epochs,
                         std::uint64_t seed) {
  TrainConfig tc;
  tc.epochs = epochs;
  tc.batch_size = cfg.batch_size;
  tc.learning_rate = cfg.learning_rate;
  tc.seed = seed;
  return tc;
}

struct TrainedDonor {
  WeightArchive archive;
  std::vector<double> loss_history;
};

TrainedDonor fit_donor(const Dataset &train_set, const ExperimentConfig &cfg,
                       const std::string &source) {
  std::vector<Example> ex = examples_of(train_set);
  GcnnModel model = build_model(architecture(cfg), Task::kRegression, cfg.readout,
                                derive_seed(cfg.seed, "donor_model"));
  TrainResult res = train(std::move(model), ex,
                          train_config(cfg, cfg.donor_epochs,
                                       derive_seed(cfg.seed, "donor_train")));
  ArchiveMetadata meta;
  meta.donor_dataset = source;
  meta.seed = cfg.seed;
  meta.epochs = cfg.donor_epochs;
  meta.task = Task::kRegression;
  meta.readout = cfg.readout;
  meta.extra["n_train"] = std::to_string(train_set.size());
  return { export_weights(res.model, std::move(meta)), std::move(res.loss_history) };
}

struct DonorSource {
  WeightArchive archive;
  std::string origin;  // "archive" or "trained"
  std::optional<double> holdout_r2;
};

DonorSource obtain_donor(const ExperimentConfig &cfg) {
  if (!cfg.donor_archive.empty()) {
    if (!std::filesystem::exists(cfg.donor_archive))
      throw ConfigError("donor archive '" + cfg.donor_archive + "' does not exist");
    return { read_archive(cfg.donor_archive), "archive", std::nullopt };
  }
  if (cfg.donor.empty())
    throw ConfigError("either donor or donor_archive must be configured");
  DonorResult res = train_donor(load_dataset(cfg.donor), cfg);
  return { std::move(res.archive), "trained", res.holdout_r2 };
}

bool same_bits(double a, double b) {
  return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b);
}

bool copied_layers_unchanged(const GcnnModel &model, const WeightArchive &archive,
                             const std::set<int> &copied) {
  for (int l: copied) {
    const Layer &layer = model.layer(l);
    const ArchiveLayer &src = archive.layers[l];
    const int in = layer.spec.in_dim, out = layer.spec.out_dim;
    for (int i = 0; i < in; ++i) {
      for (int j = 0; j < out; ++j) {
        if (!same_bits(layer.weight(i, j), src.weight[i * out + j]))
          return false;
        if (layer.spec.kind == LayerKind::kGraphConv
            && !same_bits(layer.neighbor_weight(i, j),
                          src.neighbor_weight[i * out + j]))
          return false;
      }
    }
    for (int j = 0; j < out; ++j) {
      if (!same_bits(layer.bias[j], src.bias[j]))
        return false;
    }
  }
  return true;
}

struct CellKey {
  int train_size;
  SplitProperty prop;
  std::uint64_t seed;

  std::string id() const { return cell_id(train_size, prop, seed); }
};

std::vector<CellKey> cell_grid(const ExperimentConfig &cfg) {
  std::vector<CellKey> keys;
  for (int ts: cfg.train_sizes)
    for (SplitProperty p: cfg.split_properties)
      for (std::uint64_t s: cfg.seeds)
        keys.push_back({ ts, p, s });
  return keys;
}

std::uint64_t cell_seed(const ExperimentConfig &cfg, const CellKey &key) {
  return derive_seed(cfg.seed, key.id());
}

ojson cell_base(const CellKey &key, std::string_view model_kind) {
  ojson c;
  c["cell_id"] = key.id();
  c["train_size"] = key.train_size;
  c["split_property"] = to_string(key.prop);
  c["seed"] = key.seed;
  c["model_kind"] = model_kind;
  return c;
}

ojson failed_cell(ojson c, const std::string &reason) {
  c["status"] = "failed";
  c["reason"] = reason;
  return c;
}

ojson metric_cell(ojson c, const MetricReport &m, std::size_t n_train) {
  c["status"] = "ok";
  c["metric"] = to_string(m.metric);
  c["value"] = m.value;
  c["n_train"] = n_train;
  c["n_test"] = m.n;
  return c;
}

template <class F>
ojson guarded(ojson base, F &&fn) {
  try {
    return fn(base);
  } catch (const std::exception &e) {
    return failed_cell(std::move(base), e.what());
  }
}

using Predictor = std::function<double(int row)>;

MetricReport score(const Prepared &p, std::span<const int> test_rows,
                   const Predictor &predict_row) {
  std::vector<double> y = p.targets(test_rows), pred;
  pred.reserve(test_rows.size());
  for (int r: test_rows)
    pred.push_back(predict_row(r));
  return evaluate(p.ds.task, y, pred);
}

AcceptorSpec acceptor_spec(const ExperimentConfig &cfg, Task task) {
  return { architecture(cfg), task, cfg.readout };
}

ojson run_pure(const Prepared &p, const SplitResult &split, const CellKey &key,
               const ExperimentConfig &cfg) {
  return guarded(cell_base(key, "pure_gcnn"), [&](ojson c) {
    const std::uint64_t s = derive_seed(cell_seed(cfg, key), "gcnn");
    std::vector<int> train_rows = p.rows(split.train_ids);
    std::vector<int> test_rows = p.rows(split.test_ids);
    GcnnModel model = build_model(architecture(cfg), p.ds.task, cfg.readout, s);
    TrainResult res = train(std::move(model), p.examples(train_rows),
                            train_config(cfg, cfg.epochs, s));
    MetricReport m = score(p, test_rows, [&](int r) {
      return forward(res.model, p.graphs[r]);
    });
    return metric_cell(std::move(c), m, train_rows.size());
  });
}

ojson run_transfer(const Prepared &p, const SplitResult &split,
                   const CellKey &key, const ExperimentConfig &cfg,
                   const WeightArchive &archive) {
  return guarded(cell_base(key, "transfer"), [&](ojson c) {
    const std::uint64_t s = derive_seed(cell_seed(cfg, key), "gcnn");
    std::vector<int> train_rows = p.rows(split.train_ids);
    std::vector<int> test_rows = p.rows(split.test_ids);
    TransferPlan plan = default_plan(archive, p.ds.task, cfg.transfer_mode);
    TrainResult res =
        transfer_train(archive, p.examples(train_rows),
                       acceptor_spec(cfg, p.ds.task), plan,
                       train_config(cfg, cfg.epochs, s));
    MetricReport m = score(p, test_rows, [&](int r) {
      return forward(res.model, p.graphs[r]);
    });
    c = metric_cell(std::move(c), m, train_rows.size());
    c["transfer_mode"] = to_string(plan.mode);
    if (plan.mode == TransferMode::kFeatureExtraction)
      c["frozen_layers_unchanged"] =
          copied_layers_unchanged(res.model, archive, plan.copied_layers);
    return c;
  });
}

ojson run_forest(const Prepared &p, const SplitResult &split, const CellKey &key,
                 const ExperimentConfig &cfg) {
  return guarded(cell_base(key, "random_forest"), [&](ojson c) {
    std::vector<int> train_rows = p.rows(split.train_ids);
    std::vector<int> test_rows = p.rows(split.test_ids);
    std::vector<Fingerprint> fps;
    for (int r: train_rows)
      fps.push_back(p.ecfp6[r]);
    ForestConfig fc;
    fc.n_trees = cfg.rf_trees;
    fc.seed = derive_seed(cell_seed(cfg, key), "forest");
    Forest forest =
        fit_forest_fingerprints(fps, p.targets(train_rows), p.ds.task, fc);
    MetricReport m = score(p, test_rows, [&](int r) {
      return predict_forest(forest, p.ecfp6[r]);
    });
    return metric_cell(std::move(c), m, train_rows.size());
  });
}

struct SplitOutcome {
  std::optional<SplitResult> split;
  std::string error;
};

SplitOutcome make_split(const Prepared &p, const CellKey &key,
                        const ExperimentConfig &cfg) {
  try {
    return { diversity_split(p.ds, key.prop, key.train_size, compute_descriptors,
                             derive_seed(cell_seed(cfg, key), "split")),
             "" };
  } catch (const std::exception &e) {
    return { std::nullopt, e.what() };
  }
}

ojson split_json(const CellKey &key, const SplitResult &split) {
  return { { "cell_id", key.id() },
           { "train_ids", split.train_ids },
           { "test_ids", split.test_ids } };
}

// Median metric per (train_size, split_property, model_kind) over ok cells.
ojson summarize(const ojson &cells, const ExperimentConfig &cfg,
                const std::vector<std::string> &kinds) {
  std::map<std::tuple<int, std::string, std::string>, std::vector<double>> groups;
  for (const auto &c: cells) {
    if (c["status"] == "ok")
      groups[{ c["train_size"].get<int>(), c["split_property"].get<std::string>(),
               c["model_kind"].get<std::string>() }]
          .push_back(c["value"].get<double>());
  }
  ojson out = ojson::array();
  for (int ts: cfg.train_sizes) {
    for (SplitProperty prop: cfg.split_properties) {
      ojson row;
      row["train_size"] = ts;
      row["split_property"] = to_string(prop);
      std::map<std::string, double> med;
      for (const std::string &k: kinds) {
        auto it = groups.find({ ts, std::string(to_string(prop)), k });
        double m = it == groups.end() ? std::nan("") : median(it->second);
        med[k] = m;
        row["median_" + k] = number_or_null(m);
      }
      if (med.count("transfer") && med.count("pure_gcnn"))
        row["transfer_minus_pure"] =
            number_or_null(med["transfer"] - med["pure_gcnn"]);
      out.push_back(std::move(row));
    }
  }
  return out;
}

ojson scale_mapping(const ExperimentConfig &cfg, std::optional<int> donor_size) {
  ojson m;
  if (donor_size)
    m["donor_size"] = { { "reference", kReferenceDonorSize }, { "run", *donor_size } };
  m["donor_sizes"] = { { "reference", kReferenceDonorSizes },
                       { "run", cfg.donor_sizes } };
  m["train_sizes"] = { { "reference", kReferenceTrainSizes },
                       { "run", cfg.train_sizes } };
  return m;
}

std::optional<int> donor_size_of(const WeightArchive &archive) {
  auto it = archive.metadata.extra.find("n_train");
  if (it == archive.metadata.extra.end())
    return std::nullopt;
  return std::stoi(it->second);
}

Prepared prepare_acceptor(const ExperimentConfig &cfg, bool want_ecfp4 = false) {
  if (cfg.acceptor.empty())
    throw ConfigError("acceptor dataset must be configured");
  return prepare(load_dataset(cfg.acceptor, cfg.acceptor_task), want_ecfp4);
}

int count_inversions(const std::vector<double> &series) {
  int n = 0;
  for (std::size_t i = 1; i < series.size(); ++i) {
    if (series[i] < series[i - 1])
      ++n;
  }
  return n;
}
}  // namespace

std::string_view toolkit_version() {
  return MOLXFER_VERSION;
}

std::string cell_id(int train_size, SplitProperty prop, std::uint64_t seed) {
  return "ts=" + std::to_string(train_size) + "/split="
         + std::string(to_string(prop)) + "/seed=" + std::to_string(seed);
}

std::vector<std::string> donor_train_ids(const Dataset &donor,
                                         const ExperimentConfig &cfg) {
  std::vector<int> order(donor.size());
  for (std::size_t i = 0; i < order.size(); ++i)
    order[i] = static_cast<int>(i);
  Rng rng(derive_seed(cfg.seed, "donor_holdout"));
  shuffle(order, rng);
  const std::size_t n_hold =
      static_cast<std::size_t>(std::floor(cfg.holdout_fraction * donor.size()));
  std::vector<int> train(order.begin() + n_hold, order.end());
  std::sort(train.begin(), train.end());
  std::vector<std::string> ids;
  for (int i: train)
    ids.push_back(donor.records[i].id);
  return ids;
}

DonorResult train_donor(const Dataset &donor, const ExperimentConfig &cfg) {
  if (donor.task != Task::kRegression)
    throw ConfigError("donor dataset must be a regression dataset");
  DonorResult res;
  res.train_ids = donor_train_ids(donor, cfg);
  if (res.train_ids.size() < 2)
    throw ConfigError("donor training share has fewer than 2 records");
  std::set<std::string> in_train(res.train_ids.begin(), res.train_ids.end());
  for (const Record &r: donor.records) {
    if (!in_train.count(r.id))
      res.holdout_ids.push_back(r.id);
  }
  TrainedDonor fitted = fit_donor(donor.subset(res.train_ids), cfg, donor.name);
  res.archive = std::move(fitted.archive);
  res.loss_history = std::move(fitted.loss_history);
  if (res.holdout_ids.size() >= 2) {
    GcnnModel model = model_from_archive(res.archive);
    std::vector<Example> ex = examples_of(donor.subset(res.holdout_ids));
    std::vector<double> y, pred;
    for (const Example &e: ex) {
      y.push_back(e.target);
      pred.push_back(forward(model, e.graph));
    }
    try {
      res.holdout_r2 = r2_score(y, pred);
    } catch (const ZeroVariance &) {
    }
  }
  return res;
}

ojson cmd_train_donor(const ExperimentConfig &cfg) {
  cfg.validate();
  if (cfg.donor.empty())
    throw ConfigError("train-donor needs a donor dataset");
  ojson report = report_header("train-donor", cfg);
  Dataset donor = load_dataset(cfg.donor);
  DonorResult res = train_donor(donor, cfg);

  std::filesystem::create_directories(cfg.out_dir);
  write_archive(res.archive, cfg.out_dir / "donor_archive.json");
  {
    std::ofstream log(cfg.out_dir / "donor_training_log.csv");
    log << "epoch,loss\n";
    log.precision(17);
    for (std::size_t e = 0; e < res.loss_history.size(); ++e)
      log << e + 1 << ',' << res.loss_history[e] << '\n';
  }

  ojson d;
  d["source"] = donor.name;
  d["n_records"] = donor.size();
  d["n_train"] = res.train_ids.size();
  d["n_holdout"] = res.holdout_ids.size();
  d["holdout_r2"] = res.holdout_r2 ? ojson(*res.holdout_r2) : ojson(nullptr);
  d["final_loss"] = res.loss_history.empty() ? ojson(nullptr)
                                             : ojson(res.loss_history.back());
  d["archive"] = "donor_archive.json";
  d["training_log"] = "donor_training_log.csv";
  report["donor"] = d;
  report["scale_mapping"] =
      scale_mapping(cfg, static_cast<int>(res.train_ids.size()));
  finish_report(report, "train-donor", cfg);
  return report;
}

ojson cmd_compare(const ExperimentConfig &cfg) {
  cfg.validate();
  ojson report = report_header("compare", cfg);
  DonorSource donor = obtain_donor(cfg);
  Prepared acc = prepare_acceptor(cfg);

  std::vector<CellKey> keys = cell_grid(cfg);
  std::vector<SplitOutcome> splits(keys.size());
  std::vector<std::array<ojson, 3>> results(keys.size());
  parallel_for(keys.size(), cfg.jobs, [&](std::size_t i) {
    const CellKey &key = keys[i];
    splits[i] = make_split(acc, key, cfg);
    if (!splits[i].split) {
      for (int m = 0; m < 3; ++m) {
        static const char *kinds[] = { "pure_gcnn", "transfer", "random_forest" };
        results[i][m] = failed_cell(cell_base(key, kinds[m]),
                                    "split failed: " + splits[i].error);
      }
      return;
    }
    const SplitResult &split = *splits[i].split;
    results[i][0] = run_pure(acc, split, key, cfg);
    results[i][1] = run_transfer(acc, split, key, cfg, donor.archive);
    results[i][2] = run_forest(acc, split, key, cfg);
  });

  ojson cells = ojson::array(), split_list = ojson::array();
  for (std::size_t i = 0; i < keys.size(); ++i) {
    for (ojson &c: results[i])
      cells.push_back(std::move(c));
    if (splits[i].split)
      split_list.push_back(split_json(keys[i], *splits[i].split));
  }
  report["donor"] = {
    { "origin", donor.origin },
    { "source", donor.archive.metadata.donor_dataset },
    { "holdout_r2",
      donor.holdout_r2 ? ojson(*donor.holdout_r2) : ojson(nullptr) },
  };
  report["acceptor"] = { { "source", acc.ds.name },
                         { "task", to_string(acc.ds.task) },
                         { "n_records", acc.ds.size() } };
  report["summary"] =
      summarize(cells, cfg, { "pure_gcnn", "transfer", "random_forest" });
  report["cells"] = std::move(cells);
  report["splits"] = std::move(split_list);
  report["scale_mapping"] = scale_mapping(cfg, donor_size_of(donor.archive));
  finish_report(report, "compare", cfg);
  return report;
}

ojson cmd_donor_size_sweep(const ExperimentConfig &cfg) {
  cfg.validate();
  if (cfg.donor.empty())
    throw ConfigError("donor-size-sweep needs a donor dataset");
  if (cfg.donor_sizes.empty())
    throw ConfigError("donor_sizes must be non-empty");
  ojson report = report_header("donor-size-sweep", cfg);
  Dataset donor = load_dataset(cfg.donor);
  Prepared acc = prepare_acceptor(cfg);

  std::vector<int> sizes = cfg.donor_sizes;
  std::sort(sizes.begin(), sizes.end());
  sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
  if (static_cast<std::size_t>(sizes.back()) > donor.size())
    throw ConfigError("donor size " + std::to_string(sizes.back())
                      + " exceeds the donor dataset (" + std::to_string(donor.size())
                      + " records)");

  // Nested subsamples: every size takes a prefix of one seeded permutation.
  std::vector<std::string> order = ids_of(donor);
  Rng rng(derive_seed(cfg.seed, "donor_sweep"));
  shuffle(order, rng);

  std::vector<WeightArchive> archives(sizes.size());
  ojson subsets = ojson::array();
  for (std::size_t d = 0; d < sizes.size(); ++d) {
    std::vector<std::string> ids(order.begin(), order.begin() + sizes[d]);
    archives[d] = fit_donor(donor.subset(ids), cfg, donor.name).archive;
    subsets.push_back({ { "donor_size", sizes[d] }, { "ids", ids } });
  }

  std::vector<CellKey> keys = cell_grid(cfg);
  std::vector<SplitOutcome> splits(keys.size());
  for (std::size_t i = 0; i < keys.size(); ++i)
    splits[i] = make_split(acc, keys[i], cfg);

  const std::size_t n_jobs = keys.size() * sizes.size();
  std::vector<ojson> results(n_jobs);
  parallel_for(n_jobs, cfg.jobs, [&](std::size_t j) {
    const std::size_t d = j / keys.size(), i = j % keys.size();
    ojson c;
    if (!splits[i].split)
      c = failed_cell(cell_base(keys[i], "transfer"),
                      "split failed: " + splits[i].error);
    else
      c = run_transfer(acc, *splits[i].split, keys[i], cfg, archives[d]);
    c["cell_id"] = "donor=" + std::to_string(sizes[d]) + "/" + keys[i].id();
    c["donor_size"] = sizes[d];
    results[j] = std::move(c);
  });

  ojson cells = ojson::array();
  std::map<std::pair<int, std::string>, std::map<int, std::vector<double>>> groups;
  for (ojson &c: results) {
    if (c["status"] == "ok")
      groups[{ c["train_size"].get<int>(), c["split_property"].get<std::string>() }]
            [c["donor_size"].get<int>()]
                .push_back(c["value"].get<double>());
    cells.push_back(std::move(c));
  }
  ojson series = ojson::array();
  for (int ts: cfg.train_sizes) {
    for (SplitProperty prop: cfg.split_properties) {
      auto &by_size = groups[{ ts, std::string(to_string(prop)) }];
      std::vector<double> meds;
      ojson points = ojson::array();
      for (int s: sizes) {
        double m = median(by_size[s]);
        meds.push_back(m);
        points.push_back({ { "donor_size", s }, { "median_transfer", number_or_null(m) } });
      }
      series.push_back({ { "train_size", ts },
                         { "split_property", to_string(prop) },
                         { "points", points },
                         { "inversions", count_inversions(meds) } });
    }
  }
  report["donor_subsets"] = std::move(subsets);
  report["series"] = std::move(series);
  report["cells"] = std::move(cells);
  report["scale_mapping"] = scale_mapping(cfg, sizes.back());
  finish_report(report, "donor-size-sweep", cfg);
  return report;
}

ojson cmd_rank_splitters(const ExperimentConfig &cfg) {
  cfg.validate();
  if (cfg.split_properties.size() < 2)
    throw ConfigError("rank-splitters needs at least 2 split properties");
  ojson report = report_header("rank-splitters", cfg);
  DonorSource donor = obtain_donor(cfg);
  Prepared acc = prepare_acceptor(cfg);

  std::vector<CellKey> keys = cell_grid(cfg);
  std::vector<ojson> results(keys.size());
  parallel_for(keys.size(), cfg.jobs, [&](std::size_t i) {
    SplitOutcome s = make_split(acc, keys[i], cfg);
    results[i] = s.split ? run_transfer(acc, *s.split, keys[i], cfg, donor.archive)
                         : failed_cell(cell_base(keys[i], "transfer"),
                                       "split failed: " + s.error);
  });

  std::map<std::string, double> value;
  ojson cells = ojson::array();
  for (ojson &c: results) {
    if (c["status"] == "ok")
      value[c["cell_id"].get<std::string>()] = c["value"].get<double>();
    cells.push_back(std::move(c));
  }
  ojson tables = ojson::array();
  for (int ts: cfg.train_sizes) {
    // Only repetitions where every property produced a metric are ranked.
    std::vector<std::uint64_t> used;
    for (std::uint64_t s: cfg.seeds) {
      bool complete = true;
      for (SplitProperty p: cfg.split_properties)
        complete = complete && value.count(cell_id(ts, p, s));
      if (complete)
        used.push_back(s);
    }
    ojson table = { { "train_size", ts }, { "seeds", used } };
    if (used.empty()) {
      table["sums"] = nullptr;
    } else {
      std::vector<std::vector<double>> matrix;
      for (SplitProperty p: cfg.split_properties) {
        std::vector<double> row;
        for (std::uint64_t s: used)
          row.push_back(value[cell_id(ts, p, s)]);
        matrix.push_back(std::move(row));
      }
      std::vector<double> sums = rank_sum(matrix);
      ojson sj;
      for (std::size_t p = 0; p < sums.size(); ++p)
        sj[std::string(to_string(cfg.split_properties[p]))] = sums[p];
      table["sums"] = sj;
    }
    tables.push_back(std::move(table));
  }
  report["rank_sums"] = std::move(tables);
  report["cells"] = std::move(cells);
  report["scale_mapping"] = scale_mapping(cfg, donor_size_of(donor.archive));
  finish_report(report, "rank-splitters", cfg);
  return report;
}

ojson cmd_ad_report(const ExperimentConfig &cfg) {
  cfg.validate();
  if (cfg.donor.empty())
    throw ConfigError("ad-report needs a donor dataset");
  ojson report = report_header("ad-report", cfg);
  Dataset donor = load_dataset(cfg.donor);
  Prepared acc = prepare_acceptor(cfg, true);

  AdOptions opt;
  opt.k = cfg.ad_k;
  std::vector<Fingerprint> donor_fps;
  for (const Record &r: donor.subset(donor_train_ids(donor, cfg)).records) {
    try {
      donor_fps.push_back(ecfp(parse_smiles(r.smiles), opt.radius, opt.n_bits));
    } catch (const Error &e) {
      throw DatasetError(r.id, "record '" + r.id + "': " + e.what());
    }
  }
  const std::size_t n_donor = donor_fps.size();
  AdModel donor_ad = fit_ad_fingerprints(std::move(donor_fps), opt);

  std::vector<CellKey> keys = cell_grid(cfg);
  std::vector<ojson> results(keys.size());
  parallel_for(keys.size(), cfg.jobs, [&](std::size_t i) {
    results[i] = guarded(cell_base(keys[i], "applicability_domain"), [&](ojson c) {
      SplitOutcome s = make_split(acc, keys[i], cfg);
      if (!s.split)
        throw Error("split failed: " + s.error);
      std::vector<Fingerprint> train_fps;
      for (int r: acc.rows(s.split->train_ids))
        train_fps.push_back(acc.ecfp4[r]);
      AdModel acc_ad = fit_ad_fingerprints(std::move(train_fps), opt);
      int n_acc = 0, n_union = 0;
      ojson flags = ojson::array();
      for (const std::string &id: s.split->test_ids) {
        const Fingerprint &fp = acc.ecfp4[acc.index.at(id)];
        bool a = in_domain(acc_ad, fp).included;
        bool d = in_domain(donor_ad, fp).included;
        n_acc += a;
        n_union += a || d;
        flags.push_back({ { "id", id }, { "acceptor_ad", a }, { "donor_ad", d } });
      }
      const double n = static_cast<double>(s.split->test_ids.size());
      c["status"] = "ok";
      c["n_test"] = s.split->test_ids.size();
      c["acceptor_d_train"] = acc_ad.d_train;
      c["coverage_acceptor"] = n_acc / n;
      c["coverage_union"] = n_union / n;
      c["delta_coverage"] = (n_union - n_acc) / n;
      c["flags"] = std::move(flags);
      return c;
    });
  });

  ojson cells = ojson::array();
  for (ojson &c: results)
    cells.push_back(std::move(c));
  report["donor"] = { { "source", donor.name },
                      { "n_train", n_donor },
                      { "d_train", donor_ad.d_train } };
  report["cells"] = std::move(cells);
  report["scale_mapping"] = scale_mapping(cfg, static_cast<int>(n_donor));
  finish_report(report, "ad-report", cfg);
  return report;
}

ojson cmd_pca(const ExperimentConfig &cfg) {
  cfg.validate();
  if (cfg.pca_a.empty() || cfg.pca_b.empty())
    throw ConfigError("pca needs pca_a and pca_b datasets");
  ojson report = report_header("pca", cfg);
  const Dataset sets[2] = { load_dataset(cfg.pca_a), load_dataset(cfg.pca_b) };
  const char *tags[2] = { "A", "B" };

  std::vector<IdFingerprint> fps;
  for (const Dataset &ds: sets) {
    for (const Record &r: ds.records) {
      try {
        fps.push_back({ r.id, ecfp(parse_smiles(r.smiles), cfg.fingerprint_radius,
                                   cfg.fingerprint_bits) });
      } catch (const Error &e) {
        throw DatasetError(r.id, "record '" + r.id + "': " + e.what());
      }
    }
  }
  PcaProjection pca = pca_fit_transform(fps);

  std::filesystem::create_directories(cfg.out_dir);
  std::vector<Projection> per_set[2];
  {
    std::ofstream out(cfg.out_dir / "pca_projection.csv");
    out << "id,x,y,dataset\n";
    out.precision(17);
    std::size_t k = 0;
    for (int s = 0; s < 2; ++s) {
      for (std::size_t i = 0; i < sets[s].size(); ++i, ++k) {
        const Projection &p = pca.points[k];
        out << p.id << ',' << p.x << ',' << p.y << ',' << tags[s] << '\n';
        per_set[s].push_back(p);
      }
    }
  }

  ojson regions = ojson::array();
  for (const NamedBox &nb: cfg.boxes) {
    for (int s = 0; s < 2; ++s) {
      ojson reg = { { "box", nb.name }, { "dataset", tags[s] } };
      try {
        Dataset sub =
            filter_by_pca_box(sets[s], per_set[s], nb.box, cfg.box_max_n,
                              derive_seed(cfg.seed, "box:" + nb.name, s));
        std::string file = "region_" + nb.name + "_" + tags[s] + ".csv";
        write_dataset_csv(sub, cfg.out_dir / file);
        reg["n_records"] = sub.size();
        reg["file"] = file;
      } catch (const EmptyRegion &) {
        reg["n_records"] = 0;
        reg["file"] = nullptr;
      }
      regions.push_back(std::move(reg));
    }
  }
  report["projection"] = {
    { "file", "pca_projection.csv" },
    { "n_points", pca.points.size() },
    { "n_a", sets[0].size() },
    { "n_b", sets[1].size() },
    { "explained_variance",
      { pca.explained_variance[0], pca.explained_variance[1] } },
  };
  report["regions"] = std::move(regions);
  finish_report(report, "pca", cfg);
  return report;
}

ojson cmd_generate(const ExperimentConfig &cfg) {
  cfg.validate();
  if (!is_generator_spec(cfg.dataset))
    throw ConfigError("generate needs dataset = gen:... spec");
  ojson report = report_header("generate", cfg);
  Dataset ds = load_dataset(cfg.dataset);
  std::filesystem::create_directories(cfg.out_dir);
  write_dataset_csv(ds, cfg.out_dir / "generated.csv");

  ojson g = { { "file", "generated.csv" }, { "n_records", ds.size() } };
  // The related formulas must stay rank-correlated on any generated corpus.
  if (ds.size() >= 3) {
    std::vector<double> a, b;
    for (const Record &r: ds.records) {
      DescriptorVector d = compute_descriptors(parse_smiles(r.smiles));
      a.push_back(evaluate_formula(Formula::kDonorDefault, d));
      b.push_back(evaluate_formula(Formula::kAcceptorRelated, d));
    }
    try {
      double rho = spearman_correlation(a, b);
      g["donor_related_spearman"] = rho;
    } catch (const ZeroVariance &) {
      g["donor_related_spearman"] = nullptr;
    }
  }
  report["generated"] = std::move(g);
  finish_report(report, "generate", cfg);
  return report;
}

ojson cmd_featurize(const ExperimentConfig &cfg) {
  cfg.validate();
  if (cfg.dataset.empty())
    throw ConfigError("featurize needs a dataset");
  ojson report = report_header("featurize", cfg);
  Dataset ds = load_dataset(cfg.dataset);
  std::filesystem::create_directories(cfg.out_dir);
  std::ofstream desc(cfg.out_dir / "descriptors.csv");
  std::ofstream fpo(cfg.out_dir / "fingerprints.csv");
  desc.precision(17);
  desc << "id";
  for (Descriptor d: kAllDescriptors)
    desc << ',' << to_string(d);
  desc << '\n';
  fpo << "id,radius,n_bits,on_bits\n";

  ojson cells = ojson::array();
  for (const Record &r: ds.records) {
    try {
      MolecularGraph mol = parse_smiles(r.smiles);
      DescriptorVector d = compute_descriptors(mol);
      desc << r.id;
      for (Descriptor k: kAllDescriptors)
        desc << ',' << d.get(k);
      desc << '\n';
      Fingerprint fp = ecfp(mol, cfg.fingerprint_radius, cfg.fingerprint_bits);
      fpo << r.id << ',' << fp.radius() << ',' << fp.n_bits() << ',';
      std::vector<int> bits = fp.on_bits();
      for (std::size_t i = 0; i < bits.size(); ++i)
        fpo << (i ? " " : "") << bits[i];
      fpo << '\n';
    } catch (const Error &e) {
      cells.push_back({ { "cell_id", r.id },
                        { "status", "failed" },
                        { "reason", e.what() } });
    }
  }
  report["featurized"] = { { "descriptors", "descriptors.csv" },
                           { "fingerprints", "fingerprints.csv" },
                           { "n_records", ds.size() } };
  report["cells"] = std::move(cells);
  finish_report(report, "featurize", cfg);
  return report;
}

const std::vector<std::string> &command_names() {
  static const std::vector<std::string> names = {
    "train-donor", "compare", "donor-size-sweep", "rank-splitters",
    "ad-report",   "pca",     "generate",         "featurize",
  };
  return names;
}

ojson run_command(std::string_view name, const ExperimentConfig &cfg) {
  if (name == "train-donor")
    return cmd_train_donor(cfg);
  if (name == "compare")
    return cmd_compare(cfg);
  if (name == "donor-size-sweep")
    return cmd_donor_size_sweep(cfg);
  if (name == "rank-splitters")
    return cmd_rank_splitters(cfg);
  if (name == "ad-report")
    return cmd_ad_report(cfg);
  if (name == "pca")
    return cmd_pca(cfg);
  if (name == "generate")
    return cmd_generate(cfg);
  if (name == "featurize")
    return cmd_featurize(cfg);
  throw ConfigError("unknown command '" + std::string(name) + "'");
}

int failed_cell_count(const ojson &report) {
  return report.value("failed_cells", 0);
}

ojson strip_timestamp(ojson report) {
  report.erase("timestamp");
  return report;
}

}  // namespace molxfer
