//
// Project molxfer - Copyright 2026 The molxfer Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <charconv>
#include <fstream>
#include <istream>
#include <string>

#include "molxfer/experiment.h"

namespace molxfer {
namespace {
std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
    s.remove_prefix(1);
  while (!s.empty()
         && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  if (trim(s).empty())
    return out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos)
      break;
    start = pos + 1;
  }
  return out;
}

template <class T>
T parse_number(std::string_view key, std::string_view text) {
  T value {};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw ConfigError("invalid value '" + std::string(text) + "' for '"
                      + std::string(key) + "'");
  return value;
}

template <class T>
std::vector<T> parse_list(std::string_view key, std::string_view text) {
  std::vector<T> out;
  for (std::string_view item: split(text, ','))
    out.push_back(parse_number<T>(key, item));
  return out;
}

// name:xmin,xmax,ymin,ymax; entries separated by ';'
std::vector<NamedBox> parse_boxes(std::string_view text) {
  std::vector<NamedBox> out;
  for (std::string_view entry: split(text, ';')) {
    std::size_t colon = entry.find(':');
    if (colon == std::string_view::npos)
      throw ConfigError("box '" + std::string(entry)
                        + "' must be name:xmin,xmax,ymin,ymax");
    NamedBox nb;
    nb.name = std::string(trim(entry.substr(0, colon)));
    std::vector<double> v = parse_list<double>("boxes", entry.substr(colon + 1));
    if (nb.name.empty() || v.size() != 4)
      throw ConfigError("box '" + std::string(entry)
                        + "' must be name:xmin,xmax,ymin,ymax");
    nb.box = { v[0], v[1], v[2], v[3] };
    out.push_back(std::move(nb));
  }
  return out;
}
}  // namespace

bool is_generator_spec(std::string_view source) {
  return source.starts_with("gen:");
}

GeneratorSpec parse_generator_spec(std::string_view source) {
  if (!is_generator_spec(source))
    throw ConfigError("not a generator spec: '" + std::string(source) + "'");
  GeneratorSpec spec;
  for (std::string_view item: split(source.substr(4), ',')) {
    std::size_t eq = item.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("generator option '" + std::string(item)
                        + "' must be key=value");
    std::string_view key = trim(item.substr(0, eq));
    std::string_view value = trim(item.substr(eq + 1));
    if (key == "n")
      spec.n = parse_number<int>(key, value);
    else if (key == "seed")
      spec.seed = parse_number<std::uint64_t>(key, value);
    else if (key == "formula") {
      try {
        spec.formula = formula_from_string(value);
      } catch (const UnknownFormula &e) {
        throw ConfigError(e.what());
      }
    } else if (key == "noise")
      spec.noise_sd = parse_number<double>(key, value);
    else if (key == "max_atoms")
      spec.max_heavy_atoms = parse_number<int>(key, value);
    else if (key == "prefix")
      spec.id_prefix = std::string(value);
    else
      throw ConfigError("unknown generator option '" + std::string(key) + "'");
  }
  if (spec.n < 1 || spec.max_heavy_atoms < 1 || !(spec.noise_sd >= 0))
    throw ConfigError("invalid generator spec '" + std::string(source) + "'");
  return spec;
}

Dataset load_dataset(const std::string &source, Task task) {
  if (!is_generator_spec(source)) {
    if (!std::filesystem::exists(source))
      throw ConfigError("dataset file '" + source + "' does not exist");
    Dataset ds = read_dataset_csv(std::filesystem::path(source), task);
    ds.validate();
    return ds;
  }
  GeneratorSpec spec = parse_generator_spec(source);
  GenConfig gen;
  gen.n_molecules = spec.n;
  gen.max_heavy_atoms = spec.max_heavy_atoms;
  gen.seed = spec.seed;
  gen.noise_sd = spec.noise_sd;
  std::vector<std::string> smiles = generate_molecules(gen);
  return label_dataset(smiles, spec.formula, spec.noise_sd, spec.seed, source,
                       spec.id_prefix);
}

void ExperimentConfig::set(std::string_view key, std::string_view value) {
  value = trim(value);
  auto need = [&](auto parsed, const char *what) {
    if (!parsed)
      throw ConfigError("invalid " + std::string(what) + " '"
                        + std::string(value) + "'");
    return *parsed;
  };
  if (key == "donor")
    donor = value;
  else if (key == "acceptor")
    acceptor = value;
  else if (key == "acceptor_task")
    acceptor_task = need(task_from_string(value), "task");
  else if (key == "donor_archive")
    donor_archive = value;
  else if (key == "dataset")
    dataset = value;
  else if (key == "pca_a")
    pca_a = value;
  else if (key == "pca_b")
    pca_b = value;
  else if (key == "train_sizes")
    train_sizes = parse_list<int>(key, value);
  else if (key == "donor_sizes")
    donor_sizes = parse_list<int>(key, value);
  else if (key == "split_properties") {
    split_properties.clear();
    for (std::string_view item: split(value, ',')) {
      if (item == "all_descriptors") {
        for (SplitProperty p: descriptor_split_properties())
          split_properties.push_back(p);
        continue;
      }
      split_properties.push_back(
          need(split_property_from_string(item), "split property"));
    }
  } else if (key == "transfer_mode")
    transfer_mode = need(transfer_mode_from_string(value), "transfer mode");
  else if (key == "seeds")
    seeds = parse_list<std::uint64_t>(key, value);
  else if (key == "seed")
    seed = parse_number<std::uint64_t>(key, value);
  else if (key == "epochs")
    epochs = parse_number<int>(key, value);
  else if (key == "donor_epochs")
    donor_epochs = parse_number<int>(key, value);
  else if (key == "batch_size")
    batch_size = parse_number<int>(key, value);
  else if (key == "learning_rate")
    learning_rate = parse_number<double>(key, value);
  else if (key == "graph_width")
    graph_width = parse_number<int>(key, value);
  else if (key == "dense_width")
    dense_width = parse_number<int>(key, value);
  else if (key == "readout")
    readout = need(readout_from_string(value), "readout");
  else if (key == "holdout_fraction")
    holdout_fraction = parse_number<double>(key, value);
  else if (key == "rf_trees")
    rf_trees = parse_number<int>(key, value);
  else if (key == "ad_k")
    ad_k = parse_number<int>(key, value);
  else if (key == "boxes")
    boxes = parse_boxes(value);
  else if (key == "box_max_n")
    box_max_n = parse_number<int>(key, value);
  else if (key == "fingerprint_radius")
    fingerprint_radius = parse_number<int>(key, value);
  else if (key == "fingerprint_bits")
    fingerprint_bits = parse_number<int>(key, value);
  else if (key == "out_dir")
    out_dir = std::string(value);
  else if (key == "jobs")
    jobs = parse_number<int>(key, value);
  else
    throw ConfigError("unknown config key '" + std::string(key) + "'");
}

void ExperimentConfig::validate() const {
  auto check = [](bool ok, const std::string &what) {
    if (!ok)
      throw ConfigError(what);
  };
  check(!seeds.empty(), "seeds must be non-empty");
  for (int s: train_sizes)
    check(s >= 1, "train sizes must be >= 1");
  for (int s: donor_sizes)
    check(s >= 2, "donor sizes must be >= 2");
  check(epochs >= 1 && donor_epochs >= 1, "epochs must be >= 1");
  check(batch_size >= 1, "batch_size must be >= 1");
  check(learning_rate > 0, "learning_rate must be > 0");
  check(graph_width >= 1 && dense_width >= 1, "layer widths must be >= 1");
  check(holdout_fraction >= 0 && holdout_fraction < 1,
        "holdout_fraction must be in [0, 1)");
  check(rf_trees >= 1, "rf_trees must be >= 1");
  check(ad_k >= 1, "ad_k must be >= 1");
  check(box_max_n >= 1, "box_max_n must be >= 1");
  check(jobs >= 1, "jobs must be >= 1");
  for (const std::string *src: { &donor, &acceptor, &dataset, &pca_a, &pca_b }) {
    if (src->empty())
      continue;
    if (is_generator_spec(*src))
      parse_generator_spec(*src);
    else
      check(std::filesystem::exists(*src),
            "dataset file '" + *src + "' does not exist");
  }
}

nlohmann::ordered_json ExperimentConfig::to_json() const {
  nlohmann::ordered_json j;
  j["donor"] = donor;
  j["acceptor"] = acceptor;
  j["acceptor_task"] = to_string(acceptor_task);
  j["donor_archive"] = donor_archive;
  j["dataset"] = dataset;
  j["pca_a"] = pca_a;
  j["pca_b"] = pca_b;
  j["train_sizes"] = train_sizes;
  j["donor_sizes"] = donor_sizes;
  nlohmann::ordered_json props = nlohmann::ordered_json::array();
  for (SplitProperty p: split_properties)
    props.push_back(to_string(p));
  j["split_properties"] = props;
  j["transfer_mode"] = to_string(transfer_mode);
  j["seeds"] = seeds;
  j["seed"] = seed;
  j["epochs"] = epochs;
  j["donor_epochs"] = donor_epochs;
  j["batch_size"] = batch_size;
  j["learning_rate"] = learning_rate;
  j["graph_width"] = graph_width;
  j["dense_width"] = dense_width;
  j["readout"] = to_string(readout);
  j["holdout_fraction"] = holdout_fraction;
  j["rf_trees"] = rf_trees;
  j["ad_k"] = ad_k;
  nlohmann::ordered_json bj = nlohmann::ordered_json::array();
  for (const NamedBox &b: boxes)
    bj.push_back({ { "name", b.name },
                   { "xmin", b.box.xmin },
                   { "xmax", b.box.xmax },
                   { "ymin", b.box.ymin },
                   { "ymax", b.box.ymax } });
  j["boxes"] = bj;
  j["box_max_n"] = box_max_n;
  j["fingerprint_radius"] = fingerprint_radius;
  j["fingerprint_bits"] = fingerprint_bits;
  // out_dir and jobs do not affect results and stay out of the echo so that
  // reports from different locations or thread counts compare equal.
  return j;
}

ExperimentConfig parse_config(std::istream &in) {
  ExperimentConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view = line;
    if (std::size_t hash = view.find('#'); hash != std::string_view::npos)
      view = view.substr(0, hash);
    view = trim(view);
    if (view.empty())
      continue;
    std::size_t eq = view.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("config line " + std::to_string(lineno)
                        + ": expected key = value");
    try {
      cfg.set(trim(view.substr(0, eq)), view.substr(eq + 1));
    } catch (const ConfigError &e) {
      throw ConfigError("config line " + std::to_string(lineno) + ": "
                        + e.what());
    }
  }
  return cfg;
}

ExperimentConfig parse_config_file(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError("cannot open config file " + path.string());
  return parse_config(in);
}

}  // namespace molxfer
