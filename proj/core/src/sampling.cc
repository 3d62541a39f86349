//
// Project molxfer - Copyright 2026 The molxfer Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "molxfer/sampling.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "molxfer/random.h"

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

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(trim(line.substr(start)));
      break;
    }
    fields.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return fields;
}

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}
}  // namespace

void Dataset::validate() const {
  std::unordered_set<std::string> ids;
  for (const Record &r: records) {
    if (!ids.insert(r.id).second)
      throw DatasetError(r.id, "dataset '" + name + "': duplicate id '" + r.id
                                   + "'");
    if (!std::isfinite(r.target))
      throw DatasetError(r.id, "dataset '" + name + "': non-finite target for '"
                                   + r.id + "'");
    if (task == Task::kBinaryClassification && r.target != 0.0
        && r.target != 1.0)
      throw DatasetError(r.id, "dataset '" + name + "': classification target "
                                   + format_double(r.target) + " for '" + r.id
                                   + "' is not 0 or 1");
  }
}

std::vector<double> Dataset::targets() const {
  std::vector<double> t;
  t.reserve(records.size());
  for (const Record &r: records)
    t.push_back(r.target);
  return t;
}

Dataset Dataset::subset(std::span<const std::string> ids) const {
  std::unordered_map<std::string_view, std::size_t> index;
  for (std::size_t i = 0; i < records.size(); ++i)
    index.emplace(records[i].id, i);
  Dataset out;
  out.task = task;
  out.name = name;
  out.records.reserve(ids.size());
  for (const std::string &id: ids) {
    auto it = index.find(id);
    if (it == index.end())
      throw DatasetError(id, "dataset '" + name + "' has no record '" + id + "'");
    out.records.push_back(records[it->second]);
  }
  return out;
}

Dataset read_dataset_csv(std::istream &in, std::string name, Task task) {
  Dataset ds;
  ds.name = std::move(name);
  ds.task = task;
  std::string line;
  if (!std::getline(in, line))
    throw Error("dataset '" + ds.name + "': empty CSV");
  std::string_view header = trim(line);
  if (header.size() >= 3 && static_cast<unsigned char>(header[0]) == 0xEF)
    header.remove_prefix(3);  // UTF-8 BOM
  auto cols = split_commas(header);
  if (cols.size() != 3 || cols[0] != "id" || cols[1] != "smiles"
      || cols[2] != "target")
    throw Error("dataset '" + ds.name
                + "': header must be 'id,smiles,target'");

  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view body = trim(line);
    if (body.empty())
      continue;
    auto fields = split_commas(body);
    if (fields.size() != 3)
      throw Error("dataset '" + ds.name + "' line " + std::to_string(line_no)
                  + ": expected 3 fields, got " + std::to_string(fields.size()));
    Record r;
    r.id = std::string(fields[0]);
    r.smiles = std::string(fields[1]);
    std::string_view t = fields[2];
    const char *end = t.data() + t.size();
    auto [ptr, ec] = std::from_chars(t.data(), end, r.target);
    if (ec != std::errc() || ptr != end)
      throw DatasetError(r.id, "dataset '" + ds.name + "' line "
                                   + std::to_string(line_no) + ": bad target '"
                                   + std::string(t) + "'");
    ds.records.push_back(std::move(r));
  }
  ds.validate();
  return ds;
}

Dataset read_dataset_csv(const std::filesystem::path &path, Task task) {
  std::ifstream in(path);
  if (!in)
    throw Error("cannot open dataset " + path.string());
  return read_dataset_csv(in, path.stem().string(), task);
}

void write_dataset_csv(const Dataset &ds, std::ostream &out) {
  out << "id,smiles,target\n";
  for (const Record &r: ds.records)
    out << r.id << ',' << r.smiles << ',' << format_double(r.target) << '\n';
}

void write_dataset_csv(const Dataset &ds, const std::filesystem::path &path) {
  std::ofstream out(path);
  if (!out)
    throw Error("cannot write dataset " + path.string());
  write_dataset_csv(ds, out);
}

std::vector<std::string> maxmin_select(std::span<const IdValue> values,
                                       std::size_t k) {
  const std::size_t n = values.size();
  if (k > n)
    throw KTooLarge("maxmin_select: k = " + std::to_string(k) + " exceeds n = "
                    + std::to_string(n));
  for (const IdValue &iv: values) {
    if (!std::isfinite(iv.value))
      throw DatasetError(iv.id, "maxmin_select: non-finite value for '" + iv.id
                                    + "'");
  }
  std::vector<std::string> picked;
  if (k == 0)
    return picked;

  auto better_tie = [&](std::size_t a, std::size_t b) {
    if (values[a].value != values[b].value)
      return values[a].value < values[b].value;
    return values[a].id < values[b].id;
  };

  std::vector<char> taken(n, 0);
  std::vector<double> min_gap(n, std::numeric_limits<double>::infinity());
  auto take = [&](std::size_t i) {
    taken[i] = 1;
    picked.push_back(values[i].id);
    for (std::size_t j = 0; j < n; ++j)
      min_gap[j] = std::min(min_gap[j], std::abs(values[j].value - values[i].value));
  };

  std::size_t lo = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (better_tie(i, lo))
      lo = i;
  }
  take(lo);
  if (k == 1)
    return picked;

  std::size_t hi = n;
  for (std::size_t i = 0; i < n; ++i) {
    if (taken[i])
      continue;
    if (hi == n || values[i].value > values[hi].value
        || (values[i].value == values[hi].value && values[i].id < values[hi].id))
      hi = i;
  }
  take(hi);

  while (picked.size() < k) {
    std::size_t best = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (taken[i])
        continue;
      if (best == n || min_gap[i] > min_gap[best]
          || (min_gap[i] == min_gap[best] && better_tie(i, best)))
        best = i;
    }
    take(best);
  }
  return picked;
}

std::string_view to_string(SplitProperty prop) {
  switch (prop) {
  case SplitProperty::kEndpoint:
    return "endpoint";
  case SplitProperty::kMolecularWeight:
    return "molecular_weight";
  case SplitProperty::kAromaticRings:
    return "aromatic_rings";
  case SplitProperty::kRotatableBonds:
    return "rotatable_bonds";
  case SplitProperty::kHba:
    return "hba";
  case SplitProperty::kHbd:
    return "hbd";
  case SplitProperty::kHeterocycles:
    return "heterocycles";
  case SplitProperty::kTpsa:
    return "tpsa";
  case SplitProperty::kRandom:
    return "random";
  }
  return "";
}

std::optional<SplitProperty> split_property_from_string(std::string_view s) {
  for (int i = 0; i <= static_cast<int>(SplitProperty::kRandom); ++i) {
    auto p = static_cast<SplitProperty>(i);
    if (to_string(p) == s)
      return p;
  }
  return std::nullopt;
}

std::vector<SplitProperty> descriptor_split_properties() {
  return { SplitProperty::kMolecularWeight, SplitProperty::kAromaticRings,
           SplitProperty::kRotatableBonds,  SplitProperty::kHba,
           SplitProperty::kHbd,             SplitProperty::kHeterocycles,
           SplitProperty::kTpsa };
}

SplitResult diversity_split(const Dataset &ds, SplitProperty prop,
                            std::size_t k, const DescriptorFn &descriptor_fn,
                            std::uint64_t seed) {
  if (k > ds.size())
    throw KTooLarge("diversity_split: requested " + std::to_string(k)
                    + " training records from a dataset of "
                    + std::to_string(ds.size()));
  SplitResult result;
  result.split_property = prop;
  result.train_size = k;

  if (prop == SplitProperty::kRandom) {
    std::vector<std::string> ids;
    for (const Record &r: ds.records)
      ids.push_back(r.id);
    Rng rng(derive_seed(seed, "random_split"));
    shuffle(ids, rng);
    ids.resize(k);
    result.train_ids = std::move(ids);
  } else {
    std::vector<IdValue> values;
    values.reserve(ds.size());
    for (const Record &r: ds.records) {
      double v = r.target;
      if (prop != SplitProperty::kEndpoint) {
        try {
          DescriptorVector d = descriptor_fn(parse_smiles(r.smiles));
          v = d.get(static_cast<Descriptor>(static_cast<int>(prop) - 1));
        } catch (const Error &e) {
          throw DatasetError(r.id, "record '" + r.id + "': " + e.what());
        }
      }
      values.push_back({ r.id, v });
    }
    result.train_ids = maxmin_select(values, k);
  }

  std::unordered_set<std::string_view> train(result.train_ids.begin(),
                                             result.train_ids.end());
  for (const Record &r: ds.records) {
    if (!train.count(r.id))
      result.test_ids.push_back(r.id);
  }
  return result;
}

Dataset binarize_endpoint(const Dataset &ds, double threshold,
                          Comparison positive_when) {
  Dataset out;
  out.task = Task::kBinaryClassification;
  out.name = ds.name + "[target"
             + (positive_when == Comparison::kLessEqual ? "<=" : ">=")
             + format_double(threshold) + "]";
  out.records = ds.records;
  for (Record &r: out.records) {
    bool positive = positive_when == Comparison::kLessEqual ? r.target <= threshold
                                                            : r.target >= threshold;
    r.target = positive ? 1.0 : 0.0;
  }
  return out;
}

Dataset filter_by_pca_box(const Dataset &ds,
                          std::span<const Projection> projections,
                          const Box &box, std::size_t max_n,
                          std::uint64_t seed) {
  std::unordered_map<std::string_view, const Projection *> by_id;
  for (const Projection &p: projections)
    by_id.emplace(p.id, &p);

  std::vector<std::size_t> inside;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    auto it = by_id.find(ds.records[i].id);
    if (it == by_id.end())
      throw DatasetError(ds.records[i].id, "filter_by_pca_box: record '"
                                               + ds.records[i].id
                                               + "' has no projection");
    if (box.contains(it->second->x, it->second->y))
      inside.push_back(i);
  }
  if (inside.empty())
    throw EmptyRegion("filter_by_pca_box: no record of '" + ds.name
                      + "' falls inside the box");

  if (inside.size() > max_n) {
    Rng rng(derive_seed(seed, "pca_box"));
    shuffle(inside, rng);
    inside.resize(max_n);
    std::sort(inside.begin(), inside.end());
  }

  Dataset out;
  out.task = ds.task;
  out.name = ds.name;
  for (std::size_t i: inside)
    out.records.push_back(ds.records[i]);
  return out;
}

}  // namespace molxfer
