//
// Project molxfer - Copyright 2026 The molxfer Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef MOLXFER_SAMPLING_H_
#define MOLXFER_SAMPLING_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "molxfer/error.h"
#include "molxfer/molgraph.h"
#include "molxfer/neuralnet.h"

namespace molxfer {

struct Record {
  std::string id;
  std::string smiles;
  double target = 0;
};

struct Dataset {
  std::vector<Record> records;
  Task task = Task::kRegression;
  std::string name;

  std::size_t size() const { return records.size(); }
  bool empty() const { return records.empty(); }
  // Unique ids, finite targets, {0,1} targets for classification.
  void validate() const;
  std::vector<double> targets() const;
  // Records whose id is listed, in the listed order. Throws on unknown ids.
  Dataset subset(std::span<const std::string> ids) const;
};

class DatasetError: public Error {
public:
  DatasetError(std::string id, const std::string &what)
      : Error(what), id_(std::move(id)) { }
  const std::string &id() const { return id_; }

private:
  std::string id_;
};

// CSV with header `id,smiles,target`. Task is inferred as classification
// only when asked for explicitly.
Dataset read_dataset_csv(std::istream &in, std::string name,
                         Task task = Task::kRegression);
Dataset read_dataset_csv(const std::filesystem::path &path,
                         Task task = Task::kRegression);
void write_dataset_csv(const Dataset &ds, std::ostream &out);
void write_dataset_csv(const Dataset &ds, const std::filesystem::path &path);

class KTooLarge: public Error {
public:
  using Error::Error;
};

struct IdValue {
  std::string id;
  double value = 0;
};

// Greedy 1-D max-min diversity selection. Returns ids in pick order, so the
// first k-1 entries equal the selection for k-1.
std::vector<std::string> maxmin_select(std::span<const IdValue> values,
                                       std::size_t k);

enum class SplitProperty {
  kEndpoint,
  kMolecularWeight,
  kAromaticRings,
  kRotatableBonds,
  kHba,
  kHbd,
  kHeterocycles,
  kTpsa,
  kRandom,
};

std::string_view to_string(SplitProperty prop);
std::optional<SplitProperty> split_property_from_string(std::string_view s);
// The seven molecular descriptors, in descriptor order.
std::vector<SplitProperty> descriptor_split_properties();

struct SplitResult {
  std::vector<std::string> train_ids;  // pick order
  std::vector<std::string> test_ids;   // dataset order
  SplitProperty split_property = SplitProperty::kEndpoint;
  std::size_t train_size = 0;
};

using DescriptorFn = std::function<DescriptorVector(const MolecularGraph &)>;

// train = maxmin_select over the property; test = the rest. The random
// property draws a seeded uniform sample instead.
SplitResult diversity_split(const Dataset &ds, SplitProperty prop,
                            std::size_t k,
                            const DescriptorFn &descriptor_fn = compute_descriptors,
                            std::uint64_t seed = 0);

enum class Comparison { kLessEqual, kGreaterEqual };

Dataset binarize_endpoint(const Dataset &ds, double threshold,
                          Comparison positive_when);

class EmptyRegion: public Error {
public:
  using Error::Error;
};

struct Projection {
  std::string id;
  double x = 0;
  double y = 0;
};

struct Box {
  double xmin = 0, xmax = 0, ymin = 0, ymax = 0;

  bool contains(double x, double y) const {
    return x >= xmin && x <= xmax && y >= ymin && y <= ymax;
  }
};

// Records projected into the closed box, reduced to max_n by seeded uniform
// subsampling (original order kept). Throws EmptyRegion.
Dataset filter_by_pca_box(const Dataset &ds,
                          std::span<const Projection> projections,
                          const Box &box, std::size_t max_n,
                          std::uint64_t seed = 0);

}  // namespace molxfer

#endif  // MOLXFER_SAMPLING_H_
