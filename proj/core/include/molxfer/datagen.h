//
// Project molxfer - Copyright 2026 The molxfer Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef MOLXFER_DATAGEN_H_
#define MOLXFER_DATAGEN_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "molxfer/error.h"
#include "molxfer/molgraph.h"
#include "molxfer/sampling.h"

namespace molxfer {

// Synthetic endpoints as descriptor formulas:
//   donor_default      = 0.5 MW/100 + 1.0 aromatic_rings
//   acceptor_related   = 0.4 MW/100 + 0.8 aromatic_rings + 0.5 rotatable_bonds
//   acceptor_unrelated = hbd - hba
enum class Formula { kDonorDefault, kAcceptorRelated, kAcceptorUnrelated };

std::string_view to_string(Formula f);

class UnknownFormula: public Error {
public:
  using Error::Error;
};

Formula formula_from_string(std::string_view name);
double evaluate_formula(Formula f, const DescriptorVector &d);

class GenerationExhausted: public Error {
public:
  using Error::Error;
};

struct GenConfig {
  int n_molecules = 1000;
  int max_heavy_atoms = 12;
  std::uint64_t seed = 0;
  Formula donor_target = Formula::kDonorDefault;
  Formula acceptor_target = Formula::kAcceptorRelated;
  double noise_sd = 0;

  void validate() const;
};

// Random acyclic C/N/O/S skeletons with optional benzene or pyridine
// attachments, written as SMILES from a random root. Distinct molecules
// only (graph-hash dedup); deterministic in the seed.
std::vector<std::string> generate_molecules(const GenConfig &cfg);

// Order-independent hash of the molecular graph, used for dedup.
std::uint64_t molecule_key(const MolecularGraph &mol);

// Records get ids "<id_prefix><index>" (index zero-padded to 5 digits).
Dataset label_dataset(std::span<const std::string> smiles, Formula formula,
                      double noise_sd, std::uint64_t seed,
                      std::string name = "synthetic",
                      std::string id_prefix = "m");

}  // namespace molxfer

#endif  // MOLXFER_DATAGEN_H_
