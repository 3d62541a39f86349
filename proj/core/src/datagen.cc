//
// Project molxfer - Copyright 2026 The molxfer Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "molxfer/datagen.h"

#include <algorithm>
#include <cstdio>
#include <unordered_set>

#include "molxfer/fingerprint.h"
#include "molxfer/random.h"

namespace molxfer {
namespace {
int max_valence(Element e) {
  switch (e) {
  case Element::kC:
    return 4;
  case Element::kN:
    return 3;
  case Element::kO:
  case Element::kS:
    return 2;
  default:
    return 1;
  }
}

class SkeletonBuilder {
public:
  SkeletonBuilder(Rng &rng, int max_atoms): rng_(rng), max_atoms_(max_atoms) { }

  MolecularGraph build() {
    const int target = max_atoms_ <= 1
                           ? 1
                           : 2 + static_cast<int>(uniform_index(rng_, max_atoms_ - 1));
    if (target >= 6 && uniform01(rng_) < 0.25)
      add_ring(-1);
    else
      add_atom(random_element());

    int stalls = 0;
    while (static_cast<int>(atoms_.size()) < target && stalls < 20) {
      std::vector<int> anchors;
      for (int i = 0; i < static_cast<int>(atoms_.size()); ++i) {
        if (free_[i] > 0)
          anchors.push_back(i);
      }
      if (anchors.empty())
        break;
      int anchor = anchors[uniform_index(rng_, anchors.size())];
      int remaining = target - static_cast<int>(atoms_.size());
      if (remaining >= 6 && rings_ < 2 && uniform01(rng_) < 0.3) {
        add_ring(anchor);
        continue;
      }
      Element e = random_element();
      int cap = std::min(free_[anchor], max_valence(e));
      if (cap < 1) {
        ++stalls;
        continue;
      }
      BondOrder order = BondOrder::kSingle;
      double u = uniform01(rng_);
      if (cap >= 3 && u < 0.04)
        order = BondOrder::kTriple;
      else if (cap >= 2 && u < 0.16)
        order = BondOrder::kDouble;
      int idx = add_atom(e);
      connect(anchor, idx, order);
    }
    return MolecularGraph::assemble(std::move(atoms_), std::move(bonds_));
  }

private:
  Element random_element() {
    double u = uniform01(rng_);
    if (u < 0.60)
      return Element::kC;
    if (u < 0.75)
      return Element::kN;
    if (u < 0.92)
      return Element::kO;
    return Element::kS;
  }

  int add_atom(Element e, bool aromatic = false) {
    Atom a;
    a.element = e;
    a.is_aromatic = aromatic;
    atoms_.push_back(a);
    free_.push_back(aromatic ? (e == Element::kC ? 1 : 0) : max_valence(e));
    return static_cast<int>(atoms_.size()) - 1;
  }

  void connect(int a, int b, BondOrder order) {
    bonds_.push_back({ a, b, order, false });
    int units = order == BondOrder::kAromatic ? 0 : static_cast<int>(order);
    free_[a] -= units;
    free_[b] -= units;
  }

  // Benzene (70%) or pyridine, bonded to anchor through a ring carbon.
  void add_ring(int anchor) {
    const bool pyridine = uniform01(rng_) < 0.3;
    const int n_pos = pyridine ? 1 + static_cast<int>(uniform_index(rng_, 5)) : -1;
    int first = -1;
    for (int k = 0; k < 6; ++k) {
      int idx = add_atom(k == n_pos ? Element::kN : Element::kC, true);
      if (k == 0)
        first = idx;
      else
        bonds_.push_back({ idx - 1, idx, BondOrder::kAromatic, false });
    }
    bonds_.push_back({ first + 5, first, BondOrder::kAromatic, false });
    if (anchor >= 0)
      connect(anchor, first, BondOrder::kSingle);
    ++rings_;
  }

  Rng &rng_;
  int max_atoms_;
  std::vector<Atom> atoms_;
  std::vector<Bond> bonds_;
  std::vector<int> free_;
  int rings_ = 0;
};
}  // namespace

std::string_view to_string(Formula f) {
  switch (f) {
  case Formula::kDonorDefault:
    return "donor_default";
  case Formula::kAcceptorRelated:
    return "acceptor_related";
  case Formula::kAcceptorUnrelated:
    return "acceptor_unrelated";
  }
  return "";
}

Formula formula_from_string(std::string_view name) {
  for (Formula f: { Formula::kDonorDefault, Formula::kAcceptorRelated,
                    Formula::kAcceptorUnrelated }) {
    if (to_string(f) == name)
      return f;
  }
  throw UnknownFormula("unknown target formula '" + std::string(name) + "'");
}

double evaluate_formula(Formula f, const DescriptorVector &d) {
  switch (f) {
  case Formula::kDonorDefault:
    return 0.5 * d.molecular_weight / 100.0 + 1.0 * d.aromatic_rings;
  case Formula::kAcceptorRelated:
    return 0.4 * d.molecular_weight / 100.0 + 0.8 * d.aromatic_rings
           + 0.5 * d.rotatable_bonds;
  case Formula::kAcceptorUnrelated:
    return static_cast<double>(d.hbd - d.hba);
  }
  return 0;
}

void GenConfig::validate() const {
  if (n_molecules < 1)
    throw Error("GenConfig: n_molecules must be >= 1");
  if (max_heavy_atoms < 1)
    throw Error("GenConfig: max_heavy_atoms must be >= 1");
  if (!(noise_sd >= 0))
    throw Error("GenConfig: noise_sd must be >= 0");
}

std::uint64_t molecule_key(const MolecularGraph &mol) {
  std::vector<std::uint64_t> ids = atom_identifiers(mol, mol.num_atoms());
  std::sort(ids.begin(), ids.end());
  std::uint64_t h = hash_combine(static_cast<std::uint64_t>(mol.num_atoms()),
                                 static_cast<std::uint64_t>(mol.num_bonds()));
  for (std::uint64_t id: ids)
    h = hash_combine(h, id);
  return h;
}

std::vector<std::string> generate_molecules(const GenConfig &cfg) {
  cfg.validate();
  Rng rng(derive_seed(cfg.seed, "generate_molecules"));
  std::unordered_set<std::uint64_t> seen;
  std::vector<std::string> out;
  const long budget = 200L * cfg.n_molecules + 1000;
  for (long attempt = 0;
       attempt < budget && static_cast<int>(out.size()) < cfg.n_molecules;
       ++attempt) {
    MolecularGraph mol = SkeletonBuilder(rng, cfg.max_heavy_atoms).build();
    if (!seen.insert(molecule_key(mol)).second)
      continue;
    int root = static_cast<int>(uniform_index(rng, mol.num_atoms()));
    std::string smiles = to_smiles(mol, root);
    parse_smiles(smiles);  // construction invariant; throws on a writer bug
    out.push_back(std::move(smiles));
  }
  if (static_cast<int>(out.size()) < cfg.n_molecules)
    throw GenerationExhausted("generate_molecules: only "
                              + std::to_string(out.size()) + " of "
                              + std::to_string(cfg.n_molecules)
                              + " unique molecules within the attempt budget");
  return out;
}

Dataset label_dataset(std::span<const std::string> smiles, Formula formula,
                      double noise_sd, std::uint64_t seed, std::string name,
                      std::string id_prefix) {
  if (!(noise_sd >= 0))
    throw Error("label_dataset: noise_sd must be >= 0");
  Rng rng(derive_seed(seed, "label_noise"));
  Dataset ds;
  ds.name = std::move(name);
  ds.task = Task::kRegression;
  ds.records.reserve(smiles.size());
  for (std::size_t i = 0; i < smiles.size(); ++i) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%05zu", i);
    Record r;
    r.id = id_prefix + buf;
    r.smiles = smiles[i];
    r.target = evaluate_formula(formula, compute_descriptors(parse_smiles(smiles[i])));
    if (noise_sd > 0)
      r.target += noise_sd * standard_normal(rng);
    ds.records.push_back(std::move(r));
  }
  return ds;
}

}  // namespace molxfer
