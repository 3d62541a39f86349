//
// Project molxfer - Copyright 2026 The molxfer Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <array>
#include <string>
#include <vector>

#include "molxfer/molgraph.h"

namespace molxfer {
namespace {
struct BondCounts {
  int single = 0;
  int dbl = 0;
  int triple = 0;
  int aromatic = 0;
};

BondCounts count_bonds(const MolecularGraph &mol, int atom) {
  BondCounts c;
  for (const Neighbor &nb: mol.neighbors(atom)) {
    switch (mol.bond(nb.bond).order) {
    case BondOrder::kSingle:
      ++c.single;
      break;
    case BondOrder::kDouble:
      ++c.dbl;
      break;
    case BondOrder::kTriple:
      ++c.triple;
      break;
    case BondOrder::kAromatic:
      ++c.aromatic;
      break;
    }
  }
  return c;
}

double nitrogen_tpsa(const BondCounts &c, int n_nbrs, int h, int chg,
                     bool in3) {
  if (n_nbrs == 1) {
    if (h == 0 && chg == 0 && c.triple == 1)
      return 23.79;
    if (h == 1 && chg == 0 && c.dbl == 1)
      return 23.85;
    if (h == 2 && chg == 0 && c.single == 1)
      return 26.02;
    if (h == 2 && chg == 1 && c.dbl == 1)
      return 25.59;
    if (h == 3 && chg == 1 && c.single == 1)
      return 27.64;
  } else if (n_nbrs == 2) {
    if (h == 0 && chg == 0 && c.single == 1 && c.dbl == 1)
      return 12.36;
    if (h == 0 && chg == 0 && c.triple == 1 && c.dbl == 1)
      return 13.60;
    if (h == 1 && chg == 0 && c.single == 2)
      return in3 ? 21.94 : 12.03;
    if (h == 0 && chg == 1 && c.triple == 1 && c.single == 1)
      return 4.36;
    if (h == 1 && chg == 1 && c.dbl == 1 && c.single == 1)
      return 13.97;
    if (h == 2 && chg == 1 && c.single == 2)
      return 16.61;
    if (h == 0 && chg == 0 && c.aromatic == 2)
      return 12.89;
    if (h == 1 && chg == 0 && c.aromatic == 2)
      return 15.79;
    if (h == 1 && chg == 1 && c.aromatic == 2)
      return 14.14;
  } else if (n_nbrs == 3) {
    if (h == 0 && chg == 0 && c.single == 3)
      return in3 ? 3.01 : 3.24;
    if (h == 0 && chg == 0 && c.single == 1 && c.dbl == 2)
      return 11.68;
    if (h == 0 && chg == 1 && c.single == 2 && c.dbl == 1)
      return 3.01;
    if (h == 1 && chg == 1 && c.single == 3)
      return 4.44;
    if (h == 0 && chg == 0 && c.aromatic == 3)
      return 4.41;
    if (h == 0 && chg == 0 && c.single == 1 && c.aromatic == 2)
      return 4.93;
    if (h == 0 && chg == 0 && c.dbl == 1 && c.aromatic == 2)
      return 8.39;
    if (h == 0 && chg == 1 && c.aromatic == 3)
      return 4.10;
    if (h == 0 && chg == 1 && c.single == 1 && c.aromatic == 2)
      return 3.88;
  } else if (n_nbrs == 4) {
    if (h == 0 && chg == 1 && c.single == 4)
      return 0.0;
  }
  return std::max(0.0, 30.5 - n_nbrs * 8.2 + h * 1.5);
}

double oxygen_tpsa(const BondCounts &c, int n_nbrs, int h, int chg, bool in3) {
  if (n_nbrs == 1) {
    if (h == 0 && chg == 0 && c.dbl == 1)
      return 17.07;
    if (h == 1 && chg == 0 && c.single == 1)
      return 20.23;
    if (h == 0 && chg == -1 && c.single == 1)
      return 23.06;
  } else if (n_nbrs == 2) {
    if (h == 0 && chg == 0 && c.single == 2)
      return in3 ? 12.53 : 9.23;
    if (h == 0 && chg == 0 && c.aromatic == 2)
      return 13.14;
  }
  return std::max(0.0, 28.5 - n_nbrs * 8.6 + h * 1.5);
}

bool is_n_or_o(Element e) {
  return e == Element::kN || e == Element::kO;
}
}  // namespace

std::string_view to_string(Descriptor desc) {
  switch (desc) {
  case Descriptor::kMolecularWeight:
    return "molecular_weight";
  case Descriptor::kAromaticRings:
    return "aromatic_rings";
  case Descriptor::kRotatableBonds:
    return "rotatable_bonds";
  case Descriptor::kHba:
    return "hba";
  case Descriptor::kHbd:
    return "hbd";
  case Descriptor::kHeterocycles:
    return "heterocycles";
  case Descriptor::kTpsa:
    return "tpsa";
  }
  return "";
}

std::optional<Descriptor> descriptor_from_string(std::string_view name) {
  for (Descriptor d: kAllDescriptors) {
    if (to_string(d) == name)
      return d;
  }
  return std::nullopt;
}

double DescriptorVector::get(Descriptor desc) const {
  switch (desc) {
  case Descriptor::kMolecularWeight:
    return molecular_weight;
  case Descriptor::kAromaticRings:
    return aromatic_rings;
  case Descriptor::kRotatableBonds:
    return rotatable_bonds;
  case Descriptor::kHba:
    return hba;
  case Descriptor::kHbd:
    return hbd;
  case Descriptor::kHeterocycles:
    return heterocycles;
  case Descriptor::kTpsa:
    return tpsa;
  }
  return 0;
}

double tpsa_contribution(const MolecularGraph &mol, int atom) {
  const Atom &a = mol.atom(atom);
  if (!is_n_or_o(a.element))
    return 0.0;
  BondCounts c = count_bonds(mol, atom);
  bool in3 = mol.atom_in_ring_of_size(atom, 3);
  if (a.element == Element::kN)
    return nitrogen_tpsa(c, a.degree, a.total_h(), a.formal_charge, in3);
  return oxygen_tpsa(c, a.degree, a.total_h(), a.formal_charge, in3);
}

DescriptorVector compute_descriptors(const MolecularGraph &mol) {
  DescriptorVector d;
  // Sums run in a fixed order so atom reordering cannot change the last bit.
  std::array<int, kNumElements> element_count {};
  int hydrogens = 0;
  std::vector<double> polar;
  for (int i = 0; i < mol.num_atoms(); ++i) {
    const Atom &a = mol.atom(i);
    ++element_count[static_cast<int>(a.element)];
    hydrogens += a.total_h();
    if (is_n_or_o(a.element)) {
      ++d.hba;
      if (a.total_h() > 0)
        ++d.hbd;
    }
    polar.push_back(tpsa_contribution(mol, i));
  }
  for (int e = 0; e < kNumElements; ++e)
    d.molecular_weight += element_count[e] * atomic_weight(static_cast<Element>(e));
  d.molecular_weight += hydrogens * kHydrogenWeight;
  std::sort(polar.begin(), polar.end());
  for (double t: polar)
    d.tpsa += t;

  for (const Bond &b: mol.bonds()) {
    if (b.order == BondOrder::kSingle && !b.in_ring
        && mol.atom(b.begin).degree >= 2 && mol.atom(b.end).degree >= 2)
      ++d.rotatable_bonds;
  }

  for (const auto &ring: mol.rings()) {
    bool all_aromatic = true, hetero = false;
    for (int a: ring) {
      all_aromatic = all_aromatic && mol.atom(a).is_aromatic;
      hetero = hetero || mol.atom(a).element != Element::kC;
    }
    d.aromatic_rings += all_aromatic ? 1 : 0;
    d.heterocycles += hetero ? 1 : 0;
  }
  return d;
}

Eigen::MatrixXd atom_feature_matrix(const MolecularGraph &mol) {
  Eigen::MatrixXd features = Eigen::MatrixXd::Zero(mol.num_atoms(),
                                                   kAtomFeatureDim);
  for (int i = 0; i < mol.num_atoms(); ++i) {
    const Atom &a = mol.atom(i);
    if (a.degree > kMaxFeatureDegree)
      throw DegreeOverflow("atom " + std::to_string(i) + " has degree "
                           + std::to_string(a.degree)
                           + "; features support degree <= 4");
    features(i, static_cast<int>(a.element)) = 1.0;
    features(i, kNumElements + a.degree) = 1.0;
    int col = kNumElements + kMaxFeatureDegree + 1;
    features(i, col) = a.total_h();
    features(i, col + 1) = a.is_aromatic ? 1.0 : 0.0;
    features(i, col + 2) = a.formal_charge;
  }
  return features;
}

}  // namespace molxfer
