//
// Project molxfer - Copyright 2026 The molxfer Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef MOLXFER_MOLGRAPH_H_
#define MOLXFER_MOLGRAPH_H_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "molxfer/error.h"

namespace molxfer {

enum class Element : std::uint8_t { kB, kC, kN, kO, kP, kS, kF, kCl, kBr, kI };

inline constexpr int kNumElements = 10;
inline constexpr double kHydrogenWeight = 1.008;

std::string_view element_symbol(Element elem);
int atomic_number(Element elem);
// Standard atomic weight in g/mol.
double atomic_weight(Element elem);
std::optional<Element> element_from_symbol(std::string_view symbol);

enum class BondOrder : std::uint8_t {
  kSingle = 1,
  kDouble = 2,
  kTriple = 3,
  kAromatic = 4,
};

struct Atom {
  Element element = Element::kC;
  bool is_aromatic = false;
  int formal_charge = 0;
  // Present only for bracket atoms; bracket atoms never receive implicit H.
  std::optional<int> explicit_h;
  int implicit_h = 0;
  int degree = 0;

  int total_h() const { return implicit_h + explicit_h.value_or(0); }
  bool is_bracket() const { return explicit_h.has_value(); }
};

struct Bond {
  int begin = 0;
  int end = 0;
  BondOrder order = BondOrder::kSingle;
  bool in_ring = false;

  int other(int atom) const { return atom == begin ? end : begin; }
};

struct Neighbor {
  int atom;
  int bond;
};

enum class SmilesErrorKind {
  kSyntax,
  kUnclosedRing,
  kUnbalancedParenthesis,
  kUnsupportedElement,
  kValence,
  kMultiFragment,
  kAromaticity,
  kDuplicateBond,
};

std::string_view to_string(SmilesErrorKind kind);

class SmilesError: public Error {
public:
  SmilesError(SmilesErrorKind kind, const std::string &what)
      : Error(what), kind_(kind) { }

  SmilesErrorKind kind() const { return kind_; }

private:
  SmilesErrorKind kind_;
};

class DegreeOverflow: public Error {
public:
  using Error::Error;
};

/**
 * A validated, connected heavy-atom graph. Instances are created through
 * parse_smiles() or MolecularGraph::assemble(); both compute degrees,
 * implicit hydrogens, ring membership and the ring basis.
 *
 * The ring basis is a minimum-length cycle basis: Horton candidate cycles
 * sorted by length and accepted greedily when independent over GF(2). Its
 * size always equals bonds - atoms + 1.
 */
class MolecularGraph {
public:
  MolecularGraph() = default;

  // Validates the parts and derives everything else. Atoms whose explicit_h
  // is unset get implicit hydrogens from the valence table. Throws
  // SmilesError on any violated invariant.
  static MolecularGraph assemble(std::vector<Atom> atoms,
                                 std::vector<Bond> bonds,
                                 std::string source_smiles = {});

  const std::vector<Atom> &atoms() const { return atoms_; }
  const std::vector<Bond> &bonds() const { return bonds_; }
  const std::vector<std::vector<int>> &rings() const { return rings_; }
  const std::string &source_smiles() const { return source_smiles_; }

  int num_atoms() const { return static_cast<int>(atoms_.size()); }
  int num_bonds() const { return static_cast<int>(bonds_.size()); }
  const Atom &atom(int idx) const { return atoms_[idx]; }
  const Bond &bond(int idx) const { return bonds_[idx]; }

  std::span<const Neighbor> neighbors(int atom) const {
    return { adjacency_.data() + adj_offset_[atom],
             adjacency_.data() + adj_offset_[atom + 1] };
  }

  // Bond index joining a and b, or -1.
  int find_bond(int a, int b) const;
  bool atom_in_ring(int atom) const { return atom_in_ring_[atom] != 0; }
  bool atom_in_ring_of_size(int atom, int size) const;

  // Returns the same molecule with atom i moved to position new_index[i].
  MolecularGraph reindexed(std::span<const int> new_index) const;

private:
  std::vector<Atom> atoms_;
  std::vector<Bond> bonds_;
  std::vector<std::vector<int>> rings_;
  std::string source_smiles_;
  std::vector<Neighbor> adjacency_;
  std::vector<int> adj_offset_;
  std::vector<char> atom_in_ring_;
};

// Parses the supported SMILES subset: organic-subset and bracket atoms,
// branches, ring closures (including %nn), and the bond symbols - = # : / \.
// Stereo marks and isotopes are read and discarded. Throws SmilesError.
MolecularGraph parse_smiles(std::string_view smiles);

// Writes a SMILES string by depth-first traversal from root, visiting
// neighbors in ascending atom order. parse_smiles(to_smiles(m)) yields a
// graph isomorphic to m.
std::string to_smiles(const MolecularGraph &mol, int root = 0);

enum class Descriptor {
  kMolecularWeight,
  kAromaticRings,
  kRotatableBonds,
  kHba,
  kHbd,
  kHeterocycles,
  kTpsa,
};

inline constexpr std::array<Descriptor, 7> kAllDescriptors = {
  Descriptor::kMolecularWeight, Descriptor::kAromaticRings,
  Descriptor::kRotatableBonds,  Descriptor::kHba,
  Descriptor::kHbd,             Descriptor::kHeterocycles,
  Descriptor::kTpsa,
};

std::string_view to_string(Descriptor desc);
std::optional<Descriptor> descriptor_from_string(std::string_view name);

struct DescriptorVector {
  double molecular_weight = 0;
  int aromatic_rings = 0;
  int rotatable_bonds = 0;
  int hba = 0;
  int hbd = 0;
  int heterocycles = 0;
  double tpsa = 0;

  double get(Descriptor desc) const;
  bool operator==(const DescriptorVector &) const = default;
};

DescriptorVector compute_descriptors(const MolecularGraph &mol);

// Ertl polar surface contribution of one N or O atom; 0 for other elements.
double tpsa_contribution(const MolecularGraph &mol, int atom);

inline constexpr int kMaxFeatureDegree = 4;
inline constexpr int kAtomFeatureDim = kNumElements + kMaxFeatureDegree + 1 + 3;

// Row per atom: element one-hot (10), heavy degree one-hot 0-4 (5), hydrogen
// count, aromatic flag, formal charge. Throws DegreeOverflow above degree 4.
Eigen::MatrixXd atom_feature_matrix(const MolecularGraph &mol);

}  // namespace molxfer

#endif  // MOLXFER_MOLGRAPH_H_
