//
// Project molxfer - Copyright 2026 The molxfer Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "molxfer/molgraph.h"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <queue>
#include <string>
#include <utility>
#include <vector>

namespace molxfer {
namespace {
struct ElementInfo {
  std::string_view symbol;
  int atomic_number;
  double weight;
};

constexpr std::array<ElementInfo, kNumElements> kElementTable = { {
  { "B", 5, 10.812 },
  { "C", 6, 12.011 },
  { "N", 7, 14.007 },
  { "O", 8, 15.999 },
  { "P", 15, 30.974 },
  { "S", 16, 32.067 },
  { "F", 9, 18.998 },
  { "Cl", 17, 35.453 },
  { "Br", 35, 79.904 },
  { "I", 53, 126.904 },
} };

// Allowed valences keyed by (atomic number - formal charge), i.e. an
// isoelectronic lookup: N+ behaves like C, O- like F.
std::span<const int> allowed_valences(int effective_z) {
  static constexpr int k0[] = { 0 }, k1[] = { 1 }, k2[] = { 2 }, k3[] = { 3 },
                       k4[] = { 4 }, k35[] = { 3, 5 }, k246[] = { 2, 4, 6 },
                       k135[] = { 1, 3, 5 };
  switch (effective_z) {
  case 2:
  case 10:
  case 18:
  case 36:
  case 54:
    return k0;
  case 3:
  case 9:
  case 17:
  case 35:
    return k1;
  case 4:
  case 8:
    return k2;
  case 5:
  case 13:
    return k3;
  case 6:
  case 14:
  case 32:
    return k4;
  case 7:
  case 15:
  case 33:
  case 51:
    return k35;
  case 16:
  case 34:
  case 52:
    return k246;
  case 53:
    return k135;
  default:
    return {};
  }
}

int bond_valence_units(BondOrder order) {
  switch (order) {
  case BondOrder::kSingle:
  case BondOrder::kAromatic:
    return 1;
  case BondOrder::kDouble:
    return 2;
  case BondOrder::kTriple:
    return 3;
  }
  return 1;
}

SmilesError make_error(SmilesErrorKind kind, const std::string &msg) {
  return SmilesError(kind, std::string(to_string(kind)) + ": " + msg);
}

using EdgeSet = std::vector<std::uint64_t>;

bool edge_set_less(const EdgeSet &a, const EdgeSet &b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

struct Candidate {
  int length;
  EdgeSet edges;
  std::vector<int> atoms;
};

bool match_pi(int i, std::vector<char> &open, const std::vector<Bond> &bonds,
              const std::vector<std::vector<Neighbor>> &adj) {
  const int n = static_cast<int>(open.size());
  while (i < n && !open[i])
    ++i;
  if (i == n)
    return true;
  open[i] = 0;
  for (const Neighbor &nb: adj[i]) {
    if (!open[nb.atom] || bonds[nb.bond].order != BondOrder::kAromatic)
      continue;
    open[nb.atom] = 0;
    if (match_pi(i + 1, open, bonds, adj))
      return true;
    open[nb.atom] = 1;
  }
  open[i] = 1;
  return false;
}

// Perfect matching of the pi-needing atoms over aromatic bonds.
bool kekulizable(std::vector<char> open, const std::vector<Bond> &bonds,
                 const std::vector<std::vector<Neighbor>> &adj) {
  return match_pi(0, open, bonds, adj);
}

// Minimum cycle basis via Horton's candidate set and GF(2) elimination.
std::vector<std::vector<int>>
minimum_cycle_basis(int n_atoms, const std::vector<Bond> &bonds,
                    const std::vector<Neighbor> &adjacency,
                    const std::vector<int> &offset) {
  const int n_bonds = static_cast<int>(bonds.size());
  const int rank = n_bonds - n_atoms + 1;
  if (rank <= 0)
    return {};

  const int words = (n_bonds + 63) / 64;
  std::vector<Candidate> candidates;

  std::vector<int> parent(n_atoms), parent_bond(n_atoms), dist(n_atoms);
  std::vector<int> mark(n_atoms, -1);
  for (int root = 0; root < n_atoms; ++root) {
    std::fill(dist.begin(), dist.end(), -1);
    std::queue<int> queue;
    dist[root] = 0;
    parent[root] = -1;
    parent_bond[root] = -1;
    queue.push(root);
    while (!queue.empty()) {
      int u = queue.front();
      queue.pop();
      for (int k = offset[u]; k < offset[u + 1]; ++k) {
        int v = adjacency[k].atom;
        if (dist[v] >= 0)
          continue;
        dist[v] = dist[u] + 1;
        parent[v] = u;
        parent_bond[v] = adjacency[k].bond;
        queue.push(v);
      }
    }

    for (int b = 0; b < n_bonds; ++b) {
      int x = bonds[b].begin, y = bonds[b].end;
      if (parent_bond[x] == b || parent_bond[y] == b)
        continue;

      // Paths root..x and root..y must meet only at root.
      std::vector<int> px, py;
      for (int a = x; a >= 0; a = parent[a])
        px.push_back(a);
      for (int a = y; a >= 0; a = parent[a])
        py.push_back(a);
      int stamp = root * n_bonds + b;
      for (int a: px)
        mark[a] = stamp;
      int shared = 0;
      for (int a: py)
        shared += (mark[a] == stamp) ? 1 : 0;
      if (shared != 1)
        continue;

      Candidate cand;
      cand.edges.assign(words, 0);
      auto set_edge = [&](int e) { cand.edges[e / 64] |= 1ULL << (e % 64); };
      set_edge(b);
      for (int a = x; parent[a] >= 0; a = parent[a])
        set_edge(parent_bond[a]);
      for (int a = y; parent[a] >= 0; a = parent[a])
        set_edge(parent_bond[a]);
      cand.length = dist[x] + dist[y] + 1;
      // Cycle order: root .. x, then y .. (excluding root).
      cand.atoms.assign(px.rbegin(), px.rend());
      for (std::size_t i = 0; i + 1 < py.size(); ++i)
        cand.atoms.push_back(py[i]);
      candidates.push_back(std::move(cand));
    }
  }

  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate &a, const Candidate &b) {
              if (a.length != b.length)
                return a.length < b.length;
              return edge_set_less(a.edges, b.edges);
            });
  candidates.erase(std::unique(candidates.begin(), candidates.end(),
                               [](const Candidate &a, const Candidate &b) {
                                 return a.edges == b.edges;
                               }),
                   candidates.end());

  // Reduced rows keyed by pivot bit.
  std::vector<EdgeSet> pivots_rows;
  std::vector<int> pivots;
  std::vector<std::vector<int>> basis;
  for (auto &cand: candidates) {
    EdgeSet row = cand.edges;
    for (std::size_t p = 0; p < pivots.size(); ++p) {
      int bit = pivots[p];
      if ((row[bit / 64] >> (bit % 64)) & 1ULL) {
        for (int w = 0; w < words; ++w)
          row[w] ^= pivots_rows[p][w];
      }
    }
    int pivot = -1;
    for (int w = 0; w < words && pivot < 0; ++w) {
      if (row[w] != 0)
        pivot = w * 64 + __builtin_ctzll(row[w]);
    }
    if (pivot < 0)
      continue;
    pivots.push_back(pivot);
    pivots_rows.push_back(std::move(row));
    basis.push_back(std::move(cand.atoms));
    if (static_cast<int>(basis.size()) == rank)
      break;
  }
  return basis;
}
}  // namespace

std::string_view element_symbol(Element elem) {
  return kElementTable[static_cast<int>(elem)].symbol;
}

int atomic_number(Element elem) {
  return kElementTable[static_cast<int>(elem)].atomic_number;
}

double atomic_weight(Element elem) {
  return kElementTable[static_cast<int>(elem)].weight;
}

std::optional<Element> element_from_symbol(std::string_view symbol) {
  for (int i = 0; i < kNumElements; ++i) {
    if (kElementTable[i].symbol == symbol)
      return static_cast<Element>(i);
  }
  return std::nullopt;
}

std::string_view to_string(SmilesErrorKind kind) {
  switch (kind) {
  case SmilesErrorKind::kSyntax:
    return "SyntaxError";
  case SmilesErrorKind::kUnclosedRing:
    return "UnclosedRing";
  case SmilesErrorKind::kUnbalancedParenthesis:
    return "UnbalancedParenthesis";
  case SmilesErrorKind::kUnsupportedElement:
    return "UnsupportedElement";
  case SmilesErrorKind::kValence:
    return "ValenceError";
  case SmilesErrorKind::kMultiFragment:
    return "MultiFragmentError";
  case SmilesErrorKind::kAromaticity:
    return "AromaticityError";
  case SmilesErrorKind::kDuplicateBond:
    return "DuplicateBond";
  }
  return "SmilesError";
}

MolecularGraph MolecularGraph::assemble(std::vector<Atom> atoms,
                                        std::vector<Bond> bonds,
                                        std::string source_smiles) {
  MolecularGraph mol;
  const int n = static_cast<int>(atoms.size());
  if (n == 0)
    throw make_error(SmilesErrorKind::kSyntax, "molecule has no atoms");

  // Adjacency in CSR form, neighbors in ascending atom order.
  std::vector<std::vector<Neighbor>> adj(n);
  for (int b = 0; b < static_cast<int>(bonds.size()); ++b) {
    Bond &bond = bonds[b];
    if (bond.begin < 0 || bond.begin >= n || bond.end < 0 || bond.end >= n)
      throw make_error(SmilesErrorKind::kSyntax, "bond endpoint out of range");
    if (bond.begin == bond.end)
      throw make_error(SmilesErrorKind::kSyntax,
                       "bond joins atom " + std::to_string(bond.begin)
                           + " to itself");
    adj[bond.begin].push_back({ bond.end, b });
    adj[bond.end].push_back({ bond.begin, b });
    bond.in_ring = false;
  }
  mol.adj_offset_.assign(n + 1, 0);
  for (int i = 0; i < n; ++i) {
    auto &list = adj[i];
    std::sort(list.begin(), list.end(),
              [](Neighbor a, Neighbor b) { return a.atom < b.atom; });
    for (std::size_t k = 1; k < list.size(); ++k) {
      if (list[k].atom == list[k - 1].atom)
        throw make_error(SmilesErrorKind::kDuplicateBond,
                         "atoms " + std::to_string(i) + " and "
                             + std::to_string(list[k].atom)
                             + " are bonded twice");
    }
    mol.adj_offset_[i + 1] = mol.adj_offset_[i] + static_cast<int>(list.size());
    mol.adjacency_.insert(mol.adjacency_.end(), list.begin(), list.end());
  }

  // Connectivity.
  {
    std::vector<char> seen(n, 0);
    std::vector<int> stack = { 0 };
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (const Neighbor &nb: adj[u]) {
        if (!seen[nb.atom]) {
          seen[nb.atom] = 1;
          ++count;
          stack.push_back(nb.atom);
        }
      }
    }
    if (count != n)
      throw make_error(SmilesErrorKind::kMultiFragment,
                       "molecule graph is disconnected");
  }

  // Valences and hydrogens. needs_pi marks aromatic atoms left with one
  // valence unit for a double bond in some Kekule structure.
  std::vector<char> needs_pi(n, 0);
  for (int i = 0; i < n; ++i) {
    Atom &atom = atoms[i];
    atom.degree = static_cast<int>(adj[i].size());
    int n_arom = 0, other = 0;
    for (const Neighbor &nb: adj[i]) {
      BondOrder order = bonds[nb.bond].order;
      if (order == BondOrder::kAromatic)
        ++n_arom;
      else
        other += bond_valence_units(order);
    }
    int base = n_arom + other + atom.explicit_h.value_or(0);
    std::span<const int> allowed =
        allowed_valences(atomic_number(atom.element) - atom.formal_charge);
    if (!allowed.empty() && base > allowed.back()) {
      throw make_error(SmilesErrorKind::kValence,
                       "atom " + std::to_string(i) + " ("
                           + std::string(element_symbol(atom.element))
                           + ") has bond order sum " + std::to_string(base)
                           + " above maximum valence "
                           + std::to_string(allowed.back()));
    }
    if (allowed.empty()) {
      atom.implicit_h = 0;
      continue;
    }
    if (atom.is_bracket()) {
      atom.implicit_h = 0;
      if (atom.is_aromatic && n_arom > 0) {
        int target = allowed.back();
        for (int v: allowed) {
          if (v >= base) {
            target = v;
            break;
          }
        }
        needs_pi[i] = base + 1 <= target;
      }
      continue;
    }
    // An aromatic atom contributes one extra valence unit to its pi system.
    int used = base + ((atom.is_aromatic && n_arom > 0) ? 1 : 0);
    int target = allowed.back();
    for (int v: allowed) {
      if (v >= base) {
        target = v;
        break;
      }
    }
    atom.implicit_h = std::max(0, target - used);
    if (atom.is_aromatic && n_arom > 0)
      needs_pi[i] = base + atom.implicit_h + 1 <= target;
  }
  if (!kekulizable(needs_pi, bonds, adj))
    throw make_error(SmilesErrorKind::kAromaticity,
                     "aromatic system has no valid Kekule structure");

  mol.atoms_ = std::move(atoms);
  mol.bonds_ = std::move(bonds);
  mol.source_smiles_ = std::move(source_smiles);
  mol.rings_ = minimum_cycle_basis(n, mol.bonds_, mol.adjacency_,
                                   mol.adj_offset_);

  mol.atom_in_ring_.assign(n, 0);
  for (const auto &ring: mol.rings_) {
    for (std::size_t k = 0; k < ring.size(); ++k) {
      int a = ring[k], b = ring[(k + 1) % ring.size()];
      mol.atom_in_ring_[a] = 1;
      mol.bonds_[mol.find_bond(a, b)].in_ring = true;
    }
  }

  for (int i = 0; i < n; ++i) {
    if (mol.atoms_[i].is_aromatic && !mol.atom_in_ring_[i])
      throw make_error(SmilesErrorKind::kAromaticity,
                       "aromatic atom " + std::to_string(i)
                           + " is not in a ring");
  }
  return mol;
}

int MolecularGraph::find_bond(int a, int b) const {
  for (const Neighbor &nb: neighbors(a)) {
    if (nb.atom == b)
      return nb.bond;
  }
  return -1;
}

bool MolecularGraph::atom_in_ring_of_size(int atom, int size) const {
  for (const auto &ring: rings_) {
    if (static_cast<int>(ring.size()) == size
        && std::find(ring.begin(), ring.end(), atom) != ring.end())
      return true;
  }
  return false;
}

MolecularGraph MolecularGraph::reindexed(std::span<const int> new_index) const {
  const int n = num_atoms();
  if (static_cast<int>(new_index.size()) != n)
    throw ShapeError("reindexed: permutation size does not match atom count");
  std::vector<Atom> atoms(n);
  std::vector<char> used(n, 0);
  for (int i = 0; i < n; ++i) {
    int j = new_index[i];
    if (j < 0 || j >= n || used[j])
      throw ShapeError("reindexed: not a permutation");
    used[j] = 1;
    atoms[j] = atoms_[i];
  }
  std::vector<Bond> bonds;
  bonds.reserve(bonds_.size());
  for (const Bond &b: bonds_)
    bonds.push_back({ new_index[b.begin], new_index[b.end], b.order, false });
  return assemble(std::move(atoms), std::move(bonds), source_smiles_);
}

}  // namespace molxfer
