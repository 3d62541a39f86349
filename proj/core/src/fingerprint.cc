//
// Project molxfer - Copyright 2026 The molxfer Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "molxfer/fingerprint.h"

#include <algorithm>
#include <bit>
#include <set>
#include <string>
#include <utility>

namespace molxfer {
namespace {
using BitSet = std::vector<std::uint64_t>;

void set_bit(BitSet &bits, int i) {
  bits[i >> 6] |= 1ULL << (i & 63);
}

void or_into(BitSet &dst, const BitSet &src) {
  for (std::size_t w = 0; w < dst.size(); ++w)
    dst[w] |= src[w];
}

std::uint64_t bond_code(BondOrder order) {
  return static_cast<std::uint64_t>(order);
}

std::vector<std::uint64_t> step_identifiers(const MolecularGraph &mol,
                                            const std::vector<std::uint64_t> &ids,
                                            int iteration) {
  std::vector<std::uint64_t> next(ids.size());
  std::vector<std::pair<std::uint64_t, std::uint64_t>> env;
  for (int v = 0; v < mol.num_atoms(); ++v) {
    env.clear();
    for (const Neighbor &nb: mol.neighbors(v))
      env.emplace_back(bond_code(mol.bond(nb.bond).order), ids[nb.atom]);
    std::sort(env.begin(), env.end());
    std::uint64_t h = hash_combine(static_cast<std::uint64_t>(iteration), ids[v]);
    for (const auto &[code, id]: env)
      h = hash_combine(hash_combine(h, code), id);
    next[v] = h;
  }
  return next;
}
}  // namespace

Fingerprint::Fingerprint(int n_bits, int radius)
    : n_bits_(n_bits), radius_(radius), words_((n_bits + 63) / 64, 0) { }

int Fingerprint::n_set() const {
  int count = 0;
  for (std::uint64_t w: words_)
    count += std::popcount(w);
  return count;
}

std::vector<int> Fingerprint::on_bits() const {
  std::vector<int> bits;
  for (int i = 0; i < n_bits_; ++i) {
    if (test(i))
      bits.push_back(i);
  }
  return bits;
}

std::uint64_t atom_invariant(const Atom &atom) {
  std::uint64_t h = mix64(static_cast<std::uint64_t>(atomic_number(atom.element)));
  h = hash_combine(h, static_cast<std::uint64_t>(atom.degree));
  h = hash_combine(h, static_cast<std::uint64_t>(atom.total_h()));
  h = hash_combine(h, static_cast<std::uint64_t>(atom.formal_charge + 64));
  h = hash_combine(h, atom.is_aromatic ? 1ULL : 0ULL);
  return h;
}

std::vector<std::uint64_t> atom_identifiers(const MolecularGraph &mol,
                                            int iterations) {
  std::vector<std::uint64_t> ids(mol.num_atoms());
  for (int v = 0; v < mol.num_atoms(); ++v)
    ids[v] = atom_invariant(mol.atom(v));
  for (int r = 1; r <= iterations; ++r)
    ids = step_identifiers(mol, ids, r);
  return ids;
}

std::vector<std::uint64_t> ecfp_features(const MolecularGraph &mol,
                                         int radius) {
  const int n = mol.num_atoms();
  const int atom_words = (n + 63) / 64;
  const int bond_words = (mol.num_bonds() + 63) / 64;

  std::vector<std::uint64_t> ids(n);
  std::vector<BitSet> atoms_cov(n, BitSet(atom_words, 0));
  std::vector<BitSet> bonds_cov(n, BitSet(bond_words, 0));
  for (int v = 0; v < n; ++v) {
    ids[v] = atom_invariant(mol.atom(v));
    set_bit(atoms_cov[v], v);
  }

  std::set<std::pair<BitSet, BitSet>> seen;
  std::vector<std::uint64_t> features;

  auto collect = [&]() {
    // key -> smallest id at this radius
    std::vector<std::pair<std::pair<BitSet, BitSet>, std::uint64_t>> level;
    for (int v = 0; v < n; ++v) {
      auto key = std::make_pair(atoms_cov[v], bonds_cov[v]);
      if (seen.count(key))
        continue;
      level.emplace_back(std::move(key), ids[v]);
    }
    std::sort(level.begin(), level.end());
    for (std::size_t i = 0; i < level.size(); ++i) {
      if (i > 0 && level[i].first == level[i - 1].first)
        continue;
      features.push_back(level[i].second);
    }
    for (auto &entry: level)
      seen.insert(std::move(entry.first));
  };

  collect();
  for (int r = 1; r <= radius; ++r) {
    std::vector<BitSet> next_atoms = atoms_cov, next_bonds = bonds_cov;
    for (int v = 0; v < n; ++v) {
      for (const Neighbor &nb: mol.neighbors(v)) {
        or_into(next_atoms[v], atoms_cov[nb.atom]);
        or_into(next_bonds[v], bonds_cov[nb.atom]);
        set_bit(next_bonds[v], nb.bond);
      }
    }
    atoms_cov = std::move(next_atoms);
    bonds_cov = std::move(next_bonds);
    ids = step_identifiers(mol, ids, r);
    collect();
  }

  std::sort(features.begin(), features.end());
  return features;
}

Fingerprint ecfp(const MolecularGraph &mol, int radius, int n_bits) {
  if (radius < 0 || radius > 4)
    throw Error("ecfp: radius must be in [0, 4], got " + std::to_string(radius));
  if (n_bits < 64 || !std::has_single_bit(static_cast<unsigned>(n_bits)))
    throw Error("ecfp: n_bits must be a power of two >= 64, got "
                + std::to_string(n_bits));
  Fingerprint fp(n_bits, radius);
  const std::uint64_t mask = static_cast<std::uint64_t>(n_bits) - 1;
  for (std::uint64_t id: ecfp_features(mol, radius))
    fp.set(static_cast<int>(id & mask));
  return fp;
}

double tanimoto_distance(const Fingerprint &a, const Fingerprint &b) {
  if (a.n_bits() != b.n_bits() || a.radius() != b.radius())
    throw LengthMismatch("tanimoto_distance: fingerprints differ in width ("
                         + std::to_string(a.n_bits()) + " vs "
                         + std::to_string(b.n_bits()) + ") or radius");
  auto wa = a.words(), wb = b.words();
  int both = 0, either = 0;
  for (std::size_t i = 0; i < wa.size(); ++i) {
    both += std::popcount(wa[i] & wb[i]);
    either += std::popcount(wa[i] | wb[i]);
  }
  if (either == 0)
    return 0.0;
  return 1.0 - static_cast<double>(both) / either;
}

}  // namespace molxfer
