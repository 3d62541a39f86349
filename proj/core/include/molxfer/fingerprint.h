//
// Project molxfer - Copyright 2026 The molxfer Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef MOLXFER_FINGERPRINT_H_
#define MOLXFER_FINGERPRINT_H_

#include <cstdint>
#include <span>
#include <vector>

#include "molxfer/error.h"
#include "molxfer/molgraph.h"

namespace molxfer {

inline constexpr int kDefaultFingerprintBits = 2048;
inline constexpr int kEcfp4Radius = 2;
inline constexpr int kEcfp6Radius = 3;

class LengthMismatch: public Error {
public:
  using Error::Error;
};

// Fixed-width bit vector tagged with the radius it was generated at.
class Fingerprint {
public:
  Fingerprint() = default;
  Fingerprint(int n_bits, int radius);

  int n_bits() const { return n_bits_; }
  int radius() const { return radius_; }
  int n_set() const;

  bool test(int bit) const { return (words_[bit >> 6] >> (bit & 63)) & 1ULL; }
  void set(int bit) { words_[bit >> 6] |= 1ULL << (bit & 63); }

  std::span<const std::uint64_t> words() const { return words_; }
  std::vector<int> on_bits() const;

  bool operator==(const Fingerprint &) const = default;

private:
  int n_bits_ = 0;
  int radius_ = 0;
  std::vector<std::uint64_t> words_;
};

// splitmix64 finalizer; the only hash primitive used for fingerprints.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t hash_combine(std::uint64_t seed, std::uint64_t value) {
  return mix64(seed ^ (mix64(value) + 0x632be59bd9b4e019ULL + (seed << 6)
                       + (seed >> 2)));
}

// Initial per-atom invariant: element, heavy degree, hydrogen count, charge,
// aromaticity.
std::uint64_t atom_invariant(const Atom &atom);

// Per-atom identifiers after the given number of neighborhood updates.
std::vector<std::uint64_t> atom_identifiers(const MolecularGraph &mol,
                                            int iterations);

// Unfolded feature identifiers up to radius, one per distinct covered
// substructure (first radius wins; among equal substructures at one radius
// the smallest identifier is kept). Sorted ascending, may hold repeats when
// distinct substructures hash alike.
std::vector<std::uint64_t> ecfp_features(const MolecularGraph &mol,
                                         int radius);

// Circular fingerprint folded to n_bits (power of two >= 64, radius 0-4).
// Throws Error on invalid arguments.
Fingerprint ecfp(const MolecularGraph &mol, int radius,
                 int n_bits = kDefaultFingerprintBits);

// 1 - |a & b| / |a | b|; 0 when both are empty. Throws LengthMismatch when
// widths or radii differ.
double tanimoto_distance(const Fingerprint &a, const Fingerprint &b);

}  // namespace molxfer

#endif  // MOLXFER_FINGERPRINT_H_
