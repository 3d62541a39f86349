//
// Project molxfer - Copyright 2026 The molxfer Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef MOLXFER_RANDOM_H_
#define MOLXFER_RANDOM_H_

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string_view>
#include <utility>
#include <vector>

#include "molxfer/fingerprint.h"

namespace molxfer {

// std::mt19937_64 output is fixed by the standard; the distributions in
// <random> are not, so everything below is written out by hand.
using Rng = std::mt19937_64;

inline double uniform01(Rng &rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(Rng &rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

// Index in [0, n). Modulo bias is below 2^-40 for every n used here.
inline std::size_t uniform_index(Rng &rng, std::size_t n) {
  return static_cast<std::size_t>(rng() % n);
}

inline double standard_normal(Rng &rng) {
  double u1 = uniform01(rng);
  while (u1 <= 0.0)
    u1 = uniform01(rng);
  double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

template <class T>
void shuffle(std::vector<T> &items, Rng &rng) {
  for (std::size_t i = items.size(); i > 1; --i)
    std::swap(items[i - 1], items[uniform_index(rng, i)]);
}

// Stable sub-seed for a named sub-task of a master seed.
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view tag,
                                 std::uint64_t index = 0) {
  std::uint64_t h = mix64(master);
  for (char c: tag)
    h = hash_combine(h, static_cast<unsigned char>(c));
  return hash_combine(h, index);
}

}  // namespace molxfer

#endif  // MOLXFER_RANDOM_H_
