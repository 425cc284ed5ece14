// Copyright 2026 The gss Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace gss {

using NodeId = std::uint32_t;
using EdgeIndex = std::uint64_t;

inline constexpr NodeId kInvalidNode = static_cast<NodeId>(-1);

// Error hierarchy. The CLI maps each class onto a distinct exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad caller-supplied argument (out-of-range id, invalid parameter).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

// Inconsistent configuration (fanout mismatch, amp_rate < 1, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Operation invoked on an object in the wrong state.
class StateError : public Error {
 public:
  using Error::Error;
};

// Key not present in a store.
class LookupError : public Error {
 public:
  using Error::Error;
};

// Malformed input data (edge-list files, dumps, reports).
class DataError : public Error {
 public:
  using Error::Error;
};

using Rng = std::mt19937_64;

// SplitMix64 finalizer; used to derive independent streams from a base seed.
constexpr std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a,
                                    std::uint64_t b = 0) {
  return mix_seed(mix_seed(mix_seed(base) ^ a) ^ (b * 0x2545f4914f6cdd1dULL));
}

// Uniform integer in [0, bound). Rejection sampling keeps the result
// identical across standard library implementations.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  if (bound <= 1) return 0;
  const std::uint64_t limit = Rng::max() - Rng::max() % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

// Uniform real in [0, 1) with 53 random bits.
inline double uniform_unit(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Moves a uniform without-replacement sample of min(k, items.size()) elements
// to the front of `items` (partial Fisher-Yates) and returns its length.
template <typename T>
std::size_t partial_shuffle(std::vector<T>& items, std::size_t k, Rng& rng) {
  const std::size_t take = std::min(k, items.size());
  for (std::size_t i = 0; i < take; ++i) {
    const std::size_t j = i + uniform_below(rng, items.size() - i);
    std::swap(items[i], items[j]);
  }
  return take;
}

// ceil(fraction * n) for fraction in [0,1]. The epsilon absorbs binary
// representation error so that e.g. 0.15 * 20 yields 3, not 4.
inline std::size_t ceil_fraction(double fraction, std::size_t n) {
  const double x = fraction * static_cast<double>(n);
  const double c = std::ceil(x - 1e-9);
  return c <= 0.0 ? 0 : std::min(n, static_cast<std::size_t>(c));
}

// Round-half-up of fraction * n, same epsilon treatment as ceil_fraction.
inline std::size_t round_fraction(double fraction, std::size_t n) {
  const double x = fraction * static_cast<double>(n);
  const double r = std::floor(x + 0.5 + 1e-9);
  return r <= 0.0 ? 0 : std::min(n, static_cast<std::size_t>(r));
}

inline void require_unit_interval(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw ArgumentError(std::string(name) + " must lie in [0,1], got " +
                        std::to_string(v));
  }
}

}  // namespace gss
