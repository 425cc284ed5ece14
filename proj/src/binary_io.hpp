// Copyright 2026 The gss Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

// Little-endian helpers shared by the cache and snapshot dumps.

#pragma once

#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>
#include <type_traits>

#include "gss/common.hpp"

namespace gss::detail {

inline constexpr char kDumpMagic[5] = {'G', 'S', 'S', 'C', '1'};
inline constexpr std::uint8_t kDumpKindCache = 0;
inline constexpr std::uint8_t kDumpKindSnapshot = 1;

template <typename T>
void put(std::ostream& out, T value) {
  static_assert(std::is_unsigned_v<T>);
  char bytes[sizeof(T)];
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    bytes[i] = static_cast<char>((value >> (8 * i)) & 0xff);
  }
  out.write(bytes, sizeof(T));
}

inline void put_f64(std::ostream& out, double value) {
  std::uint64_t bits;
  static_assert(sizeof(bits) == sizeof(value));
  std::memcpy(&bits, &value, sizeof(bits));
  put(out, bits);
}

template <typename T>
T get(std::istream& in) {
  static_assert(std::is_unsigned_v<T>);
  unsigned char bytes[sizeof(T)];
  if (!in.read(reinterpret_cast<char*>(bytes), sizeof(T))) {
    throw DataError("truncated GSSC1 dump");
  }
  T value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    value |= static_cast<T>(bytes[i]) << (8 * i);
  }
  return value;
}

inline double get_f64(std::istream& in) {
  const auto bits = get<std::uint64_t>(in);
  double value;
  std::memcpy(&value, &bits, sizeof(value));
  return value;
}

inline void put_header(std::ostream& out, std::uint8_t kind,
                       std::uint32_t layers) {
  out.write(kDumpMagic, sizeof(kDumpMagic));
  put(out, kind);
  put(out, layers);
}

// Returns the layer count after checking magic and kind.
inline std::uint32_t get_header(std::istream& in, std::uint8_t kind) {
  char magic[sizeof(kDumpMagic)];
  if (!in.read(magic, sizeof(magic)) ||
      !std::equal(magic, magic + sizeof(magic), kDumpMagic)) {
    throw DataError("not a GSSC1 dump");
  }
  const auto got = get<std::uint8_t>(in);
  if (got != kind) {
    throw DataError("GSSC1 dump kind " + std::to_string(got) + ", expected " +
                    std::to_string(kind));
  }
  return get<std::uint32_t>(in);
}

}  // namespace gss::detail
