// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The araxl-sim authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <string>

namespace araxl
{

using u8 = std::uint8_t;
using u16 = std::uint16_t;
using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i32 = std::int32_t;
using i64 = std::int64_t;
using f64 = double;

/// Base class for all diagnosable simulator errors.
class Error : public std::runtime_error
{
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid machine configuration (bad key, illegal value, broken invariant).
class ConfigError : public Error
{
public:
  explicit ConfigError(const std::string& what) : Error("config: " + what) {}
};

/// Malformed program text. Carries the 1-based source line number.
class ParseError : public Error
{
public:
  ParseError(unsigned line, const std::string& what)
    : Error("parse: line " + std::to_string(line) + ": " + what), line_(line)
  {}

  unsigned line() const { return line_; }

private:
  unsigned line_ = 0;
};

/// Access outside the memory image. Carries the faulting address.
class MemFault : public Error
{
public:
  MemFault(u64 addr, const std::string& what)
    : Error("mem fault @0x" + to_hex(addr) + ": " + what), addr_(addr)
  {}

  u64 addr() const { return addr_; }

  static std::string to_hex(u64 v)
  {
    static const char* digits = "0123456789abcdef";
    std::string s;
    do
      {
        s.insert(s.begin(), digits[v & 0xf]);
        v >>= 4;
      }
    while (v);
    return s;
  }

private:
  u64 addr_ = 0;
};

inline bool is_pow2(u64 v) { return v != 0 and std::has_single_bit(v); }

inline unsigned ilog2(u64 v) { return 63u - static_cast<unsigned>(std::countl_zero(v)); }

inline u64 ceil_div(u64 a, u64 b) { return (a + b - 1) / b; }

inline u64 f64_bits(f64 v) { return std::bit_cast<u64>(v); }

inline f64 bits_f64(u64 v) { return std::bit_cast<f64>(v); }

/// Deterministic pseudo-random source for benchmark input data. We avoid
/// std::uniform_real_distribution because its output is not pinned across
/// standard-library implementations; the mapping below is.
class Rng
{
public:
  explicit Rng(u64 seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}

  /// Next raw 64-bit value (splitmix64).
  u64 next()
  {
    u64 z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1) with 53 significant bits.
  f64 unit() { return static_cast<f64>(next() >> 11) * 0x1.0p-53; }

  /// Uniform double in [-1, 1).
  f64 signed_unit() { return 2.0 * unit() - 1.0; }

private:
  u64 state_;
};

/// Seed used by all benchmark data generators (recorded in CSV headers).
constexpr u64 kDataSeed = 0x00a7ab1e5eed0001ull;

} // namespace araxl
