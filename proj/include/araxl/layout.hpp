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

#include <set>
#include <string>
#include <vector>

#include "common.hpp"

namespace araxl
{

/// Where one vector element lives in the distributed register file.
/// Elements round-robin across lanes first, then across clusters, then
/// wrap into the next per-lane slot.
struct ElementHome
{
  unsigned cluster = 0;
  unsigned lane = 0;
  u64 slot = 0;

  bool operator==(const ElementHome&) const = default;
};

/// element i → (⌊i/L⌋ mod C, i mod L, ⌊i/(L·C)⌋), independent of SEW.
inline ElementHome element_home(u64 i, unsigned L, unsigned C)
{
  return {static_cast<unsigned>((i / L) % C), static_cast<unsigned>(i % L),
          i / (static_cast<u64>(L) * C)};
}

/// Inverse of element_home: i = slot·C·L + cluster·L + lane.
inline u64 element_index(const ElementHome& h, unsigned L, unsigned C)
{
  return h.slot * C * L + static_cast<u64>(h.cluster) * L + h.lane;
}

/// Mask layout: element i's mask bit stays in element i's (cluster, lane),
/// packed into 64-bit lane words by slot.
struct MaskBitHome
{
  unsigned cluster = 0;
  unsigned lane = 0;
  u64 word = 0;    ///< 64-bit word index within the lane's register slice
  unsigned bit = 0;///< bit position within that word

  bool operator==(const MaskBitHome&) const = default;
};

inline MaskBitHome mask_bit_home(u64 i, unsigned L, unsigned C)
{
  ElementHome h = element_home(i, L, C);
  return {h.cluster, h.lane, h.slot / 64, static_cast<unsigned>(h.slot % 64)};
}

/// How the bytes of a register are currently encoded across lanes.
struct LayoutTag
{
  enum class Kind : u8
  {
    kStandard, ///< sew-wide elements packed little-endian by slot
    kMask,     ///< one bit per element, 64-bit lane words
  };

  Kind kind = Kind::kStandard;
  u8 sew = 64; ///< element width in bits; meaningful for kStandard only

  static LayoutTag standard(u8 sew) { return {Kind::kStandard, sew}; }
  static LayoutTag mask() { return {Kind::kMask, 0}; }

  bool operator==(const LayoutTag&) const = default;
};

namespace laydetail
{

/// Physical location of one *bit* of the register's logical value:
/// (cluster, lane, bit offset within the lane's register slice).
struct BitHome
{
  unsigned cluster;
  unsigned lane;
  u64 lane_bit;
};

inline BitHome bit_home(u64 logical_bit, LayoutTag tag, unsigned L, unsigned C)
{
  if (tag.kind == LayoutTag::Kind::kMask)
    {
      MaskBitHome m = mask_bit_home(logical_bit, L, C);
      return {m.cluster, m.lane, m.word * 64 + m.bit};
    }
  unsigned esz = tag.sew / 8;
  u64 byte = logical_bit / 8;
  u64 elem = byte / esz;
  ElementHome h = element_home(elem, L, C);
  return {h.cluster, h.lane,
          (h.slot * esz + byte % esz) * 8 + logical_bit % 8};
}

} // namespace laydetail

/// Encode a register's logical value (flat little-endian byte string; for
/// the mask layout, a packed bit string) into the physical buffer laid out
/// cluster-major, lane-major, lane bytes last.
inline std::vector<u8> layout_encode(const std::vector<u8>& logical,
                                     LayoutTag tag, unsigned L, unsigned C,
                                     unsigned vlen_bits)
{
  unsigned lane_bytes = vlen_bits / 8 / (L * C);
  std::vector<u8> phys(static_cast<size_t>(vlen_bits / 8), 0);
  u64 bits = std::min<u64>(vlen_bits, logical.size() * 8ull);
  for (u64 b = 0; b < bits; ++b)
    {
      if (not (logical[b / 8] >> (b % 8) & 1))
        continue;
      laydetail::BitHome h = laydetail::bit_home(b, tag, L, C);
      u64 off = (static_cast<u64>(h.cluster) * L + h.lane) * lane_bytes * 8 +
                h.lane_bit;
      phys[off / 8] |= static_cast<u8>(1u << off % 8);
    }
  return phys;
}

/// Inverse of layout_encode.
inline std::vector<u8> layout_decode(const std::vector<u8>& phys,
                                     LayoutTag tag, unsigned L, unsigned C,
                                     unsigned vlen_bits)
{
  unsigned lane_bytes = vlen_bits / 8 / (L * C);
  std::vector<u8> logical(static_cast<size_t>(vlen_bits / 8), 0);
  for (u64 b = 0; b < vlen_bits; ++b)
    {
      laydetail::BitHome h = laydetail::bit_home(b, tag, L, C);
      u64 off = (static_cast<u64>(h.cluster) * L + h.lane) * lane_bytes * 8 +
                h.lane_bit;
      if (phys[off / 8] >> (off % 8) & 1)
        logical[b / 8] |= static_cast<u8>(1u << b % 8);
    }
  return logical;
}

struct ReshuffleResult
{
  std::vector<u8> bytes; ///< physical buffer under the `to` layout
  u64 transfers = 0;     ///< 64-bit packets that crossed a cluster boundary
};

/// Re-encode a register from one layout to another and report the ring
/// traffic it would cost. A packet is one (source 64-bit word, destination
/// 64-bit word) pair with at least one live bit; only pairs whose clusters
/// differ travel on the ring. `vl` bounds the live region in units of the
/// destination layout (elements for standard, mask bits for mask).
inline ReshuffleResult reshuffle(const std::vector<u8>& phys, LayoutTag from,
                                 LayoutTag to, u64 vl, unsigned L, unsigned C,
                                 unsigned vlen_bits)
{
  if (from == to)
    return {phys, 0};

  bool from_ok = from.kind == LayoutTag::Kind::kMask or from.sew >= 8;
  bool to_ok = to.kind == LayoutTag::Kind::kMask or to.sew >= 8;
  if (not from_ok or not to_ok)
    throw ConfigError("reshuffle: unsupported layout pair");

  std::vector<u8> logical = layout_decode(phys, from, L, C, vlen_bits);
  ReshuffleResult out;
  out.bytes = layout_encode(logical, to, L, C, vlen_bits);

  u64 live_bits = to.kind == LayoutTag::Kind::kMask
                    ? vl
                    : vl * static_cast<u64>(to.sew);
  if (live_bits > vlen_bits)
    live_bits = vlen_bits;
  std::set<std::pair<u64, u64>> pairs;
  for (u64 b = 0; b < live_bits; ++b)
    {
      laydetail::BitHome s = laydetail::bit_home(b, from, L, C);
      laydetail::BitHome d = laydetail::bit_home(b, to, L, C);
      if (s.cluster == d.cluster)
        continue;
      u64 skey = (static_cast<u64>(s.cluster) * L + s.lane) << 32 |
                 s.lane_bit / 64;
      u64 dkey = (static_cast<u64>(d.cluster) * L + d.lane) << 32 |
                 d.lane_bit / 64;
      pairs.emplace(skey, dkey);
    }
  out.transfers = pairs.size();
  return out;
}

/// Destination of every byte of one full memory beat: which cluster it
/// belongs to and where it sits on that cluster's bus slice. The bus slice
/// is lane-major; within a lane, bytes keep their slot-relative order. The
/// beat is assumed aligned to a whole element-slot boundary.
struct BeatByteTarget
{
  unsigned cluster = 0;
  unsigned bus_byte = 0;

  bool operator==(const BeatByteTarget&) const = default;
};

inline std::vector<BeatByteTarget> glsu_shuffle_pattern(unsigned sew,
                                                        unsigned L, unsigned C,
                                                        unsigned beat_bytes)
{
  unsigned esz = sew / 8;
  unsigned lane_share = beat_bytes / C / L; // bytes per lane per beat
  std::vector<BeatByteTarget> map(beat_bytes);
  for (unsigned k = 0; k < beat_bytes; ++k)
    {
      u64 elem = k / esz;
      ElementHome h = element_home(elem, L, C);
      unsigned lane_off =
        static_cast<unsigned>(h.slot) * esz + k % esz; // slot within beat
      map[k] = {h.cluster, h.lane * lane_share + lane_off};
    }
  return map;
}

/// Human-readable element→home table (debug aid for the CLI).
inline std::string layout_table_text(u64 elements, unsigned L, unsigned C)
{
  std::string out = "elem cluster lane slot\n";
  for (u64 i = 0; i < elements; ++i)
    {
      ElementHome h = element_home(i, L, C);
      out += std::to_string(i) + " " + std::to_string(h.cluster) + " " +
             std::to_string(h.lane) + " " + std::to_string(h.slot) + "\n";
    }
  return out;
}

} // namespace araxl
