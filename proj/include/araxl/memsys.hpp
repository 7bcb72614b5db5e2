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

#include <cstdio>
#include <deque>
#include <optional>
#include <vector>

#include "common.hpp"

namespace araxl
{

enum class MemDir : u8
{
  kLoad,
  kStore,
};

/// Flat byte-addressable memory with a base offset, plus simple binary
/// file persistence (8-byte magic, base, size, then the raw bytes).
class MemoryImage
{
public:
  static constexpr u64 kMaxBytes = 16ull << 20;
  static constexpr char kMagic[8] = {'a', 'r', 'a', 'x', 'l', 'm', 'e', 'm'};

  MemoryImage() = default;

  MemoryImage(u64 base, u64 size) : base_(base)
  {
    if (size > kMaxBytes)
      throw ConfigError("memory image larger than 16 MiB");
    mem_.assign(size, 0);
  }

  u64 base() const { return base_; }
  u64 size() const { return mem_.size(); }
  const std::vector<u8>& bytes() const { return mem_; }

  void check(u64 addr, u64 len) const
  {
    if (addr < base_ or addr + len > base_ + mem_.size() or
        addr + len < addr)
      throw MemFault(addr, "outside image [0x" + MemFault::to_hex(base_) +
                             ", 0x" + MemFault::to_hex(base_ + mem_.size()) +
                             ")");
  }

  const u8* at(u64 addr, u64 len) const
  {
    check(addr, len);
    return mem_.data() + (addr - base_);
  }

  u8* at(u64 addr, u64 len)
  {
    check(addr, len);
    return mem_.data() + (addr - base_);
  }

  u64 read_u64(u64 addr) const
  {
    const u8* p = at(addr, 8);
    u64 v = 0;
    for (int i = 7; i >= 0; --i)
      v = v << 8 | p[i];
    return v;
  }

  void write_u64(u64 addr, u64 v)
  {
    u8* p = at(addr, 8);
    for (int i = 0; i < 8; ++i)
      p[i] = static_cast<u8>(v >> 8 * i);
  }

  f64 read_f64(u64 addr) const { return bits_f64(read_u64(addr)); }
  void write_f64(u64 addr, f64 v) { write_u64(addr, f64_bits(v)); }

  void save(const std::string& path) const
  {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (not f)
      throw Error("cannot write '" + path + "'");
    u64 size = mem_.size();
    bool ok = std::fwrite(kMagic, 1, 8, f) == 8 and
              std::fwrite(&base_, 8, 1, f) == 1 and
              std::fwrite(&size, 8, 1, f) == 1 and
              (size == 0 or std::fwrite(mem_.data(), 1, size, f) == size);
    ok &= std::fclose(f) == 0;
    if (not ok)
      throw Error("short write to '" + path + "'");
  }

  static MemoryImage load(const std::string& path)
  {
    std::FILE* f = std::fopen(path.c_str(), "rb");
    if (not f)
      throw Error("cannot read '" + path + "'");
    char magic[8];
    u64 base = 0, size = 0;
    bool ok = std::fread(magic, 1, 8, f) == 8 and
              std::fread(&base, 8, 1, f) == 1 and
              std::fread(&size, 8, 1, f) == 1;
    ok = ok and std::memcmp(magic, kMagic, 8) == 0 and size <= kMaxBytes;
    MemoryImage img;
    if (ok)
      {
        img.base_ = base;
        img.mem_.resize(size);
        ok = size == 0 or std::fread(img.mem_.data(), 1, size, f) == size;
      }
    std::fclose(f);
    if (not ok)
      throw Error("'" + path + "' is not a valid memory image");
    return img;
  }

private:
  u64 base_ = 0;
  std::vector<u8> mem_;
};

/// One vector memory instruction as seen by the load-store unit.
struct MemRequest
{
  u64 base = 0;
  u64 length = 0; ///< bytes
  MemDir dir = MemDir::kLoad;
  unsigned sew = 64;
  u32 id = 0;
};

/// One bus-width transfer: never spans a bus-aligned window.
struct Beat
{
  u64 addr = 0;
  u32 len = 0;

  bool operator==(const Beat&) const = default;
};

/// Decompose a misalignment into the barrel-shifter's power-of-2 stages,
/// largest first. The stages sum to the offset and are pairwise distinct.
inline std::vector<unsigned> align_plan(unsigned offset, unsigned w_mem)
{
  if (w_mem == 0 or not is_pow2(w_mem) or offset >= w_mem)
    throw ConfigError("align_plan: offset must be below the bus width");
  std::vector<unsigned> shifts;
  for (unsigned bit = w_mem >> 1; bit; bit >>= 1)
    if (offset & bit)
      shifts.push_back(bit);
  return shifts;
}

/// Split a request into bus transfers: address order, exact coverage, each
/// beat confined to one w_mem-aligned window and one 4 KiB page.
inline std::vector<Beat> addrgen_split(u64 base, u64 length, unsigned w_mem)
{
  std::vector<Beat> beats;
  u64 addr = base;
  u64 end = base + length;
  while (addr < end)
    {
      u64 window = (addr / w_mem + 1) * w_mem;
      u64 page = (addr / 4096 + 1) * 4096;
      u64 stop = std::min(end, std::min(window, page));
      beats.push_back({addr, static_cast<u32>(stop - addr)});
      addr = stop;
    }
  return beats;
}

inline std::vector<Beat> addrgen_split(const MemRequest& req, unsigned w_mem)
{
  return addrgen_split(req.base, req.length, w_mem);
}

/// Registered pipeline depth of the load-store unit's data path:
/// log2(w_mem) align levels, one addrgen level, log2(C) shuffle levels.
inline unsigned glsu_pipe_depth(unsigned w_mem, unsigned clusters)
{
  return ilog2(w_mem) + 1 + ilog2(clusters);
}

/// Cycles the load-store unit adds between memory and the cluster VLSUs.
/// Each latency cut registers both the request and the response path, so
/// the request-response round trip grows by two cycles per cut (with four
/// cuts: eight cycles).
inline unsigned glsu_latency(MemDir dir, unsigned cuts, unsigned w_mem,
                             unsigned clusters)
{
  (void)dir; // both directions traverse the same registered stages
  return glsu_pipe_depth(w_mem, clusters) + 2 * cuts;
}

/// One beat waiting for the shared memory port.
struct BeatRequest
{
  u64 ready = 0; ///< earliest grant cycle
  bool is_load = true;
};

/// Completion cycles for a beat sequence through the single memory port:
/// one grant per cycle, loads and stores arbitrated round-robin, each
/// grant completing after the fixed memory latency plus the pipeline.
inline std::vector<u64> memory_service(const std::vector<BeatRequest>& beats,
                                       unsigned l_mem, unsigned pipe)
{
  std::vector<u64> completion(beats.size());
  std::deque<size_t> loads, stores;
  for (size_t i = 0; i < beats.size(); ++i)
    (beats[i].is_load ? loads : stores).push_back(i);

  u64 cycle = 0;
  bool prefer_load = true;
  size_t done = 0;
  while (done < beats.size())
    {
      bool l = not loads.empty() and beats[loads.front()].ready <= cycle;
      bool s = not stores.empty() and beats[stores.front()].ready <= cycle;
      if (l or s)
        {
          bool take_load = l and (not s or prefer_load);
          auto& q = take_load ? loads : stores;
          completion[q.front()] = cycle + l_mem + pipe;
          q.pop_front();
          ++done;
          if (l and s)
            prefer_load = not take_load; // alternate under contention
        }
      u64 next = cycle + 1;
      if (not (l and s)) // may skip idle gaps, but not contended cycles
        {
          u64 soonest = ~0ull;
          if (not loads.empty())
            soonest = std::min(soonest, beats[loads.front()].ready);
          if (not stores.empty())
            soonest = std::min(soonest, beats[stores.front()].ready);
          next = std::max(next, soonest);
        }
      cycle = next;
    }
  return completion;
}

/// Cycle-stepped flavor of the same arbitration, driven by the engine:
/// push requests as they become ready, call grant() once per cycle.
class MemoryPort
{
public:
  struct Grant
  {
    bool is_load = true;
    u64 tag = 0;
  };

  void request(bool is_load, u64 ready, u64 tag)
  {
    (is_load ? loads_ : stores_).push_back({ready, tag});
  }

  std::optional<Grant> grant(u64 cycle)
  {
    bool l = not loads_.empty() and loads_.front().ready <= cycle;
    bool s = not stores_.empty() and stores_.front().ready <= cycle;
    if (not l and not s)
      return std::nullopt;
    bool take_load = l and (not s or prefer_load_);
    auto& q = take_load ? loads_ : stores_;
    Grant g{take_load, q.front().tag};
    q.pop_front();
    if (l and s)
      prefer_load_ = not take_load;
    return g;
  }

  bool idle() const { return loads_.empty() and stores_.empty(); }

private:
  struct Pending
  {
    u64 ready;
    u64 tag;
  };

  std::deque<Pending> loads_, stores_;
  bool prefer_load_ = true;
};

} // namespace araxl
