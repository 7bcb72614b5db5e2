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

#include <map>
#include <optional>
#include <sstream>
#include <vector>

#include "common.hpp"

namespace araxl
{

/// Machine parameters for one simulated instance. A cluster holds
/// `lanes_per_cluster` identical lanes; the instance has
/// `clusters * lanes_per_cluster` lanes total and one shared memory port.
struct MachineConfig
{
  unsigned clusters = 2;          ///< C; power of two.
  unsigned lanes_per_cluster = 4; ///< L; power of two.
  unsigned vlen_bits = 0;         ///< 0 derives 1024 bits/lane, capped at 65536.
  unsigned fpu_latency = 4;       ///< FP pipeline depth, results visible after it.
  unsigned alu_latency = 2;       ///< integer/move pipeline depth.
  unsigned glsu_cuts = 0;         ///< register cuts on the memory interface.
  unsigned reqi_cuts = 0;         ///< register cuts on the request broadcast.
  unsigned ring_cuts = 0;         ///< register cuts per inter-cluster ring link.
  unsigned mem_latency = 20;      ///< fixed memory access latency (cycles).
  unsigned mem_width_bytes = 0;   ///< 0 derives 8 bytes/cycle per lane.
  u64 mem_size = 16ull << 20;     ///< memory image capacity in bytes.
  unsigned scalar_op_latency = 1; ///< scalar ALU/branch stub latency.
  unsigned scalar_mem_latency = 5;///< scalar load/store stub latency.
  unsigned reqi_base_ack = 3;     ///< issue-to-ack cycles with zero cuts.
  bool trace = false;             ///< capture per-instruction timing.

  unsigned total_lanes() const { return clusters * lanes_per_cluster; }

  /// Architectural vector register length in bits.
  unsigned vlen() const
  {
    if (vlen_bits)
      return vlen_bits;
    u64 v = 1024ull * total_lanes();
    return static_cast<unsigned>(v > 65536 ? 65536 : v);
  }

  /// Memory port width in bytes per cycle.
  unsigned w_mem() const
  {
    return mem_width_bytes ? mem_width_bytes : 8u * total_lanes();
  }

  /// Bytes of one vector register held by one lane.
  unsigned lane_reg_bytes() const { return vlen() / 8 / total_lanes(); }

  /// Throw ConfigError unless every structural invariant holds.
  void validate() const
  {
    if (not is_pow2(clusters))
      throw ConfigError("clusters must be a power of two");
    if (not is_pow2(lanes_per_cluster) or lanes_per_cluster > 8)
      throw ConfigError("lanes per cluster must be a power of two <= 8");
    unsigned v = vlen();
    if (not is_pow2(v) or v < 64 or v > 65536)
      throw ConfigError("vlen must be a power of two in [64, 65536]");
    if ((v / 8) % total_lanes() != 0)
      throw ConfigError("vlen/8 must be divisible by total lane count");
    unsigned w = w_mem();
    if (not is_pow2(w) or w > 4096)
      throw ConfigError("memory width must be a power of two <= 4096");
    if (mem_size == 0 or mem_size > (1ull << 32))
      throw ConfigError("memory size out of range");
    if (fpu_latency == 0 or scalar_op_latency == 0)
      throw ConfigError("pipeline latencies must be nonzero");
    if (reqi_base_ack < 2)
      throw ConfigError("reqi.base_ack must be at least 2 (forward + return)");
  }
};

/// One key = value pair from a config file or command line.
using ConfigKv = std::pair<std::string, std::string>;

namespace detail
{

inline u64 parse_u64(const std::string& key, const std::string& value)
{
  try
    {
      size_t pos = 0;
      u64 v = std::stoull(value, &pos, 0);
      if (pos != value.size())
        throw std::invalid_argument("trailing");
      return v;
    }
  catch (const std::exception&)
    {
      throw ConfigError("bad value '" + value + "' for key '" + key + "'");
    }
}

} // namespace detail

/// Parse line-oriented `key = value` text. '#' starts a comment; blank lines
/// are skipped. Unknown keys are rejected later, when applied.
inline std::vector<ConfigKv> parse_config_text(const std::string& text)
{
  std::vector<ConfigKv> kvs;
  std::istringstream in(text);
  std::string line;
  unsigned lineno = 0;
  while (std::getline(in, line))
    {
      ++lineno;
      if (auto pos = line.find('#'); pos != std::string::npos)
        line.erase(pos);
      auto notspace = [](unsigned char c) { return not std::isspace(c); };
      auto trim = [&](std::string s) {
        while (not s.empty() and not notspace(s.front()))
          s.erase(s.begin());
        while (not s.empty() and not notspace(s.back()))
          s.pop_back();
        return s;
      };
      if (trim(line).empty())
        continue;
      auto eq = line.find('=');
      if (eq == std::string::npos)
        throw ConfigError("line " + std::to_string(lineno) +
                          ": expected 'key = value'");
      std::string key = trim(line.substr(0, eq));
      std::string value = trim(line.substr(eq + 1));
      if (key.empty() or value.empty())
        throw ConfigError("line " + std::to_string(lineno) +
                          ": empty key or value");
      kvs.emplace_back(key, value);
    }
  return kvs;
}

/// Apply key/value pairs on top of a base configuration. `lanes` means total
/// lanes: together with `clusters` it fixes the per-cluster lane count;
/// alone it keeps 4 lanes per cluster and derives the cluster count.
inline MachineConfig apply_config(MachineConfig cfg,
                                  const std::vector<ConfigKv>& kvs)
{
  std::optional<u64> lanes_total;
  std::optional<u64> clusters;
  std::optional<u64> lanes_per_cluster;
  for (const auto& [key, value] : kvs)
    {
      u64 v = detail::parse_u64(key, value);
      if (key == "clusters")
        clusters = v;
      else if (key == "lanes")
        lanes_total = v;
      else if (key == "lanes_per_cluster")
        lanes_per_cluster = v;
      else if (key == "vlen")
        cfg.vlen_bits = static_cast<unsigned>(v);
      else if (key == "fpu.latency")
        cfg.fpu_latency = static_cast<unsigned>(v);
      else if (key == "alu.latency")
        cfg.alu_latency = static_cast<unsigned>(v);
      else if (key == "glsu.cuts")
        cfg.glsu_cuts = static_cast<unsigned>(v);
      else if (key == "reqi.cuts")
        cfg.reqi_cuts = static_cast<unsigned>(v);
      else if (key == "ring.cuts")
        cfg.ring_cuts = static_cast<unsigned>(v);
      else if (key == "mem.latency")
        cfg.mem_latency = static_cast<unsigned>(v);
      else if (key == "mem.width_bytes")
        cfg.mem_width_bytes = static_cast<unsigned>(v);
      else if (key == "mem.size")
        cfg.mem_size = v;
      else if (key == "scalar.op_latency")
        cfg.scalar_op_latency = static_cast<unsigned>(v);
      else if (key == "scalar.mem_latency")
        cfg.scalar_mem_latency = static_cast<unsigned>(v);
      else if (key == "reqi.base_ack")
        cfg.reqi_base_ack = static_cast<unsigned>(v);
      else
        throw ConfigError("unknown key '" + key + "'");
    }

  if (lanes_per_cluster)
    cfg.lanes_per_cluster = static_cast<unsigned>(*lanes_per_cluster);
  if (clusters)
    cfg.clusters = static_cast<unsigned>(*clusters);
  if (lanes_total)
    {
      u64 lanes = *lanes_total;
      if (clusters)
        {
          if (lanes % *clusters != 0)
            throw ConfigError("lanes not divisible by clusters");
          cfg.lanes_per_cluster = static_cast<unsigned>(lanes / *clusters);
        }
      else if (lanes_per_cluster)
        {
          if (lanes % *lanes_per_cluster != 0)
            throw ConfigError("lanes not divisible by lanes_per_cluster");
          cfg.clusters = static_cast<unsigned>(lanes / *lanes_per_cluster);
        }
      else
        {
          unsigned per = lanes < 4 ? static_cast<unsigned>(lanes) : 4u;
          cfg.lanes_per_cluster = per;
          cfg.clusters = static_cast<unsigned>(lanes / per);
        }
      if (cfg.total_lanes() != lanes)
        throw ConfigError("inconsistent lanes/clusters combination");
    }

  cfg.validate();
  return cfg;
}

} // namespace araxl
