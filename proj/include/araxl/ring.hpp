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

#include <vector>

#include "layout.hpp"

namespace araxl
{

/// One 64-bit payload travelling between clusters. Delivery takes
/// hops × (1 + ring_cuts) cycles when the links are free.
struct RingPacket
{
  unsigned src = 0;
  unsigned dst = 0;
  bool toward_next = true; ///< direction of travel (increasing cluster index)
  unsigned hops = 0;       ///< ring distance in that direction
  u64 inject = 0;          ///< cycle the source presents the packet
};

/// Shorter-direction routing; ties go toward the next cluster.
inline std::pair<unsigned, bool> ring_route(unsigned src, unsigned dst,
                                            unsigned clusters)
{
  unsigned fwd = (dst + clusters - src) % clusters;
  unsigned bwd = (src + clusters - dst) % clusters;
  return fwd <= bwd ? std::pair{fwd, true} : std::pair{bwd, false};
}

/// Uncontended packet latency.
inline u64 ring_latency(unsigned hops, unsigned ring_cuts)
{
  return static_cast<u64>(hops) * (1 + ring_cuts);
}

/// Per-link, per-direction FIFO ring. Multi-hop packets are pipelined:
/// they hold each link for one cycle in sequence, paying the full hop
/// latency between links but blocking none of them afterwards.
class RingModel
{
public:
  RingModel(unsigned clusters, unsigned ring_cuts)
    : clusters_(clusters), cuts_(ring_cuts), free_next_(clusters, 0),
      free_prev_(clusters, 0)
  {}

  /// Send one packet; returns its delivery cycle and advances link state.
  /// Packets must be offered in a deterministic program order.
  u64 send(RingPacket& p)
  {
    auto [hops, fwd] = ring_route(p.src, p.dst, clusters_);
    p.hops = hops;
    p.toward_next = fwd;
    return send_routed(p);
  }

  /// Same, with the route already chosen by the caller.
  u64 send_routed(const RingPacket& p)
  {
    std::vector<u64>& links = p.toward_next ? free_next_ : free_prev_;
    u64 t = p.inject;
    unsigned at = p.src;
    for (unsigned k = 0; k < p.hops; ++k)
      {
        // Link `at` carries the packet toward the neighbouring cluster.
        if (links[at] > t)
          t = links[at];
        links[at] = t + 1;
        t += 1 + cuts_;
        at = p.toward_next ? (at + 1) % clusters_ : (at + clusters_ - 1) %
                                                      clusters_;
      }
    return t;
  }

  unsigned clusters() const { return clusters_; }
  unsigned cuts() const { return cuts_; }

private:
  unsigned clusters_;
  unsigned cuts_;
  std::vector<u64> free_next_; ///< cycle each forward link is free again
  std::vector<u64> free_prev_;
};

/// Deliver a packet batch in order over a fresh ring; returns per-packet
/// delivery cycles (routes are chosen per packet, shorter side first).
inline std::vector<u64> ring_deliver(std::vector<RingPacket> packets,
                                     unsigned clusters, unsigned ring_cuts)
{
  RingModel ring(clusters, ring_cuts);
  std::vector<u64> out;
  out.reserve(packets.size());
  for (RingPacket& p : packets)
    out.push_back(ring.send(p));
  return out;
}

/// One element crossing clusters because of a slide.
struct SlideTransfer
{
  u64 src_elem = 0;
  unsigned src_cluster = 0;
  unsigned dst_cluster = 0;
  unsigned hops = 0;
  bool toward_next = true;

  bool operator==(const SlideTransfer&) const = default;
};

/// Cross-cluster element movements for dst[i] = src[i + amount]
/// (positive amount slides down, negative slides up). Elements whose
/// source and destination homes share a cluster never touch the ring.
inline std::vector<SlideTransfer> slide_traffic(i64 amount, u64 vl,
                                                unsigned L, unsigned C)
{
  std::vector<SlideTransfer> out;
  if (amount == 0 or vl == 0)
    return out;
  u64 first = amount < 0 ? static_cast<u64>(-amount) : 0;
  u64 last = amount > 0 ? (static_cast<u64>(amount) > vl
                             ? 0
                             : vl - static_cast<u64>(amount))
                        : vl;
  for (u64 i = first; i < last; ++i)
    {
      u64 j = i + amount; // source element landing at position i
      unsigned sc = element_home(j, L, C).cluster;
      unsigned dc = element_home(i, L, C).cluster;
      if (sc == dc)
        continue;
      auto [hops, fwd] = ring_route(sc, dc, C);
      out.push_back({j, sc, dc, hops, fwd});
    }
  return out;
}

/// One combining transfer of the inter-cluster reduction tree.
struct ReductionHop
{
  unsigned src = 0;
  unsigned dst = 0;
  unsigned hops = 0;

  bool operator==(const ReductionHop&) const = default;
};

struct ReductionRound
{
  unsigned round = 0;
  std::vector<ReductionHop> transfers;
};

/// Log-tree combining schedule: round r moves partials over distance 2^r
/// from every cluster ≡ 2^r (mod 2^(r+1)) to its lower neighbour, ending
/// with the full combination in cluster 0.
inline std::vector<ReductionRound> reduction_schedule(unsigned C)
{
  if (not is_pow2(C))
    throw ConfigError("reduction schedule needs a power-of-2 cluster count");
  std::vector<ReductionRound> rounds;
  for (unsigned r = 0; 1u << r < C; ++r)
    {
      ReductionRound round;
      round.round = r;
      unsigned d = 1u << r;
      for (unsigned src = d; src < C; src += 2 * d)
        round.transfers.push_back({src, src - d, d});
      rounds.push_back(std::move(round));
    }
  return rounds;
}

// Fixed micro-costs of the reduction datapath, shared by the closed-form
// estimate below and the cycle engine (so the two agree by construction).
inline constexpr unsigned kInterLaneHop = 2;  ///< lane-to-lane result move
inline constexpr unsigned kRedInject = 4;     ///< cluster partial → ring port
inline constexpr unsigned kRedFoldTailBase = 4; ///< drain + SIMD fold stage
inline constexpr unsigned kRedWriteback = 2;  ///< scalar result into vd[0]

/// Total cycles one vector reduction spends after its operands are ready:
/// sequential intra-lane accumulation (one element per cycle), a binary
/// inter-lane tree, the inter-cluster log-tree (each round pays injection,
/// flight and one FP op), and the final fold/writeback tail. The intra-lane
/// term is the only one growing with the per-lane element count.
inline u64 reduction_latency(unsigned C, unsigned L, u64 elements_per_lane,
                             unsigned ring_cuts, unsigned fpu_latency)
{
  u64 t = elements_per_lane + fpu_latency + kRedFoldTailBase;
  t += static_cast<u64>(ilog2(L)) * (fpu_latency + kInterLaneHop);
  if (C > 1)
    t += static_cast<u64>(ilog2(C)) * (kRedInject + fpu_latency) +
         static_cast<u64>(C - 1) * (1 + ring_cuts);
  return t + kRedWriteback;
}

} // namespace araxl
