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

#include <deque>

#include "golden.hpp"
#include "ring.hpp"

namespace araxl
{

/// Functional unit classes inside each cluster. All units are fully
/// pipelined at one 64-bit element group per lane per cycle.
enum class Unit : u8
{
  kFPU,
  kALU,
  kVLSU,
  kSLDU,
  kMASKU,
};

constexpr unsigned kNumUnits = 5;

/// Unit an instruction executes on. Scalar stubs and vsetvli never reach a
/// vector unit.
inline Unit unit_for(Op op)
{
  switch (op)
    {
    case Op::kVle:
    case Op::kVse:
    case Op::kVlse:
    case Op::kVsse:
      return Unit::kVLSU;
    case Op::kVfslide1upVF:
    case Op::kVfslide1downVF:
    case Op::kVslideupVX:
    case Op::kVslidedownVX:
      return Unit::kSLDU;
    case Op::kVfmergeVFM:
      return Unit::kMASKU;
    case Op::kVaddVX:
    case Op::kVsllVI:
    case Op::kVmvVV:
    case Op::kVfmvVF:
    case Op::kVfmvSF:
    case Op::kVfmvFS:
    case Op::kVmseqVX:
    case Op::kVmsneVX:
      return Unit::kALU;
    default:
      return Unit::kFPU;
    }
}

/// Aggregate performance counters for one timed run.
struct CycleStats
{
  u64 total_cycles = 0;
  std::vector<u64> fpu_active; ///< result cycles per FPU, index c*L+l
  u64 flops = 0;               ///< active-element DP-FLOPs
  u64 instructions_issued = 0; ///< vector instructions through the broadcast
  u64 reqi_stall = 0;          ///< issue cycles lost to sequencer backpressure
  u64 glsu_stall = 0;          ///< beat cycles waiting for the memory port
  u64 ring_stall = 0;          ///< group cycles waiting on ring transfers
  u64 first_vector_issue = 0;  ///< utilization window start
  u64 last_writeback = 0;      ///< utilization window end
  bool any_vector = false;
};

/// Mean FPU duty cycle over the measured window (first vector issue to
/// last writeback); 0 for runs with no vector work.
inline f64 utilization(const CycleStats& st, const MachineConfig& cfg)
{
  if (not st.any_vector or st.last_writeback <= st.first_vector_issue)
    return 0.0;
  f64 window = static_cast<f64>(st.last_writeback - st.first_vector_issue);
  f64 sum = 0;
  for (u64 a : st.fpu_active)
    sum += static_cast<f64>(a);
  return sum / (static_cast<f64>(cfg.total_lanes()) * window);
}

/// One row of the optional execution trace (always collected; small).
struct InstrTrace
{
  Op op;
  u64 issue = 0;    ///< cycle the scalar core handed it to the broadcast
  u64 dispatch = 0; ///< cycle the sequencer dispatched it to its unit
  u64 start = 0;    ///< first group's execution start
  u64 wb_first = 0; ///< first group writeback (or first beat completion)
  u64 wb_last = 0;  ///< last group writeback (or last beat completion)
};

struct EngineResult
{
  MemoryImage memory;
  CycleStats stats;
  u64 executed = 0;
};

/// The timed machine. Values are computed by the embedded reference model
/// at issue; this class adds the cycle schedule: scalar stub, broadcast
/// and acknowledge path, per-cluster in-order sequencing, decoupled units
/// with element-group chaining, the global load-store unit with its single
/// shared memory port, ring-based slides, and tree reductions.
///
/// All clusters proceed in lockstep (they receive every instruction on the
/// same cycle and hold identical element counts), so one schedule describes
/// the whole machine; per-lane effects enter through group geometry, ring
/// hops, and the reduction tree.
class Engine
{
public:
  Engine(const MachineConfig& cfg, MemoryImage image)
    : cfg_(cfg), vm_(cfg, std::move(image))
  {
    cfg_.validate();
    if (cfg_.vlen() % (64 * cfg_.total_lanes()) != 0)
      throw ConfigError("vlen must hold a whole 64-bit word per lane");
    gpr_ = cfg_.vlen() / 64 / cfg_.total_lanes();
    for (auto& w : wtime_)
      w.assign(gpr_, 0);
    for (auto& r : rtime_)
      r.assign(gpr_, 0);
    stats_.fpu_active.assign(cfg_.total_lanes(), 0);
    pipe_lat_ = glsu_latency(MemDir::kLoad, cfg_.glsu_cuts, cfg_.w_mem(),
                             cfg_.clusters);
  }

  /// Run a whole program and populate the statistics.
  void run(const Program& prog)
  {
    vm_.apply_data(prog);
    std::vector<i64> loop_left(prog.code.size(), -1);
    u64 pc = 0;
    while (pc < prog.code.size())
      {
        const Instr& in = prog.code[pc];
        if (in.op == Op::kLoop)
          {
            scalar_t_ += cfg_.scalar_op_latency;
            i64& left = loop_left[pc];
            if (left < 0)
              left = in.imm;
            ++executed_;
            if (--left > 0)
              {
                pc = static_cast<u64>(in.loop_target);
                continue;
              }
            left = -1;
            ++pc;
            continue;
          }
        schedule(in);
        try
          {
            vm_.step(in);
          }
        catch (const MemFault& f)
          {
            throw MemFault(f.addr(),
                           "issue cycle " + std::to_string(scalar_t_));
          }
        ++executed_;
        ++pc;
      }
    stats_.flops = vm_.flops();
    stats_.total_cycles = std::max(scalar_t_, stats_.last_writeback);
  }

  EngineResult result() &&
  {
    EngineResult r;
    r.stats = stats_;
    r.executed = executed_;
    r.memory = std::move(vm_).result().memory;
    return r;
  }

  const CycleStats& stats() const { return stats_; }
  const std::vector<InstrTrace>& trace() const { return trace_; }
  const GoldenModel& arch() const { return vm_; }

private:
  struct UnitState
  {
    u64 pipe_free = 0;            ///< next cycle a group may start
    std::deque<u64> queue_starts; ///< starts of the last 4 dispatched ops
  };

  struct PendingMem
  {
    u64 lo = 0, hi = 0; ///< byte range [lo, hi)
    bool is_store = false;
    u64 done = 0; ///< completion of the last beat
  };

  // --- register timing bookkeeping -------------------------------------

  /// Map (architectural register, instruction group) to storage slot.
  std::pair<unsigned, u64> locate(unsigned reg, u64 g) const
  {
    return {(reg + g / gpr_) & 31u, g % gpr_};
  }

  u64 w_of(unsigned reg, u64 g) const
  {
    auto [r, s] = locate(reg, g);
    return wtime_[r][s];
  }

  void set_w(unsigned reg, u64 g, u64 t)
  {
    auto [r, s] = locate(reg, g);
    wtime_[r][s] = std::max(wtime_[r][s], t);
  }

  u64 r_of(unsigned reg, u64 g) const
  {
    auto [r, s] = locate(reg, g);
    return rtime_[r][s];
  }

  void set_r(unsigned reg, u64 g, u64 t)
  {
    auto [r, s] = locate(reg, g);
    rtime_[r][s] = std::max(rtime_[r][s], t);
  }

  /// Whole-register write time (mask producers publish as one barrier).
  u64 w_all(unsigned reg) const
  {
    u64 t = 0;
    for (u64 s = 0; s < gpr_; ++s)
      t = std::max(t, wtime_[reg][s]);
    return t;
  }

  // --- memory disambiguation --------------------------------------------

  u64 overlap_hold(u64 lo, u64 hi, bool is_store)
  {
    // entries older than the scalar clock can no longer delay anything:
    // every future access starts at or after the current issue cycle
    std::erase_if(pending_,
                  [&](const PendingMem& p) { return p.done + 1 <= scalar_t_; });
    u64 hold = 0;
    for (const PendingMem& p : pending_)
      if ((p.is_store or is_store) and p.lo < hi and lo < p.hi)
        hold = std::max(hold, p.done + 1);
    return hold;
  }

  // --- the scheduler -----------------------------------------------------

  void schedule(const Instr& in)
  {
    if (not is_vector_op(in.op))
      {
        schedule_scalar(in);
        return;
      }

    u64 issue = scalar_t_;
    if (not stats_.any_vector)
      {
        stats_.any_vector = true;
        stats_.first_vector_issue = issue;
      }
    ++stats_.instructions_issued;

    // broadcast: one registered hop plus any interface cuts
    u64 arrival = issue + 1 + cfg_.reqi_cuts;
    u64 arrival_eff = arrival;
    if (seq_q_.size() == 8)
      {
        arrival_eff = std::max(arrival_eff, seq_q_.front());
        seq_q_.pop_front();
      }
    stats_.reqi_stall += arrival_eff - arrival;
    // acknowledge from cluster 0 back to the scalar core
    u64 ack = arrival_eff + (cfg_.reqi_base_ack - 1) + cfg_.reqi_cuts;
    scalar_t_ = ack;

    InstrTrace tr;
    tr.op = in.op;
    tr.issue = issue;

    if (in.op == Op::kVsetvli)
      {
        // configuration instruction: consumes the ack path only
        tr.dispatch = arrival_eff;
        tr.start = arrival_eff;
        tr.wb_first = tr.wb_last = ack;
        trace_.push_back(tr);
        return;
      }

    Unit u = unit_for(in.op);
    UnitState& us = units_[static_cast<unsigned>(u)];
    u64 disp = std::max(arrival_eff, prev_dispatch_ + 1);
    if (us.queue_starts.size() == 4)
      {
        disp = std::max(disp, us.queue_starts.front());
        us.queue_starts.pop_front();
      }
    prev_dispatch_ = disp;
    seq_q_.push_back(disp);
    tr.dispatch = disp;

    switch (u)
      {
      case Unit::kVLSU:
        schedule_memory(in, disp, tr);
        break;
      case Unit::kFPU:
        if (is_reduction_op(in.op))
          schedule_reduction(in, disp, tr);
        else
          schedule_arith(in, disp, tr);
        break;
      default:
        schedule_arith(in, disp, tr);
        break;
      }
    us.queue_starts.push_back(tr.start);
    trace_.push_back(tr);
  }

  void schedule_scalar(const Instr& in)
  {
    u64 lat = cfg_.scalar_op_latency;
    if (in.op == Op::kFld or in.op == Op::kFsd)
      {
        lat = cfg_.scalar_mem_latency;
        u64 addr = vm_.xreg(in.rs1) + static_cast<u64>(in.imm);
        u64 hold = overlap_hold(addr, addr + 8, in.op == Op::kFsd);
        scalar_t_ = std::max(scalar_t_, hold);
        if (in.op == Op::kFsd)
          pending_.push_back({addr, addr + 8, true, scalar_t_ + lat});
      }
    scalar_t_ += lat;
  }

  // element geometry under the current vtype
  struct Geom
  {
    u64 vl, esz, bpg, groups;
  };

  Geom geom() const
  {
    Geom g;
    g.vl = vm_.vl();
    g.esz = vm_.sew() / 8;
    g.bpg = 8ull * cfg_.total_lanes();
    g.groups = g.vl == 0 ? 0 : ceil_div(g.vl * g.esz, g.bpg);
    return g;
  }

  /// Latency from a group's execution start to its register writeback.
  u64 unit_latency(Unit u) const
  {
    switch (u)
      {
      case Unit::kFPU:
        return cfg_.fpu_latency;
      case Unit::kALU:
        return cfg_.alu_latency;
      case Unit::kSLDU:
      case Unit::kMASKU:
        return 2;
      default:
        return 1;
      }
  }

  /// Count of elements FPU (c,l) owns under vl: slots s with
  /// s*(L*C) + c*L + l < vl.
  u64 owned_elements(u64 vl, unsigned c, unsigned l) const
  {
    u64 idx = static_cast<u64>(c) * cfg_.lanes_per_cluster + l;
    u64 lc = cfg_.total_lanes();
    return idx < vl ? (vl - 1 - idx) / lc + 1 : 0;
  }

  void credit_fpu(u64 vl)
  {
    for (unsigned c = 0; c < cfg_.clusters; ++c)
      for (unsigned l = 0; l < cfg_.lanes_per_cluster; ++l)
        stats_.fpu_active[c * cfg_.lanes_per_cluster + l] +=
          owned_elements(vl, c, l);
  }

  /// Vector source registers read with group-level chaining, and the extra
  /// neighbor-group + ring delay for slides.
  void gather_sources(const Instr& in, std::vector<unsigned>& srcs,
                      bool& reads_vd) const
  {
    reads_vd = false;
    switch (in.op)
      {
      case Op::kVfaddVV:
      case Op::kVfsubVV:
      case Op::kVfmulVV:
      case Op::kVfdivVV:
        srcs = {in.vs1, in.vs2};
        break;
      case Op::kVfmaccVV:
      case Op::kVfmaddVV:
        srcs = {in.vs1, in.vs2};
        reads_vd = true;
        break;
      case Op::kVfaddVF:
      case Op::kVfsubVF:
      case Op::kVfmulVF:
      case Op::kVfdivVF:
      case Op::kVmfltVF:
      case Op::kVmfleVF:
      case Op::kVmfgtVF:
      case Op::kVmfgeVF:
      case Op::kVfcvtXF:
      case Op::kVfcvtFX:
      case Op::kVaddVX:
      case Op::kVsllVI:
      case Op::kVmseqVX:
      case Op::kVmsneVX:
      case Op::kVfmergeVFM:
      case Op::kVfmvFS:
        srcs = {in.vs2};
        break;
      case Op::kVfmaccVF:
      case Op::kVfnmsacVF:
        srcs = {in.vs2};
        reads_vd = true;
        break;
      case Op::kVmvVV:
        srcs = {in.vs1};
        break;
      default:
        srcs.clear();
        break;
      }
  }

  /// Slides consume a neighbor group through the lane interconnect or the
  /// ring; every group of a machine-wide row crosses a cluster boundary,
  /// so the transfer pays one ring hop when C > 1.
  u64 slide_hop_latency(const Instr& in) const
  {
    if (cfg_.clusters == 1)
      return 1;
    u64 hops = 1;
    if (in.op == Op::kVslideupVX or in.op == Op::kVslidedownVX)
      {
        u64 off = vm_.xreg(in.rs1);
        unsigned shift =
          static_cast<unsigned>(off / cfg_.lanes_per_cluster % cfg_.clusters);
        if (shift != 0 or off % cfg_.lanes_per_cluster != 0)
          hops = std::max<u64>(1, ring_route(0, shift, cfg_.clusters).first);
      }
    return hops * (1 + cfg_.ring_cuts);
  }

  void schedule_arith(const Instr& in, u64 disp, InstrTrace& tr)
  {
    Geom g = geom();
    Unit u = unit_for(in.op);
    UnitState& us = units_[static_cast<unsigned>(u)];
    u64 lat = unit_latency(u);
    bool is_slide = is_slide_op(in.op);
    bool is_mask_dst = is_compare_op(in.op);
    // element-0-only ops touch a single group
    u64 groups = in.op == Op::kVfmvFS or in.op == Op::kVfmvSF
                   ? std::min<u64>(g.groups, 1)
                   : g.groups;

    std::vector<unsigned> srcs;
    bool reads_vd = false;
    gather_sources(in, srcs, reads_vd);

    u64 mask_ready = 0;
    if (in.masked or in.op == Op::kVfmergeVFM)
      mask_ready = w_all(0);

    u64 slide_hop = is_slide ? slide_hop_latency(in) : 0;
    i64 slide_dg = 0; // neighbor group offset for register-offset slides
    if (in.op == Op::kVslideupVX or in.op == Op::kVslidedownVX)
      slide_dg = static_cast<i64>(
        ceil_div(vm_.xreg(in.rs1) * g.esz, g.bpg));

    u64 s0_floor = std::max(disp + 1, us.pipe_free);
    u64 s = 0, wb0 = 0, wbl = 0;
    for (u64 gi = 0; gi < groups; ++gi)
      {
        u64 ready = mask_ready;
        for (unsigned r : srcs)
          ready = std::max(ready, w_of(r, gi));
        if (reads_vd)
          ready = std::max(ready, w_of(in.vd, gi));
        if (is_slide)
          {
            // neighbor group through the interconnect
            u64 last = groups - 1;
            u64 dg = static_cast<u64>(slide_dg);
            u64 from = in.op == Op::kVfslide1upVF ? (gi == 0 ? 0 : gi - 1)
                       : in.op == Op::kVfslide1downVF
                         ? std::min(gi + 1, last)
                       : in.op == Op::kVslideupVX
                         ? (gi >= dg ? gi - dg : 0)
                         : std::min(gi + dg, last);
            u64 base_ready = w_of(in.vs2, gi);
            u64 ring_ready = w_of(in.vs2, from) + slide_hop;
            if (ring_ready > std::max(base_ready, s0_floor))
              stats_.ring_stall += ring_ready - std::max(base_ready,
                                                         s0_floor);
            ready = std::max({ready, base_ready, ring_ready});
          }
        u64 start = std::max({gi == 0 ? s0_floor : s + 1, ready + 1,
                              r_of(in.vd, gi) + 1});
        u64 wb = start + lat;
        for (unsigned r : srcs)
          set_r(r, gi, start);
        if (reads_vd)
          set_r(in.vd, gi, start);
        if (not is_mask_dst)
          set_w(in.vd, gi, wb);
        if (gi == 0)
          {
            tr.start = start;
            wb0 = wb;
          }
        s = start;
        wbl = wb;
      }
    if (groups == 0)
      {
        tr.start = s0_floor;
        wb0 = wbl = s0_floor;
        s = s0_floor;
      }
    if (is_mask_dst)
      {
        // mask producers publish the whole register at once
        for (u64 gi = 0; gi < gpr_; ++gi)
          wtime_[in.vd][gi] = std::max(wtime_[in.vd][gi], wbl);
      }
    us.pipe_free = s + 1;
    tr.wb_first = wb0;
    tr.wb_last = wbl;
    stats_.last_writeback = std::max(stats_.last_writeback, wbl);
    if (u == Unit::kFPU)
      credit_fpu(g.vl);
    if (in.op == Op::kVfmvFS)
      {
        // the scalar result returns over the acknowledge path
        scalar_t_ =
          std::max(scalar_t_, wbl + 2 + cfg_.reqi_cuts);
      }
  }

  void schedule_reduction(const Instr& in, u64 disp, InstrTrace& tr)
  {
    Geom g = geom();
    UnitState& us = units_[static_cast<unsigned>(Unit::kFPU)];
    // non-chaining: the fold starts once the source is fully written
    u64 ready = w_of(in.vs1, 0);
    for (u64 gi = 0; gi < g.groups; ++gi)
      {
        ready = std::max(ready, w_of(in.vs2, gi));
        set_r(in.vs2, gi, ready + 1);
      }
    u64 start = std::max({disp + 1, us.pipe_free, ready + 1});
    u64 epl = ceil_div(g.vl, cfg_.total_lanes());
    u64 total = reduction_latency(cfg_.clusters, cfg_.lanes_per_cluster, epl,
                                  cfg_.ring_cuts, cfg_.fpu_latency);
    u64 wb = start + total;
    if (g.vl > 0)
      set_w(in.vd, 0, wb);
    // the lane FPUs are released after the intra-cluster phase; the ring
    // and cluster-0 FPU finish the fold
    u64 intra = epl + cfg_.fpu_latency + kRedFoldTailBase +
                ilog2(cfg_.lanes_per_cluster) *
                  (cfg_.fpu_latency + kInterLaneHop);
    us.pipe_free = start + intra;
    if (cfg_.clusters > 1)
      stats_.ring_stall += (cfg_.clusters - 1) * (1 + cfg_.ring_cuts);
    credit_fpu(g.vl);
    tr.start = start;
    tr.wb_first = tr.wb_last = wb;
    stats_.last_writeback = std::max(stats_.last_writeback, wb);
  }

  void schedule_memory(const Instr& in, u64 disp, InstrTrace& tr)
  {
    Geom g = geom();
    UnitState& us = units_[static_cast<unsigned>(Unit::kVLSU)];
    bool is_store = in.op == Op::kVse or in.op == Op::kVsse;
    bool strided = in.op == Op::kVlse or in.op == Op::kVsse;
    u64 base = vm_.xreg(in.rs1);

    if (g.groups == 0)
      {
        tr.start = tr.wb_first = tr.wb_last = disp + 1;
        us.pipe_free = std::max(us.pipe_free, disp + 1);
        return;
      }

    // address range for disambiguation
    u64 lo = base, hi;
    if (strided)
      {
        i64 stride = static_cast<i64>(vm_.xreg(in.rs2));
        i64 last = static_cast<i64>(base) + stride * (static_cast<i64>(g.vl) - 1);
        lo = std::min<u64>(base, static_cast<u64>(last));
        hi = std::max<u64>(base + g.esz, static_cast<u64>(last) + g.esz);
      }
    else
      hi = base + g.vl * g.esz;

    u64 s0 = std::max({disp + 1, us.pipe_free, overlap_hold(lo, hi, is_store)});
    tr.start = s0;

    // beats in address-stream order, mapped onto element groups
    std::vector<std::pair<u64, u64>> beat_groups; // [group_lo, group_hi]
    if (strided)
      {
        beat_groups.reserve(g.vl);
        for (u64 e = 0; e < g.vl; ++e)
          {
            u64 gi = e * g.esz / g.bpg;
            beat_groups.emplace_back(gi, gi);
          }
      }
    else
      {
        std::vector<Beat> beats = addrgen_split(base, g.vl * g.esz,
                                                cfg_.w_mem());
        beat_groups.reserve(beats.size());
        u64 off = 0;
        for (const Beat& b : beats)
          {
            beat_groups.emplace_back(off / g.bpg, (off + b.len - 1) / g.bpg);
            off += b.len;
          }
      }

    u64 req_prev = 0, done_first = 0, done_last = 0;
    for (u64 b = 0; b < beat_groups.size(); ++b)
      {
        auto [glo, ghi] = beat_groups[b];
        u64 req = std::max(s0 + b, req_prev + 1);
        if (is_store)
          {
            // the data for all covered groups must have been written
            for (u64 gi = glo; gi <= ghi; ++gi)
              {
                req = std::max(req, w_of(in.vd, gi) + 1);
                set_r(in.vd, gi, req);
              }
          }
        u64 grant = std::max(req, port_free_);
        port_free_ = grant + 1;
        stats_.glsu_stall += grant - req;
        u64 done = grant + cfg_.mem_latency + pipe_lat_;
        if (not is_store)
          for (u64 gi = glo; gi <= ghi; ++gi)
            set_w(in.vd, gi, std::max(done, r_of(in.vd, gi) + 1));
        if (b == 0)
          done_first = done;
        done_last = done;
        req_prev = req;
      }

    us.pipe_free = req_prev + 1;
    tr.wb_first = done_first;
    tr.wb_last = done_last;
    stats_.last_writeback = std::max(stats_.last_writeback, done_last);
    pending_.push_back({lo, hi, is_store, done_last});
  }

  MachineConfig cfg_;
  GoldenModel vm_;
  CycleStats stats_;
  std::vector<InstrTrace> trace_;

  u64 scalar_t_ = 0;
  u64 prev_dispatch_ = 0;
  u64 port_free_ = 0;
  u64 pipe_lat_ = 0;
  u64 gpr_ = 1; ///< 64-bit groups stored per architectural register
  u64 executed_ = 0;

  std::array<UnitState, kNumUnits> units_{};
  std::deque<u64> seq_q_; ///< dispatch times of queued instructions (≤ 8)
  std::array<std::vector<u64>, 32> wtime_;
  std::array<std::vector<u64>, 32> rtime_;
  std::vector<PendingMem> pending_;
};

/// Run the timed machine start to finish.
inline EngineResult engine_execute(const Program& prog,
                                   const MachineConfig& cfg,
                                   MemoryImage image)
{
  Engine eng(cfg, std::move(image));
  eng.run(prog);
  return std::move(eng).result();
}

} // namespace araxl
