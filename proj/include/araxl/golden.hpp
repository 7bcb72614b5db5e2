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

#include <array>
#include <cstring>
#include <functional>
#include <optional>

#include "asm.hpp"
#include "config.hpp"
#include "layout.hpp"
#include "memsys.hpp"

namespace araxl
{

/// Reductions always combine in one machine-defined order: each lane folds
/// its slots in ascending order, lanes combine as a binary tree by lane
/// index (lower operand first), clusters combine as a binary tree by
/// cluster index, and the seed joins last. Both the reference model and
/// the timed engine call this one implementation, making their results
/// bit-identical with no tolerance.
template <typename Get, typename Op>
f64 fixed_order_reduce(u64 vl, unsigned L, unsigned C, Get&& get, Op&& op,
                       f64 seed)
{
  using Part = std::optional<f64>;
  auto join = [&op](Part a, Part b) -> Part {
    if (a and b)
      return op(*a, *b);
    return a ? a : b;
  };

  // tree over [lo, lo+n) of per-unit partials
  std::function<Part(std::function<Part(unsigned)>, unsigned, unsigned)> tree =
    [&](std::function<Part(unsigned)> leaf, unsigned lo, unsigned n) -> Part {
    if (n == 1)
      return leaf(lo);
    return join(tree(leaf, lo, n / 2), tree(leaf, lo + n / 2, n / 2));
  };

  auto lane_partial = [&](unsigned c, unsigned l) -> Part {
    Part acc;
    for (u64 i = static_cast<u64>(c) * L + l; i < vl;
         i += static_cast<u64>(L) * C)
      acc = join(acc, get(i));
    return acc;
  };

  auto cluster_partial = [&](unsigned c) -> Part {
    return tree([&](unsigned l) { return lane_partial(c, l); }, 0, L);
  };

  Part total = tree([&](unsigned c) { return cluster_partial(c); }, 0, C);
  return total ? op(*total, seed) : seed;
}

/// Final architectural state of a functional run.
struct GoldenResult
{
  MemoryImage memory;
  std::array<u64, 32> xregs{};
  std::array<f64, 32> fregs{};
  u64 flops = 0;    ///< DP-FLOPs by the fixed accounting rules
  u64 executed = 0; ///< dynamic instruction count
};

/// Reference interpreter: element-wise semantics over flat register
/// buffers, no timing. The timed engine must reproduce its final memory
/// bit-exactly under every latency configuration.
class GoldenModel
{
public:
  GoldenModel(const MachineConfig& cfg, MemoryImage image)
    : cfg_(cfg), mem_(std::move(image))
  {
    cfg_.validate();
    for (auto& reg : vregs_)
      reg.assign(cfg_.vlen() / 8, 0);
  }

  /// Copy a program's data segments into memory (run before execution).
  void apply_data(const Program& prog)
  {
    for (const DataSegment& seg : prog.data)
      std::memcpy(mem_.at(seg.addr, seg.bytes.size()), seg.bytes.data(),
                  seg.bytes.size());
  }

  /// Execute a whole program (entry at index 0, run to the end).
  void run(const Program& prog)
  {
    apply_data(prog);
    std::vector<i64> loop_left(prog.code.size(), -1);
    u64 pc = 0;
    while (pc < prog.code.size())
      {
        const Instr& in = prog.code[pc];
        if (in.op == Op::kLoop)
          {
            i64& left = loop_left[pc];
            if (left < 0)
              left = in.imm; // first arrival arms the counter
            if (--left > 0)
              {
                pc = static_cast<u64>(in.loop_target);
                ++executed_;
                continue;
              }
            left = -1; // disarm so an enclosing loop re-arms it
            ++pc;
            ++executed_;
            continue;
          }
        step(in);
        ++pc;
        ++executed_;
      }
  }

  GoldenResult result() &&
  {
    GoldenResult r;
    r.memory = std::move(mem_);
    r.xregs = xregs_;
    r.fregs = fregs_;
    r.flops = flops_;
    r.executed = executed_;
    return r;
  }

  // --- architectural accessors (used by tests and the engine) ---

  u64 vl() const { return vl_; }
  unsigned sew() const { return sew_; }
  unsigned lmul() const { return lmul_; }
  u64 flops() const { return flops_; }
  const std::vector<u8>& vreg(unsigned r) const { return vregs_[r]; }
  u64 xreg(unsigned r) const { return xregs_[r]; }
  f64 freg(unsigned r) const { return fregs_[r]; }
  const MemoryImage& memory() const { return mem_; }

  /// Execute one non-loop instruction.
  void step(const Instr& in)
  {
    switch (in.op)
      {
      case Op::kVsetvli:
        exec_vsetvli(in);
        break;
      case Op::kVle:
      case Op::kVlse:
        exec_load(in);
        break;
      case Op::kVse:
      case Op::kVsse:
        exec_store(in);
        break;
      case Op::kVfaddVV:
      case Op::kVfsubVV:
      case Op::kVfmulVV:
      case Op::kVfdivVV:
      case Op::kVfmaccVV:
      case Op::kVfmaddVV:
        exec_fp_vv(in);
        break;
      case Op::kVfaddVF:
      case Op::kVfsubVF:
      case Op::kVfmulVF:
      case Op::kVfdivVF:
      case Op::kVfmaccVF:
      case Op::kVfnmsacVF:
        exec_fp_vf(in);
        break;
      case Op::kVmvVV:
        require_group(in.vd);
        require_group(in.vs1);
        for (u64 i = 0; i < vl_; ++i)
          write_elem(in.vd, i, read_elem(in.vs1, i));
        break;
      case Op::kVfmvVF:
        require_f64();
        require_group(in.vd);
        for (u64 i = 0; i < vl_; ++i)
          write_f64_elem(in.vd, i, fregs_[in.fs1]);
        break;
      case Op::kVfmvSF:
        require_f64();
        if (vl_ > 0)
          write_f64_elem(in.vd, 0, fregs_[in.fs1]);
        break;
      case Op::kVfmvFS:
        require_f64();
        fregs_[in.fd] = read_f64_elem(in.vs2, 0);
        break;
      case Op::kVfmergeVFM:
        require_f64();
        require_group(in.vd);
        require_group(in.vs2);
        for (u64 i = 0; i < vl_; ++i)
          write_f64_elem(in.vd, i,
                         mask_bit(i) ? fregs_[in.fs1] : read_f64_elem(in.vs2, i));
        break;
      case Op::kVmfltVF:
      case Op::kVmfleVF:
      case Op::kVmfgtVF:
      case Op::kVmfgeVF:
        exec_compare_vf(in);
        break;
      case Op::kVmseqVX:
      case Op::kVmsneVX:
        exec_compare_vx(in);
        break;
      case Op::kVfslide1upVF:
        require_f64();
        require_group(in.vd);
        require_group(in.vs2);
        {
          std::vector<f64> src = snapshot_f64(in.vs2, vl_);
          for (u64 i = 0; i < vl_; ++i)
            write_f64_elem(in.vd, i, i == 0 ? fregs_[in.fs1] : src[i - 1]);
        }
        break;
      case Op::kVfslide1downVF:
        require_f64();
        require_group(in.vd);
        require_group(in.vs2);
        {
          std::vector<f64> src = snapshot_f64(in.vs2, vl_);
          for (u64 i = 0; i < vl_; ++i)
            write_f64_elem(in.vd, i,
                           i + 1 == vl_ ? fregs_[in.fs1] : src[i + 1]);
        }
        break;
      case Op::kVslideupVX:
        exec_slide_vx(in, false);
        break;
      case Op::kVslidedownVX:
        exec_slide_vx(in, true);
        break;
      case Op::kVfredusum:
      case Op::kVfredmax:
        exec_reduction(in);
        break;
      case Op::kVfcvtXF:
        require_f64();
        require_group(in.vd);
        require_group(in.vs2);
        for (u64 i = 0; i < vl_; ++i)
          if (not in.masked or mask_bit(i))
            write_elem(in.vd, i,
                       static_cast<u64>(sem_fcvt_x(read_f64_elem(in.vs2, i))));
        break;
      case Op::kVfcvtFX:
        require_f64();
        require_group(in.vd);
        require_group(in.vs2);
        for (u64 i = 0; i < vl_; ++i)
          if (not in.masked or mask_bit(i))
            write_f64_elem(in.vd, i,
                           sem_fcvt_f(static_cast<i64>(read_elem(in.vs2, i))));
        break;
      case Op::kVaddVX:
        require_group(in.vd);
        require_group(in.vs2);
        for (u64 i = 0; i < vl_; ++i)
          if (not in.masked or mask_bit(i))
            write_elem(in.vd, i,
                       static_cast<u64>(
                         sem_add(static_cast<i64>(read_elem(in.vs2, i)),
                                 static_cast<i64>(xregs_[in.rs1]))));
        break;
      case Op::kVsllVI:
        require_group(in.vd);
        require_group(in.vs2);
        for (u64 i = 0; i < vl_; ++i)
          if (not in.masked or mask_bit(i))
            write_elem(in.vd, i,
                       static_cast<u64>(
                         sem_sll(static_cast<i64>(read_elem(in.vs2, i)),
                                 static_cast<unsigned>(in.imm))));
        break;
      case Op::kLi:
        write_x(in.rd, static_cast<u64>(in.imm));
        break;
      case Op::kAddi:
        write_x(in.rd, static_cast<u64>(sem_add(
                         static_cast<i64>(xregs_[in.rs1]), in.imm)));
        break;
      case Op::kAdd:
        write_x(in.rd, static_cast<u64>(
                         sem_add(static_cast<i64>(xregs_[in.rs1]),
                                 static_cast<i64>(xregs_[in.rs2]))));
        break;
      case Op::kSub:
        write_x(in.rd, static_cast<u64>(
                         sem_add(static_cast<i64>(xregs_[in.rs1]),
                                 -static_cast<i64>(xregs_[in.rs2]))));
        break;
      case Op::kSlli:
        write_x(in.rd, static_cast<u64>(sem_sll(
                         static_cast<i64>(xregs_[in.rs1]),
                         static_cast<unsigned>(in.imm))));
        break;
      case Op::kFld:
        fregs_[in.fd] =
          mem_.read_f64(xregs_[in.rs1] + static_cast<u64>(in.imm));
        break;
      case Op::kFsd:
        mem_.write_f64(xregs_[in.rs1] + static_cast<u64>(in.imm),
                       fregs_[in.fs1]);
        break;
      case Op::kFli:
        fregs_[in.fd] = bits_f64(static_cast<u64>(in.imm));
        break;
      case Op::kLoop:
        throw Error("loop pseudo-op outside program context");
      }
  }

  /// Active (unmasked) element count for one instruction — also the basis
  /// of FLOP accounting in the timed engine.
  u64 active_elements(const Instr& in) const
  {
    if (not in.masked or in.op == Op::kVfmergeVFM)
      return vl_;
    u64 n = 0;
    for (u64 i = 0; i < vl_; ++i)
      n += mask_bit(i);
    return n;
  }

private:
  void exec_vsetvli(const Instr& in)
  {
    sew_ = in.sew;
    lmul_ = in.lmul;
    if (in.rs1 == 0 and in.rd == 0)
      {
        // vtype-only form: vl is preserved
        vl_ = std::min(vl_, vlmax(cfg_.vlen(), sew_, lmul_));
        return;
      }
    u64 avl = in.rs1 == 0 ? ~0ull : xregs_[in.rs1];
    vl_ = vsetvl(avl, sew_, lmul_, cfg_.vlen());
    write_x(in.rd, vl_);
  }

  void exec_load(const Instr& in)
  {
    if (in.mem_sew != sew_)
      throw Error("memory element width differs from vtype sew");
    require_group(in.vd);
    unsigned esz = in.mem_sew / 8;
    u64 stride = in.op == Op::kVlse ? xregs_[in.rs2] : esz;
    u64 base = xregs_[in.rs1];
    for (u64 i = 0; i < vl_; ++i)
      {
        const u8* p = mem_.at(base + i * stride, esz);
        u64 v = 0;
        for (unsigned b = 0; b < esz; ++b)
          v |= static_cast<u64>(p[b]) << 8 * b;
        write_elem(in.vd, i, v);
      }
  }

  void exec_store(const Instr& in)
  {
    if (in.mem_sew != sew_)
      throw Error("memory element width differs from vtype sew");
    require_group(in.vd);
    unsigned esz = in.mem_sew / 8;
    u64 stride = in.op == Op::kVsse ? xregs_[in.rs2] : esz;
    u64 base = xregs_[in.rs1];
    for (u64 i = 0; i < vl_; ++i)
      {
        u64 v = read_elem(in.vd, i);
        u8* p = mem_.at(base + i * stride, esz);
        for (unsigned b = 0; b < esz; ++b)
          p[b] = static_cast<u8>(v >> 8 * b);
      }
  }

  void exec_fp_vv(const Instr& in)
  {
    require_f64();
    require_group(in.vd);
    require_group(in.vs1);
    require_group(in.vs2);
    for (u64 i = 0; i < vl_; ++i)
      {
        if (in.masked and not mask_bit(i))
          continue;
        f64 a = read_f64_elem(in.vs2, i);
        f64 b = read_f64_elem(in.vs1, i);
        f64 d = read_f64_elem(in.vd, i);
        f64 r = 0;
        switch (in.op)
          {
          case Op::kVfaddVV: r = sem_fadd(a, b); break;
          case Op::kVfsubVV: r = sem_fsub(a, b); break;
          case Op::kVfmulVV: r = sem_fmul(a, b); break;
          case Op::kVfdivVV: r = sem_fdiv(a, b); break;
          case Op::kVfmaccVV: r = sem_fmacc(d, b, a); break;
          case Op::kVfmaddVV: r = sem_fmacc(a, b, d); break;
          default: break;
          }
        write_f64_elem(in.vd, i, r);
        flops_ += flops_per_element(in.op);
      }
  }

  void exec_fp_vf(const Instr& in)
  {
    require_f64();
    require_group(in.vd);
    require_group(in.vs2);
    f64 f = fregs_[in.fs1];
    for (u64 i = 0; i < vl_; ++i)
      {
        if (in.masked and not mask_bit(i))
          continue;
        f64 a = read_f64_elem(in.vs2, i);
        f64 d = read_f64_elem(in.vd, i);
        f64 r = 0;
        switch (in.op)
          {
          case Op::kVfaddVF: r = sem_fadd(a, f); break;
          case Op::kVfsubVF: r = sem_fsub(a, f); break;
          case Op::kVfmulVF: r = sem_fmul(a, f); break;
          case Op::kVfdivVF: r = sem_fdiv(a, f); break;
          case Op::kVfmaccVF: r = sem_fmacc(d, f, a); break;
          case Op::kVfnmsacVF: r = sem_fmacc(d, -f, a); break;
          default: break;
          }
        write_f64_elem(in.vd, i, r);
        flops_ += flops_per_element(in.op);
      }
  }

  void exec_compare_vf(const Instr& in)
  {
    require_f64();
    require_group(in.vs2);
    f64 f = fregs_[in.fs1];
    for (u64 i = 0; i < vl_; ++i)
      {
        if (in.masked and not mask_bit(i))
          continue;
        f64 a = read_f64_elem(in.vs2, i);
        bool r = false;
        switch (in.op)
          {
          case Op::kVmfltVF: r = a < f; break;
          case Op::kVmfleVF: r = a <= f; break;
          case Op::kVmfgtVF: r = a > f; break;
          case Op::kVmfgeVF: r = a >= f; break;
          default: break;
          }
        set_reg_bit(in.vd, i, r);
      }
  }

  void exec_compare_vx(const Instr& in)
  {
    require_group(in.vs2);
    u64 x = xregs_[in.rs1];
    u64 keep = sew_ == 64 ? ~0ull : (1ull << sew_) - 1;
    for (u64 i = 0; i < vl_; ++i)
      {
        if (in.masked and not mask_bit(i))
          continue;
        bool eq = read_elem(in.vs2, i) == (x & keep);
        set_reg_bit(in.vd, i, in.op == Op::kVmseqVX ? eq : not eq);
      }
  }

  void exec_slide_vx(const Instr& in, bool down)
  {
    require_group(in.vd);
    require_group(in.vs2);
    u64 vm = vlmax(cfg_.vlen(), sew_, lmul_);
    u64 off = std::min(xregs_[in.rs1], vm);
    std::vector<u64> src(vm);
    for (u64 i = 0; i < vm; ++i)
      src[i] = read_elem(in.vs2, i);
    if (down)
      for (u64 i = 0; i < vl_; ++i)
        write_elem(in.vd, i, i + off < vm ? src[i + off] : 0);
    else
      for (u64 i = off; i < vl_; ++i)
        write_elem(in.vd, i, src[i - off]);
  }

  void exec_reduction(const Instr& in)
  {
    require_f64();
    require_group(in.vs2);
    f64 seed = read_f64_elem(in.vs1, 0);
    auto get = [&](u64 i) { return read_f64_elem(in.vs2, i); };
    f64 r;
    if (in.op == Op::kVfredusum)
      r = fixed_order_reduce(vl_, cfg_.lanes_per_cluster, cfg_.clusters, get,
                             [](f64 a, f64 b) { return sem_fadd(a, b); },
                             seed);
    else
      r = fixed_order_reduce(vl_, cfg_.lanes_per_cluster, cfg_.clusters, get,
                             [](f64 a, f64 b) { return sem_fmax(a, b); },
                             seed);
    if (vl_ > 0)
      {
        write_f64_elem(in.vd, 0, r);
        flops_ += vl_; // vl−1 tree combines plus the seed join
      }
  }

  // --- register plumbing ---

  void require_f64() const
  {
    if (sew_ != 64)
      throw Error("floating-point vector ops require sew=64");
  }

  void require_group(unsigned reg) const
  {
    if (reg % lmul_ != 0)
      throw Error("register v" + std::to_string(reg) +
                  " not aligned to lmul group");
  }

  /// Element i of the register group starting at `reg` (little-endian).
  u64 read_elem(unsigned reg, u64 i) const
  {
    unsigned esz = sew_ / 8;
    u64 byte = i * esz;
    unsigned rbytes = cfg_.vlen() / 8;
    const u8* p = vregs_[reg + byte / rbytes].data() + byte % rbytes;
    u64 v = 0;
    for (unsigned b = 0; b < esz; ++b)
      v |= static_cast<u64>(p[b]) << 8 * b;
    return v;
  }

  void write_elem(unsigned reg, u64 i, u64 v)
  {
    unsigned esz = sew_ / 8;
    u64 byte = i * esz;
    unsigned rbytes = cfg_.vlen() / 8;
    u8* p = vregs_[reg + byte / rbytes].data() + byte % rbytes;
    for (unsigned b = 0; b < esz; ++b)
      p[b] = static_cast<u8>(v >> 8 * b);
  }

  f64 read_f64_elem(unsigned reg, u64 i) const
  {
    return bits_f64(read_elem(reg, i));
  }

  void write_f64_elem(unsigned reg, u64 i, f64 v)
  {
    write_elem(reg, i, f64_bits(v));
  }

  std::vector<f64> snapshot_f64(unsigned reg, u64 n) const
  {
    std::vector<f64> v(n);
    for (u64 i = 0; i < n; ++i)
      v[i] = read_f64_elem(reg, i);
    return v;
  }

  /// Mask bit i: bit i of register v0's flat value.
  bool mask_bit(u64 i) const
  {
    return vregs_[0][i / 8] >> (i % 8) & 1;
  }

  void set_reg_bit(unsigned reg, u64 i, bool v)
  {
    u8& b = vregs_[reg][i / 8];
    b = static_cast<u8>(v ? b | 1u << i % 8 : b & ~(1u << i % 8));
  }

  void write_x(unsigned rd, u64 v)
  {
    if (rd != 0)
      xregs_[rd] = v;
  }

  MachineConfig cfg_;
  MemoryImage mem_;
  std::array<std::vector<u8>, 32> vregs_;
  std::array<u64, 32> xregs_{};
  std::array<f64, 32> fregs_{};
  u64 vl_ = 0;
  unsigned sew_ = 64;
  unsigned lmul_ = 1;
  u64 flops_ = 0;
  u64 executed_ = 0;
};

/// Run the reference model start to finish.
inline GoldenResult golden_execute(const Program& prog,
                                   const MachineConfig& cfg, MemoryImage image)
{
  GoldenModel vm(cfg, std::move(image));
  vm.run(prog);
  return std::move(vm).result();
}

} // namespace araxl
