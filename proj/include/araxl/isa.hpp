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

#include <cmath>
#include <limits>
#include <vector>

#include "common.hpp"

namespace araxl
{

/// Supported operations: the vector subset the benchmarks need, plus the
/// scalar stub that drives them. Suffixes name the operand form.
enum class Op : u8
{
  kVsetvli,

  // Unit-stride and strided memory ops (element size in Instr::mem_sew).
  kVle,
  kVse,
  kVlse,
  kVsse,

  // FP arithmetic.
  kVfaddVV,
  kVfaddVF,
  kVfsubVV,
  kVfsubVF,
  kVfmulVV,
  kVfmulVF,
  kVfdivVV,
  kVfdivVF,
  kVfmaccVV,  // vd += vs1 * vs2
  kVfmaccVF,  // vd += f * vs2
  kVfmaddVV,  // vd = vd * vs1 + vs2
  kVfnmsacVF, // vd -= f * vs2

  // Moves, broadcast, merge.
  kVmvVV,     // vd = vs1
  kVfmvVF,    // vd[*] = f
  kVfmvSF,    // vd[0] = f
  kVfmvFS,    // fd = vs2[0]
  kVfmergeVFM,// vd[i] = mask[i] ? f : vs2[i]

  // Mask-producing compares.
  kVmfltVF,
  kVmfleVF,
  kVmfgtVF,
  kVmfgeVF,
  kVmseqVX,
  kVmsneVX,

  // Slides.
  kVfslide1upVF,
  kVfslide1downVF,
  kVslideupVX,
  kVslidedownVX,

  // Reductions (vfredosum is an accepted alias of vfredusum: one fixed order).
  kVfredusum,
  kVfredmax,

  // Conversions and integer ops used for exponent reconstruction.
  kVfcvtXF,   // vd = int64(round-to-nearest-even(vs2))
  kVfcvtFX,   // vd = f64(int64(vs2))
  kVaddVX,
  kVsllVI,

  // Scalar stub.
  kLi,
  kAddi,
  kAdd,
  kSub,
  kSlli,
  kFld,
  kFsd,
  kFli,
  kLoop,      // static-trip-count backward branch (.loop directive)
};

/// One decoded operation. Unused fields are zero.
struct Instr
{
  Op op = Op::kLi;
  u8 vd = 0;
  u8 vs1 = 0;
  u8 vs2 = 0;
  u8 rd = 0;
  u8 rs1 = 0;
  u8 rs2 = 0;
  u8 fd = 0;
  u8 fs1 = 0;
  bool masked = false;  ///< v0.t applied (arithmetic/merge only).
  u8 sew = 64;          ///< vsetvli element width in bits.
  u8 lmul = 1;          ///< vsetvli group multiplier.
  u8 mem_sew = 64;      ///< memory op element width in bits.
  i64 imm = 0;          ///< immediate / fli bits / loop trip count.
  i32 loop_target = -1; ///< code index of the loop head (kLoop).

  bool operator==(const Instr&) const = default;
};

/// True for operations issued to the vector engine (everything that is not
/// part of the scalar stub).
inline bool is_vector_op(Op op)
{
  switch (op)
    {
    case Op::kLi:
    case Op::kAddi:
    case Op::kAdd:
    case Op::kSub:
    case Op::kSlli:
    case Op::kFld:
    case Op::kFsd:
    case Op::kFli:
    case Op::kLoop:
      return false;
    default:
      return true;
    }
}

inline bool is_vector_memory_op(Op op)
{
  return op == Op::kVle or op == Op::kVse or op == Op::kVlse or op == Op::kVsse;
}

inline bool is_compare_op(Op op)
{
  switch (op)
    {
    case Op::kVmfltVF:
    case Op::kVmfleVF:
    case Op::kVmfgtVF:
    case Op::kVmfgeVF:
    case Op::kVmseqVX:
    case Op::kVmsneVX:
      return true;
    default:
      return false;
    }
}

inline bool is_reduction_op(Op op)
{
  return op == Op::kVfredusum or op == Op::kVfredmax;
}

inline bool is_slide_op(Op op)
{
  switch (op)
    {
    case Op::kVfslide1upVF:
    case Op::kVfslide1downVF:
    case Op::kVslideupVX:
    case Op::kVslidedownVX:
      return true;
    default:
      return false;
    }
}

/// Maximum vl for a vtype on a given implementation.
inline u64 vlmax(unsigned vlen_bits, unsigned sew, unsigned lmul)
{
  return static_cast<u64>(vlen_bits) / sew * lmul;
}

/// vsetvl rule: legality-check the vtype, then grant min(avl, VLMAX).
inline u64 vsetvl(u64 avl, unsigned sew, unsigned lmul, unsigned vlen_bits)
{
  if (sew != 8 and sew != 16 and sew != 32 and sew != 64)
    throw ConfigError("illegal sew " + std::to_string(sew));
  if (lmul != 1 and lmul != 2 and lmul != 4 and lmul != 8)
    throw ConfigError("illegal lmul " + std::to_string(lmul));
  if (vlen_bits > 65536)
    throw ConfigError("vlen above architectural maximum");
  u64 vm = vlmax(vlen_bits, sew, lmul);
  return avl < vm ? avl : vm;
}

/// DP-FLOPs contributed by one active element of an operation. FMA-class
/// ops count two; moves, compares, merges and conversions count zero.
inline unsigned flops_per_element(Op op)
{
  switch (op)
    {
    case Op::kVfaddVV:
    case Op::kVfaddVF:
    case Op::kVfsubVV:
    case Op::kVfsubVF:
    case Op::kVfmulVV:
    case Op::kVfmulVF:
    case Op::kVfdivVV:
    case Op::kVfdivVF:
      return 1;
    case Op::kVfmaccVV:
    case Op::kVfmaccVF:
    case Op::kVfmaddVV:
    case Op::kVfnmsacVF:
      return 2;
    case Op::kVfredusum:
    case Op::kVfredmax:
      return 1; // per combining step; reductions count vl steps total
    default:
      return 0;
    }
}

// --- Scalar semantics shared by the golden model and the timed engine. ---
// These define what each operation computes; both execution paths call the
// same definitions so results can only diverge through data movement.

inline f64 sem_fadd(f64 a, f64 b) { return a + b; }
inline f64 sem_fsub(f64 a, f64 b) { return a - b; }
inline f64 sem_fmul(f64 a, f64 b) { return a * b; }
inline f64 sem_fdiv(f64 a, f64 b) { return a / b; }
inline f64 sem_fmacc(f64 acc, f64 a, f64 b) { return std::fma(a, b, acc); }

/// IEEE-754 maximumNumber: a quiet NaN loses to a number; +0 beats -0.
inline f64 sem_fmax(f64 a, f64 b)
{
  if (std::isnan(a))
    return std::isnan(b) ? std::numeric_limits<f64>::quiet_NaN() : b;
  if (std::isnan(b))
    return a;
  if (a == 0.0 and b == 0.0)
    return std::signbit(a) ? b : a;
  return a > b ? a : b;
}

/// Round to nearest even and convert to int64, saturating out-of-range
/// inputs (conversion overflow must not be host-UB).
inline i64 sem_fcvt_x(f64 v)
{
  if (std::isnan(v))
    return std::numeric_limits<i64>::max();
  f64 r = std::nearbyint(v);
  if (r >= 0x1p63)
    return std::numeric_limits<i64>::max();
  if (r < -0x1p63)
    return std::numeric_limits<i64>::min();
  return static_cast<i64>(r);
}

inline f64 sem_fcvt_f(i64 v) { return static_cast<f64>(v); }

inline i64 sem_add(i64 a, i64 b)
{
  return static_cast<i64>(static_cast<u64>(a) + static_cast<u64>(b));
}

inline i64 sem_sll(i64 a, unsigned sh)
{
  return static_cast<i64>(static_cast<u64>(a) << (sh & 63));
}

} // namespace araxl
