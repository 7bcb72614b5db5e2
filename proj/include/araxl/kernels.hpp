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

/// \file kernels.hpp
/// Generators for the six reference benchmark programs, their input data,
/// expected floating-point operation counts, and reference outputs.
///
/// Problem sizes follow the weak-scaling convention: a vector operand of
/// `bytes_per_lane` bytes on each of the machine's L*C lanes, i.e. a row
/// length of N = (bytes_per_lane/8) * L * C double-precision elements.

#pragma once

#include <algorithm>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "asm.hpp"
#include "config.hpp"
#include "golden.hpp"

namespace araxl
{

/// The benchmark kernels.
enum class Kernel
{
  kFmatmul,     ///< dense matrix multiply, C[64xN] = A[64x256] * B[256xN]
  kFconv2d,     ///< 7x7 2D convolution over a 256xN image
  kJacobi2d,    ///< 5-point stencil sweep over a 256xN grid
  kFdotproduct, ///< dot product of two N-element vectors
  kExp,         ///< elementwise exponential of an N-element vector
  kSoftmax,     ///< row-wise softmax of a 64xN matrix
};

inline constexpr Kernel kAllKernels[] = {
  Kernel::kFmatmul, Kernel::kFconv2d,  Kernel::kJacobi2d,
  Kernel::kFdotproduct, Kernel::kExp,  Kernel::kSoftmax,
};

inline const char* kernel_name(Kernel k)
{
  switch (k)
    {
    case Kernel::kFmatmul: return "fmatmul";
    case Kernel::kFconv2d: return "fconv2d";
    case Kernel::kJacobi2d: return "jacobi2d";
    case Kernel::kFdotproduct: return "fdotproduct";
    case Kernel::kExp: return "exp";
    case Kernel::kSoftmax: return "softmax";
    }
  return "?";
}

inline Kernel parse_kernel(const std::string& name)
{
  for (Kernel k : kAllKernels)
    if (name == kernel_name(k))
      return k;
  throw ConfigError("unknown kernel '" + name + "'");
}

/// Register-group multiplier each kernel runs at.  fmatmul picks the
/// smallest group that holds one matrix row; the others are fixed by the
/// kernel's register budget.
inline unsigned kernel_lmul(Kernel k, u64 bytes_per_lane)
{
  const u64 n = bytes_per_lane / 8;
  switch (k)
    {
    case Kernel::kFmatmul: return n <= 16 ? 1 : n <= 32 ? 2 : 4;
    case Kernel::kFconv2d: return 2;
    case Kernel::kJacobi2d: return 4;
    case Kernel::kFdotproduct: return 8;
    case Kernel::kExp:
    case Kernel::kSoftmax: return 1;
    }
  return 1;
}

/// Throughput ceiling of the kernel's instruction mix, in DP-FLOP/cycle.
/// Every FPU retires one element per cycle; a fused multiply-add counts two
/// FLOPs, everything else one.  The fractional ceilings state how many
/// FLOPs the kernel's loop retires per FPU-occupied cycle.
inline f64 max_perf(Kernel k, const MachineConfig& cfg)
{
  const f64 lanes = static_cast<f64>(cfg.total_lanes());
  switch (k)
    {
    case Kernel::kFmatmul:
    case Kernel::kFconv2d: return 2.0 * lanes;       // pure multiply-add
    case Kernel::kJacobi2d: return lanes;            // adds and one multiply
    case Kernel::kFdotproduct: return lanes;         // two loads per FMA
    case Kernel::kExp: return 28.0 / 21.0 * lanes;   // mixed poly/cvt/cmp
    case Kernel::kSoftmax: return 32.0 / 25.0 * lanes;
    }
  return lanes;
}

/// A generated benchmark: program text, parsed form, initialized memory,
/// the expected FLOP total, and the reference execution result.
struct KernelProgram
{
  Kernel kernel = Kernel::kFmatmul;
  u64 bytes_per_lane = 0;
  std::string text;
  Program program;
  MemoryImage image{0, 0};
  u64 flops = 0;
  GoldenResult golden;
};

namespace kdetail
{

inline std::string s64(u64 v) { return std::to_string(v); }

/// Streams assembly text lines.
struct Emitter
{
  std::string text;
  void l(const std::string& s)
  {
    text += s;
    text += '\n';
  }
};

/// 64-byte-aligned bump allocator over the memory image.
struct Alloc
{
  u64 next = 0x1000;
  u64 limit;

  explicit Alloc(u64 lim) : limit(lim) {}

  u64 take(u64 bytes)
  {
    u64 a = next;
    if (bytes > limit or a > limit - bytes)
      throw ConfigError("problem does not fit the memory image");
    next = (a + bytes + 63) & ~u64{63};
    return a;
  }
};

inline void fill_random(MemoryImage& img, Rng& rng, u64 addr, u64 count)
{
  for (u64 i = 0; i < count; ++i)
    img.write_f64(addr + 8 * i, rng.signed_unit());
}

/// C[64xN] = A[64x256] * B[256xN].  A is stored column-major so that the
/// four scalars of an accumulator block sit 8 bytes apart; each inner
/// iteration streams one row of B and feeds four multiply-accumulates,
/// keeping the FPUs four vector operations deep per memory operation.
inline void emit_fmatmul(Emitter& e, MemoryImage& img, Rng& rng,
                         const MachineConfig& cfg, u64 n, u64& closed_flops)
{
  constexpr u64 kM = 64, kK = 256, kBlock = 4;
  const u64 lc = cfg.total_lanes();
  const u64 N = n * lc;
  const unsigned lmul = kernel_lmul(Kernel::kFmatmul, n * 8);
  if (N > u64{cfg.vlen()} / 64 * lmul)
    throw ConfigError("fmatmul rows exceed the register group; "
                      "bytes/lane above 512 is not supported");
  Alloc al(img.size());
  const u64 a_cols = al.take(kK * kM * 8);
  const u64 b = al.take(kK * N * 8);
  const u64 c = al.take(kM * N * 8);
  fill_random(img, rng, a_cols, kK * kM);
  fill_random(img, rng, b, kK * N);

  const std::string row_bytes = s64(N * 8);
  e.l("# fmatmul: C[64x" + s64(N) + "] = A[64x256] * B[256x" + s64(N) + "]");
  e.l("li t0, " + s64(N));
  e.l("vsetvli t1, t0, e64, m" + s64(lmul));
  e.l("fli.d ft0, 0");
  e.l("li s0, " + s64(a_cols));
  e.l("li s1, " + s64(b));
  e.l("li s2, " + s64(c));
  e.l("block:");
  e.l("add a0, s0, zero");
  e.l("addi s0, s0, " + s64(kBlock * 8));
  e.l("add a1, s1, zero");
  for (unsigned r = 0; r < kBlock; ++r)
    e.l("vfmv.v.f v" + s64(16 + 4 * r) + ", ft0");
  e.l("kloop:");
  e.l("vle64.v v8, (a1)");
  e.l("addi a1, a1, " + row_bytes);
  for (unsigned r = 0; r < kBlock; ++r)
    e.l("fld fa" + s64(r) + ", " + s64(8 * r) + "(a0)");
  e.l("addi a0, a0, " + s64(kM * 8));
  for (unsigned r = 0; r < kBlock; ++r)
    e.l("vfmacc.vf v" + s64(16 + 4 * r) + ", fa" + s64(r) + ", v8");
  e.l(".loop kloop " + s64(kK));
  for (unsigned r = 0; r < kBlock; ++r)
    {
      e.l("vse64.v v" + s64(16 + 4 * r) + ", (s2)");
      e.l("addi s2, s2, " + row_bytes);
    }
  e.l(".loop block " + s64(kM / kBlock));
  closed_flops = 2 * kM * kK * N;
}

/// Valid 7x7 convolution of a 256xN image.  Seven image rows stay resident
/// in rotating register groups; each output row copies one of them into a
/// scratch register, accumulates 49 taps via repeated slide-by-1, loads the
/// single new bottom row a full row ahead of its first use, and trims the
/// 6 partial tail elements by storing 6 fewer.  Rows longer than one
/// LMUL=2 group are split into near-equal overlapping column panels.
inline void emit_fconv2d(Emitter& e, MemoryImage& img, Rng& rng,
                         const MachineConfig& cfg, u64 n)
{
  constexpr u64 kRowsIn = 256, kF = 7;
  const u64 lc = cfg.total_lanes();
  const u64 N = n * lc;
  if (N < kF)
    throw ConfigError("fconv2d needs at least 7 columns");
  const u64 vlmax = u64{cfg.vlen()} / 64 * 2;
  const u64 wout = N - (kF - 1);
  const u64 rows_out = kRowsIn - (kF - 1);
  Alloc al(img.size());
  const u64 im = al.take(kRowsIn * N * 8);
  const u64 filt = al.take(kF * kF * 8);
  const u64 outb = al.take(rows_out * wout * 8);
  fill_random(img, rng, im, kRowsIn * N);
  fill_random(img, rng, filt, kF * kF);

  e.l("# fconv2d: 7x7 filter over a 256x" + s64(N) + " image (valid region)");
  e.l("fli.d ft0, 0");
  // seven rotating image-row buffers, accumulator, slide scratch
  const char* slot[kF] = {"v2", "v4", "v6", "v8", "v10", "v12", "v14"};
  auto body = [&](unsigned r, bool load_next, u64 row_bytes, u64 out_bytes) {
    for (unsigned dr = 0; dr < kF; ++dr)
      {
        for (unsigned dc = 0; dc < kF; ++dc)
          e.l("fld fa" + s64(dc) + ", " + s64((dr * kF + dc) * 8) + "(s4)");
        e.l("vmv.v.v v18, " + std::string(slot[(r + dr) % kF]));
        if (dr == 0)
          e.l("vfmul.vf v16, v18, fa0");
        else
          e.l("vfmacc.vf v16, fa0, v18");
        for (unsigned dc = 1; dc < kF; ++dc)
          {
            e.l("vfslide1down.vf v18, v18, ft0");
            e.l("vfmacc.vf v16, fa" + s64(dc) + ", v18");
          }
      }
    if (load_next)
      {
        e.l("vle64.v " + std::string(slot[r % kF]) + ", (s0)");
        e.l("addi s0, s0, " + s64(row_bytes));
      }
    e.l("vsetvli t1, t3, e64, m2");
    e.l("vse64.v v16, (s1)");
    e.l("addi s1, s1, " + s64(out_bytes));
    e.l("vsetvli t1, t2, e64, m2");
  };

  // Near-equal column panels keep every panel wide enough to stay
  // FPU-bound; strips are rounded up to whole lane groups where room
  // allows so group padding stays small.
  const u64 cols_max = vlmax - (kF - 1);
  const u64 panels = (wout + cols_max - 1) / cols_max;
  unsigned panel = 0;
  u64 q = 0;
  while (q < wout)
    {
      const u64 remaining = wout - q;
      const u64 target = (remaining + (panels - panel) - 1) / (panels - panel);
      u64 store_w = target;
      const u64 rounded = (target + (kF - 1) + lc - 1) / lc * lc;
      if (rounded - (kF - 1) <= cols_max)
        store_w = std::min(rounded - (kF - 1), remaining);
      const u64 vl_c = store_w + (kF - 1);
      const std::string lbl = "prow" + s64(panel);
      e.l("# panel " + s64(panel) + ": output columns " + s64(q) + ".." +
          s64(q + store_w - 1));
      e.l("li t2, " + s64(vl_c));
      e.l("li t3, " + s64(store_w));
      e.l("vsetvli t1, t2, e64, m2");
      e.l("li s0, " + s64(im + q * 8));
      e.l("li s1, " + s64(outb + q * 8));
      e.l("li s4, " + s64(filt));
      for (unsigned dr = 0; dr < kF; ++dr)
        {
          e.l("vle64.v " + std::string(slot[dr]) + ", (s0)");
          e.l("addi s0, s0, " + s64(N * 8));
        }
      // 250 output rows: unrolled in sevens so the buffer roles repeat,
      // then a five-row epilogue (the last row has nothing left to fetch)
      e.l(lbl + ":");
      for (unsigned r = 0; r < kF; ++r)
        body(r, true, N * 8, wout * 8);
      e.l(".loop " + lbl + " " + s64((rows_out - 5) / kF));
      for (unsigned r = 0; r < 5; ++r)
        body(r, r < 4, N * 8, wout * 8);
      ++panel;
      q += store_w;
    }
}

/// One Jacobi sweep of the 5-point stencil over a 256xN grid, writing the
/// 254 interior rows to a second buffer.  Left/right neighbors come from
/// slide-by-1 with edge replication; the mix deliberately avoids fused
/// multiply-adds so each element costs five FPU cycles for five FLOPs.
inline void emit_jacobi2d(Emitter& e, MemoryImage& img, Rng& rng,
                          const MachineConfig& cfg, u64 n)
{
  constexpr u64 kRows = 256;
  const u64 lc = cfg.total_lanes();
  const u64 N = n * lc;
  if (N > u64{cfg.vlen()} / 64 * 4)
    throw ConfigError("jacobi2d rows exceed the register group; "
                      "bytes/lane above 512 is not supported");
  Alloc al(img.size());
  const u64 im = al.take(kRows * N * 8);
  const u64 outb = al.take((kRows - 2) * N * 8);
  fill_random(img, rng, im, kRows * N);

  const std::string row_bytes = s64(N * 8);
  e.l("# jacobi2d: 5-point stencil over a 256x" + s64(N) + " grid");
  e.l("li t0, " + s64(N));
  e.l("vsetvli t1, t0, e64, m4");
  e.l("fli.d fa5, 0.2");
  // Three rotating row buffers: each step reuses two rows already in
  // registers and loads only the new bottom row, two rows ahead of its
  // use, so the memory round trip hides under the stencil arithmetic.
  e.l("li s0, " + s64(im)); // next row to load
  e.l("vle64.v v4, (s0)");
  e.l("addi s0, s0, " + row_bytes);
  e.l("vle64.v v8, (s0)");
  e.l("addi s0, s0, " + row_bytes);
  e.l("vle64.v v12, (s0)");
  e.l("addi s0, s0, " + row_bytes);
  e.l("li s2, " + s64(outb));
  e.l("li s3, " + s64(im + N * 8));               // left edge of the row
  e.l("li s4, " + s64(im + N * 8 + (N - 1) * 8)); // right edge of the row
  const char* slot[3] = {"v4", "v8", "v12"};
  auto body = [&](unsigned m, bool load_next) {
    const std::string up = slot[m % 3];
    const std::string cur = slot[(m + 1) % 3];
    const std::string dn = slot[(m + 2) % 3];
    e.l("fld fa0, 0(s3)");
    e.l("fld fa1, 0(s4)");
    e.l("vfslide1up.vf v16, " + cur + ", fa0");
    e.l("vfslide1down.vf v20, " + cur + ", fa1");
    e.l("vfadd.vv v24, " + cur + ", " + up);
    if (load_next)
      {
        e.l("vle64.v " + up + ", (s0)"); // retired top slot takes row m+3
        e.l("addi s0, s0, " + row_bytes);
      }
    e.l("vfadd.vv v28, " + dn + ", v16");
    e.l("vfadd.vv v24, v24, v28");
    e.l("vfadd.vv v24, v24, v20");
    e.l("vfmul.vf v24, v24, fa5");
    e.l("vse64.v v24, (s2)");
    e.l("addi s2, s2, " + row_bytes);
    e.l("addi s3, s3, " + row_bytes);
    e.l("addi s4, s4, " + row_bytes);
  };
  // 254 interior rows: 84 unrolled triples, then two epilogue rows (the
  // last one has no further row to fetch)
  e.l("rows:");
  body(0, true);
  body(1, true);
  body(2, true);
  e.l(".loop rows " + s64((kRows - 2 - 2) / 3));
  body(0, true);
  body(1, false);
}

/// Dot product of two N-element vectors: multiply the first strip, then
/// fold further strips with multiply-accumulate, and finish with a single
/// ordered sum reduction.  The scalar result lands in memory via fsd.
inline void emit_fdotproduct(Emitter& e, MemoryImage& img, Rng& rng,
                             const MachineConfig& cfg, u64 n,
                             u64& closed_flops)
{
  const u64 lc = cfg.total_lanes();
  const u64 N = n * lc;
  const u64 vstrip = u64{cfg.vlen()} / 64 * 8;
  Alloc al(img.size());
  const u64 a = al.take(N * 8);
  const u64 b = al.take(N * 8);
  const u64 y = al.take(8);
  fill_random(img, rng, a, N);
  fill_random(img, rng, b, N);

  const u64 full = N / vstrip, tail = N % vstrip;
  e.l("# fdotproduct: y = a . b over " + s64(N) + " elements");
  e.l("fli.d ft0, 0");
  e.l("li a0, " + s64(a));
  e.l("li a1, " + s64(b));
  if (full)
    {
      e.l("li t0, " + s64(vstrip));
      e.l("vsetvli t1, t0, e64, m8");
      e.l("vle64.v v8, (a0)");
      e.l("vle64.v v16, (a1)");
      e.l("vfmul.vv v24, v8, v16");
      e.l("addi a0, a0, " + s64(vstrip * 8));
      e.l("addi a1, a1, " + s64(vstrip * 8));
      if (full >= 2)
        {
          e.l("strip:");
          e.l("vle64.v v8, (a0)");
          e.l("vle64.v v16, (a1)");
          e.l("addi a0, a0, " + s64(vstrip * 8));
          e.l("addi a1, a1, " + s64(vstrip * 8));
          e.l("vfmacc.vv v24, v8, v16");
          e.l(".loop strip " + s64(full - 1));
        }
      if (tail)
        {
          e.l("li t0, " + s64(tail));
          e.l("vsetvli t1, t0, e64, m8");
          e.l("vle64.v v8, (a0)");
          e.l("vle64.v v16, (a1)");
          e.l("vfmacc.vv v24, v8, v16");
          e.l("li t0, " + s64(vstrip));
          e.l("vsetvli t1, t0, e64, m8");
        }
    }
  else
    {
      e.l("li t0, " + s64(N));
      e.l("vsetvli t1, t0, e64, m8");
      e.l("vle64.v v8, (a0)");
      e.l("vle64.v v16, (a1)");
      e.l("vfmul.vv v24, v8, v16");
    }
  e.l("vfmv.s.f v0, ft0");
  e.l("vfredusum.vs v0, v24, v0");
  e.l("vfmv.f.s fa0, v0");
  e.l("li a2, " + s64(y));
  e.l("fsd fa0, 0(a2)");
  closed_flops = 2 * N;
}

/// Coefficients of the degree-10 expansion of e^r used by exp and softmax.
inline constexpr f64 kExpCoeff[11] = {
  1.0,
  1.0,
  1.0 / 2,
  1.0 / 6,
  1.0 / 24,
  1.0 / 120,
  1.0 / 720,
  1.0 / 5040,
  1.0 / 40320,
  1.0 / 362880,
  1.0 / 3628800,
};

/// Scalar constants and coefficient broadcasts shared by the exponential
/// body: fa0..fa6 and t3 hold range-reduction and clamp constants, and
/// v20..v30 hold the polynomial coefficients.  Requires vl to be set.
inline void emit_exp_constants(Emitter& e)
{
  using asmdetail::format_f64;
  e.l("fli.d fa0, " + format_f64(1.4426950408889634));       // 1/ln 2
  e.l("fli.d fa1, " + format_f64(6.93147180369123816490e-1)); // ln2 high
  e.l("fli.d fa2, " + format_f64(1.90821492927058770002e-10)); // ln2 low
  e.l("fli.d fa3, " + format_f64(709.782712893384));         // overflow
  e.l("fli.d fa4, " + format_f64(-745.1332191019412));       // underflow
  e.l("fli.d fa5, inf");
  e.l("fli.d fa6, 0");
  e.l("li t3, 1023");
  for (unsigned k = 0; k <= 10; ++k)
    {
      e.l("fli.d ft0, " + format_f64(kExpCoeff[k]));
      e.l("vfmv.v.f v" + s64(20 + k) + ", ft0");
    }
}

/// Elementwise e^x of v-register `src` into v`dst`; clobbers v5..v8, v10,
/// and v0.  The mix retires 26 FLOPs over 21 FPU-occupied cycles per
/// element: three polynomial steps are split into explicit multiply+add
/// pairs so the kernel stays inside its stated throughput ceiling.
/// `tap`, when given, is called after each emitted instruction with its
/// 0-based index, letting a caller thread independent work into the body.
inline void emit_exp_body(Emitter& e, unsigned src, unsigned dst = 9,
                          const std::function<void(unsigned)>& tap = {})
{
  const std::string x = "v" + s64(src);
  const std::string y = "v" + s64(dst);
  unsigned n = 0;
  auto put = [&](const std::string& line) {
    e.l(line);
    if (tap)
      tap(n);
    ++n;
  };
  put("vfmul.vf v5, " + x + ", fa0");  // x / ln2
  put("vfcvt.x.f.v v6, v5");           // nearest integer k
  put("vfcvt.f.x.v v7, v6");
  put("vmv.v.v v8, " + x);             // r = x - k ln2 (split constant)
  put("vfnmsac.vf v8, fa1, v7");
  put("vfnmsac.vf v8, fa2, v7");
  put("vmv.v.v " + y + ", v30");       // Horner from c10 down to c0
  put("vfmadd.vv " + y + ", v8, v29");
  put("vfmadd.vv " + y + ", v8, v28");
  put("vfmadd.vv " + y + ", v8, v27");
  put("vfmul.vv " + y + ", " + y + ", v8");
  put("vfadd.vv " + y + ", " + y + ", v26");
  put("vfmadd.vv " + y + ", v8, v25");
  put("vfmul.vv " + y + ", " + y + ", v8");
  put("vfadd.vv " + y + ", " + y + ", v24");
  put("vfmadd.vv " + y + ", v8, v23");
  put("vfmul.vv " + y + ", " + y + ", v8");
  put("vfadd.vv " + y + ", " + y + ", v22");
  put("vfmadd.vv " + y + ", v8, v21");
  put("vfmadd.vv " + y + ", v8, v20");
  put("vadd.vx v10, v6, t3");          // 2^k as raw exponent bits
  put("vsll.vi v10, v10, 52");
  put("vfmul.vv " + y + ", " + y + ", v10");
  put("vmfgt.vf v0, " + x + ", fa3");  // clamp overflow to +inf
  put("vfmerge.vfm " + y + ", " + y + ", fa5, v0");
  put("vmflt.vf v0, " + x + ", fa4");  // clamp underflow to 0
  put("vfmerge.vfm " + y + ", " + y + ", fa6, v0");
}

/// Elementwise exponential of an N-element vector, strip-mined at LMUL=1.
inline void emit_exp(Emitter& e, MemoryImage& img, Rng& rng,
                     const MachineConfig& cfg, u64 n)
{
  const u64 lc = cfg.total_lanes();
  const u64 N = n * lc;
  const u64 vstrip = u64{cfg.vlen()} / 64;
  Alloc al(img.size());
  const u64 xb = al.take(N * 8);
  const u64 yb = al.take(N * 8);
  fill_random(img, rng, xb, N);

  const u64 full = N / vstrip, tail = N % vstrip;
  e.l("# exp: elementwise exponential over " + s64(N) + " elements");
  e.l("li t0, " + s64(full ? vstrip : tail));
  e.l("vsetvli t1, t0, e64, m1");
  emit_exp_constants(e);
  e.l("li a0, " + s64(xb));
  e.l("li a1, " + s64(yb));
  auto strip_body = [&] {
    e.l("vle64.v v1, (a0)");
    emit_exp_body(e, 1);
    e.l("vse64.v v9, (a1)");
  };
  if (full)
    {
      e.l("strip:");
      strip_body();
      e.l("addi a0, a0, " + s64(vstrip * 8));
      e.l("addi a1, a1, " + s64(vstrip * 8));
      e.l(".loop strip " + s64(full));
    }
  if (full and tail)
    {
      e.l("li t0, " + s64(tail));
      e.l("vsetvli t1, t0, e64, m1");
    }
  if (tail)
    strip_body();
}

/// Row-wise softmax of a 64xN matrix: ordered max reduction, shifted
/// exponential, ordered sum reduction, then normalization.
///
/// The schedule keeps both reduction trees off the per-row critical path.
/// Rows rotate through strip banks: while row r runs its exponential
/// passes, row r+1's loads and max-reduction folds and row r-1's divides
/// and stores are threaded into the gaps, each fold woven into the middle
/// of a later exponential strip so its writeback — ring transit included —
/// retires mid-row with nothing waiting on it.  Row r's sum reduction
/// issues at the end of the body and is consumed (scalar capture, divide,
/// store) only a full strip of work later, once issue backpressure has
/// carried the front end past the writeback.  Rows of one or two strips
/// rotate through three banks with every load prefetched at the top of
/// the body; four-strip rows fall back to two banks (the register file
/// fits no third), pairing each load with the divide that frees its slot
/// so the banks stay disjoint in time.
inline void emit_softmax(Emitter& e, MemoryImage& img, Rng& rng,
                         const MachineConfig& cfg, u64 n)
{
  constexpr u64 kRows = 64;
  const u64 lc = cfg.total_lanes();
  const u64 N = n * lc;
  const u64 vstrip = u64{cfg.vlen()} / 64;
  if (N > vstrip and N % vstrip != 0)
    throw ConfigError("softmax rows must be a whole number of strips");
  const u64 strips = N <= vstrip ? 1 : N / vstrip;
  if (strips > 4)
    throw ConfigError("softmax supports at most 4 strips per row; "
                      "bytes/lane above 512 is not supported");
  const u64 svl = N <= vstrip ? N : vstrip;
  Alloc al(img.size());
  const u64 xb = al.take(kRows * N * 8);
  const u64 yb = al.take(kRows * N * 8);
  fill_random(img, rng, xb, kRows * N);

  e.l("# softmax: row-wise over a 64x" + s64(N) + " matrix");
  e.l("li t0, " + s64(svl));
  e.l("vsetvli t1, t0, e64, m1");
  emit_exp_constants(e);
  e.l("fli.d ft1, -inf");
  e.l("li s0, " + s64(xb)); // next row to load
  e.l("li s1, " + s64(yb)); // next row to store

  const unsigned nbanks = strips <= 2 ? 3 : 2;
  const unsigned bank[3] = {1, 14, strips == 1 ? 3u : 16u};
  auto load_slot = [&](unsigned b, u64 k) {
    if (k)
      e.l("addi a0, a0, " + s64(svl * 8));
    e.l("vle64.v v" + s64(b + k) + ", (a0)");
  };
  auto div_slot = [&](unsigned b, u64 k) {
    if (k)
      e.l("addi a1, a1, " + s64(svl * 8));
    e.l("vfdiv.vf v" + s64(b + k) + ", v" + s64(b + k) + ", fs0");
    e.l("vse64.v v" + s64(b + k) + ", (a1)");
  };
  auto fold_slot = [&](unsigned b, u64 k) {
    e.l("vfredmax.vs v12, v" + s64(b + k) + ", v12");
  };
  auto load_and_seed = [&](unsigned b) {
    e.l("add a0, s0, zero");
    for (u64 k = 0; k < strips; ++k)
      load_slot(b, k);
    e.l("addi s0, s0, " + s64(N * 8));
    e.l("vfmv.s.f v12, ft1");
  };
  auto divide_out = [&](unsigned b) {
    e.l("vfmv.f.s fs0, v18"); // row sum, reduced a strip or more ago
    e.l("add a1, s1, zero");
    for (u64 k = 0; k < strips; ++k)
      div_slot(b, k);
    e.l("addi s1, s1, " + s64(N * 8));
  };
  auto body = [&](unsigned r, bool div_prev, bool load_next) {
    const unsigned cur = bank[r % nbanks];
    const unsigned nxt = bank[(r + 1) % nbanks];
    const unsigned prv = bank[(r + nbanks - 1) % nbanks];
    e.l("vfmv.f.s fa7, v12"); // max of this row, folded one row ago
    e.l("vfmv.s.f v12, ft1");
    if (div_prev)
      e.l("add a1, s1, zero");
    if (load_next)
      e.l("add a0, s0, zero");
    if (nbanks == 3 and load_next)
      for (u64 k = 0; k < strips; ++k)
        load_slot(nxt, k);
    std::vector<u64> tail_folds;
    for (u64 k = 0; k < strips; ++k)
      {
        // max-folds due inside this strip's exponential: slot k itself
        // with the loads prefetched, otherwise the slots whose paired
        // loads issued two strips ago
        std::vector<std::pair<unsigned, u64>> weave;
        if (load_next)
          {
            if (nbanks == 3)
              weave.push_back({7u, k});
            else
              for (u64 j = 0; j < strips; ++j)
                {
                  if (j / 2 + 2 == k)
                    weave.push_back({j % 2 ? 14u : 4u, j});
                  else if (k == strips - 1 and j / 2 + 2 > k)
                    tail_folds.push_back(j);
                }
          }
        e.l("vfsub.vf v13, v" + s64(cur + k) + ", fa7");
        emit_exp_body(e, 13, cur + k, [&](unsigned i) {
          for (const auto& [at, slot] : weave)
            if (at == i)
              fold_slot(nxt, slot);
        });
        if (strips > 1)
          {
            if (k == 0)
              e.l("vmv.v.v v11, v" + s64(cur));
            else
              e.l("vfadd.vv v11, v11, v" + s64(cur + k));
          }
        if (k == 0)
          {
            if (div_prev)
              e.l("vfmv.f.s fs0, v18"); // sum of row r-1, issued a row ago
            e.l("vfmv.s.f v18, fa6");
          }
        if (nbanks == 2)
          for (u64 j = 0; j < strips; ++j)
            if (std::min<u64>(j / 2 + 1, strips - 1) == k)
              {
                if (div_prev)
                  div_slot(prv, j);
                if (load_next)
                  load_slot(nxt, j);
              }
      }
    if (nbanks == 3 and div_prev)
      for (u64 k = 0; k < strips; ++k)
        div_slot(prv, k);
    if (div_prev)
      e.l("addi s1, s1, " + s64(N * 8));
    if (load_next)
      e.l("addi s0, s0, " + s64(N * 8));
    e.l("vfredusum.vs v18, v" + s64(strips > 1 ? 11 : cur) + ", v18");
    for (u64 j : tail_folds)
      fold_slot(nxt, j);
  };

  // prologue: fetch and fold row 0 into the first bank
  load_and_seed(bank[0]);
  for (u64 k = 0; k < strips; ++k)
    e.l("vfredmax.vs v12, v" + s64(bank[0] + k) + ", v12");
  // the unrolled loop carries one full bank rotation per iteration
  unsigned r = 0;
  body(r++, false, true);
  while (r % nbanks != 0)
    body(r++, true, true);
  const u64 iters = (kRows - 1 - r) / nbanks;
  e.l("rows:");
  for (unsigned i = 0; i < nbanks; ++i)
    body(r++, true, true);
  e.l(".loop rows " + s64(iters));
  r += (iters - 1) * nbanks;
  while (r + 1 < kRows)
    body(r++, true, true);
  body(r++, true, false);
  divide_out(bank[(r + nbanks - 1) % nbanks]);
}

} // namespace kdetail

/// Generate a benchmark: program text, input data, expected FLOPs, and the
/// reference execution.  fmatmul and fdotproduct have closed-form FLOP
/// counts that are cross-checked against the reference model's counter;
/// the other kernels take the counter's value directly.
inline KernelProgram generate(Kernel k, const MachineConfig& cfg,
                              u64 bytes_per_lane)
{
  if (bytes_per_lane == 0 or bytes_per_lane % 8 != 0)
    throw ConfigError("bytes per lane must be a positive multiple of 8");
  const u64 n = bytes_per_lane / 8;

  KernelProgram out;
  out.kernel = k;
  out.bytes_per_lane = bytes_per_lane;
  out.image = MemoryImage(0, cfg.mem_size);
  Rng rng(kDataSeed);
  kdetail::Emitter e;
  u64 closed = 0;
  switch (k)
    {
    case Kernel::kFmatmul:
      kdetail::emit_fmatmul(e, out.image, rng, cfg, n, closed);
      break;
    case Kernel::kFconv2d:
      kdetail::emit_fconv2d(e, out.image, rng, cfg, n);
      break;
    case Kernel::kJacobi2d:
      kdetail::emit_jacobi2d(e, out.image, rng, cfg, n);
      break;
    case Kernel::kFdotproduct:
      kdetail::emit_fdotproduct(e, out.image, rng, cfg, n, closed);
      break;
    case Kernel::kExp:
      kdetail::emit_exp(e, out.image, rng, cfg, n);
      break;
    case Kernel::kSoftmax:
      kdetail::emit_softmax(e, out.image, rng, cfg, n);
      break;
    }
  out.text = std::move(e.text);
  out.program = parse_program(out.text);
  out.golden = golden_execute(out.program, cfg, out.image);
  out.flops = closed ? closed : out.golden.flops;
  if (closed and closed != out.golden.flops)
    throw Error(std::string("flop accounting mismatch for ") +
                kernel_name(k) + ": closed form " + std::to_string(closed) +
                ", counted " + std::to_string(out.golden.flops));
  return out;
}

} // namespace araxl
