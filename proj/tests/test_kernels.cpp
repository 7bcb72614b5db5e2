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

#include <catch2/catch_amalgamated.hpp>

#include <bit>
#include <cmath>
#include <limits>
#include <vector>

#include <araxl/engine.hpp>
#include <araxl/kernels.hpp>

using namespace araxl;

namespace
{

MachineConfig cfg_with(unsigned clusters, unsigned lanes)
{
  MachineConfig cfg;
  cfg.clusters = clusters;
  cfg.lanes_per_cluster = lanes;
  return cfg;
}

/// Mirror of the generator's bump allocator: 64-byte-aligned regions
/// starting at 0x1000.  Recomputing the addresses independently keeps the
/// oracles honest about the data layout.
struct Addr
{
  u64 next = 0x1000;
  u64 take(u64 bytes)
  {
    u64 a = next;
    next = (a + bytes + 63) & ~u64{63};
    return a;
  }
};

std::vector<f64> read_block(const MemoryImage& img, u64 addr, u64 count)
{
  std::vector<f64> v(count);
  for (u64 i = 0; i < count; ++i)
    v[i] = img.read_f64(addr + 8 * i);
  return v;
}

f64 reduce_add(const std::vector<f64>& v, u64 vl, const MachineConfig& cfg,
               f64 seed)
{
  return fixed_order_reduce(
    vl, cfg.lanes_per_cluster, cfg.clusters, [&](u64 i) { return v[i]; },
    [](f64 a, f64 b) { return sem_fadd(a, b); }, seed);
}

f64 reduce_max(const std::vector<f64>& v, u64 vl, const MachineConfig& cfg,
               f64 seed)
{
  return fixed_order_reduce(
    vl, cfg.lanes_per_cluster, cfg.clusters, [&](u64 i) { return v[i]; },
    [](f64 a, f64 b) { return sem_fmax(a, b); }, seed);
}

/// Element oracle for the exponential body: same range reduction, same
/// polynomial order (three steps split into multiply+add), same clamps.
f64 exp_oracle(f64 x)
{
  constexpr f64 kInvLn2 = 1.4426950408889634;
  constexpr f64 kLn2Hi = 6.93147180369123816490e-1;
  constexpr f64 kLn2Lo = 1.90821492927058770002e-10;
  constexpr f64 kOver = 709.782712893384;
  constexpr f64 kUnder = -745.1332191019412;
  constexpr f64 c[11] = {1.0,        1.0,          1.0 / 2,
                         1.0 / 6,    1.0 / 24,     1.0 / 120,
                         1.0 / 720,  1.0 / 5040,   1.0 / 40320,
                         1.0 / 362880, 1.0 / 3628800};
  i64 k = sem_fcvt_x(sem_fmul(x, kInvLn2));
  f64 kf = sem_fcvt_f(k);
  f64 r = x;
  r = sem_fmacc(r, -kLn2Hi, kf);
  r = sem_fmacc(r, -kLn2Lo, kf);
  f64 y = c[10];
  y = sem_fmacc(c[9], r, y); // vfmadd: y = y*r + coefficient
  y = sem_fmacc(c[8], r, y);
  y = sem_fmacc(c[7], r, y);
  y = sem_fmul(y, r);
  y = sem_fadd(y, c[6]);
  y = sem_fmacc(c[5], r, y);
  y = sem_fmul(y, r);
  y = sem_fadd(y, c[4]);
  y = sem_fmacc(c[3], r, y);
  y = sem_fmul(y, r);
  y = sem_fadd(y, c[2]);
  y = sem_fmacc(c[1], r, y);
  y = sem_fmacc(c[0], r, y);
  f64 scale = std::bit_cast<f64>(static_cast<u64>(k + 1023) << 52);
  y = sem_fmul(y, scale);
  if (x > kOver)
    y = std::numeric_limits<f64>::infinity();
  if (x < kUnder)
    y = 0.0;
  return y;
}

bool bits_equal(f64 a, f64 b) { return f64_bits(a) == f64_bits(b); }

} // namespace

TEST_CASE("kernel names round-trip", "[kernels]")
{
  for (Kernel k : kAllKernels)
    CHECK(parse_kernel(kernel_name(k)) == k);
  CHECK_THROWS_AS(parse_kernel("fmatmul3"), ConfigError);
  CHECK_THROWS_AS(parse_kernel(""), ConfigError);
}

TEST_CASE("register group selection per kernel", "[kernels]")
{
  CHECK(kernel_lmul(Kernel::kFmatmul, 64) == 1);
  CHECK(kernel_lmul(Kernel::kFmatmul, 128) == 1);
  CHECK(kernel_lmul(Kernel::kFmatmul, 256) == 2);
  CHECK(kernel_lmul(Kernel::kFmatmul, 512) == 4);
  for (u64 bpl : {64ull, 128ull, 256ull, 512ull})
    {
      CHECK(kernel_lmul(Kernel::kFconv2d, bpl) == 2);
      CHECK(kernel_lmul(Kernel::kJacobi2d, bpl) == 4);
      CHECK(kernel_lmul(Kernel::kFdotproduct, bpl) == 8);
      CHECK(kernel_lmul(Kernel::kExp, bpl) == 1);
      CHECK(kernel_lmul(Kernel::kSoftmax, bpl) == 1);
    }
}

TEST_CASE("instruction-mix throughput ceilings", "[kernels]")
{
  MachineConfig cfg = cfg_with(16, 4); // 64 lanes
  CHECK(max_perf(Kernel::kFmatmul, cfg) == 128.0);
  CHECK(max_perf(Kernel::kFconv2d, cfg) == 128.0);
  CHECK(max_perf(Kernel::kJacobi2d, cfg) == 64.0);
  CHECK(max_perf(Kernel::kFdotproduct, cfg) == 64.0);
  CHECK(max_perf(Kernel::kExp, cfg) == 28.0 / 21.0 * 64.0);
  CHECK(max_perf(Kernel::kSoftmax, cfg) == 32.0 / 25.0 * 64.0);
}

TEST_CASE("closed-form flop counts", "[kernels]")
{
  MachineConfig cfg = cfg_with(2, 4); // 8 lanes
  for (u64 bpl : {64ull, 256ull})
    {
      const u64 N = bpl / 8 * cfg.total_lanes();
      CHECK(generate(Kernel::kFmatmul, cfg, bpl).flops == 2 * 64 * 256 * N);
      CHECK(generate(Kernel::kFdotproduct, cfg, bpl).flops == 2 * N);
      CHECK(generate(Kernel::kExp, cfg, bpl).flops == 26 * N);
      CHECK(generate(Kernel::kJacobi2d, cfg, bpl).flops == 254 * 5 * N);
      CHECK(generate(Kernel::kSoftmax, cfg, bpl).flops == 64 * 30 * N);
      // single column panel at this size: 250 rows of one multiply plus
      // 48 multiply-adds over wout+6 elements
      CHECK(generate(Kernel::kFconv2d, cfg, bpl).flops == 250 * 97 * N);
    }
  // the weak-scaling convention: row length n*L*C elements
  CHECK(generate(Kernel::kFdotproduct, MachineConfig{}, 1024).flops == 2048);
}

TEST_CASE("generation is deterministic", "[kernels]")
{
  MachineConfig cfg = cfg_with(2, 2);
  for (Kernel k : kAllKernels)
    {
      auto a = generate(k, cfg, 64);
      auto b = generate(k, cfg, 64);
      CHECK(a.text == b.text);
      CHECK(a.image.bytes() == b.image.bytes());
      CHECK(a.golden.memory.bytes() == b.golden.memory.bytes());
      CHECK(a.flops == b.flops);
    }
}

TEST_CASE("argument validation", "[kernels]")
{
  MachineConfig cfg;
  CHECK_THROWS_AS(generate(Kernel::kExp, cfg, 0), ConfigError);
  CHECK_THROWS_AS(generate(Kernel::kExp, cfg, 12), ConfigError);
  // rows that exceed the largest register group
  CHECK_THROWS_AS(generate(Kernel::kFmatmul, cfg, 520), ConfigError);
  CHECK_THROWS_AS(generate(Kernel::kJacobi2d, cfg, 520), ConfigError);
  // softmax rows must be whole strips, at most four of them
  CHECK_THROWS_AS(generate(Kernel::kSoftmax, cfg, 136), ConfigError);
  CHECK_THROWS_AS(generate(Kernel::kSoftmax, cfg, 640), ConfigError);
  // problem larger than the memory image
  MachineConfig tiny = cfg;
  tiny.mem_size = 64 * 1024;
  CHECK_THROWS_AS(generate(Kernel::kFmatmul, tiny, 64), ConfigError);
}

TEST_CASE("program shape per kernel", "[kernels]")
{
  MachineConfig cfg = cfg_with(2, 4);
  auto ops_of = [&](Kernel k, u64 bpl) {
    auto p = generate(k, cfg, bpl);
    std::vector<Op> ops;
    for (const Instr& in : p.program.code)
      ops.push_back(in.op);
    return ops;
  };
  auto has = [](const std::vector<Op>& ops, Op op) {
    for (Op o : ops)
      if (o == op)
        return true;
    return false;
  };
  auto lmuls_are = [&](Kernel k, u64 bpl, unsigned lmul) {
    auto p = generate(k, cfg, bpl);
    for (const Instr& in : p.program.code)
      if (in.op == Op::kVsetvli and in.lmul != lmul)
        return false;
    return true;
  };

  for (u64 bpl : {64ull, 128ull, 256ull, 512ull})
    for (Kernel k : kAllKernels)
      CHECK(lmuls_are(k, bpl, kernel_lmul(k, bpl)));

  auto conv = ops_of(Kernel::kFconv2d, 256);
  CHECK(has(conv, Op::kVfslide1downVF));
  CHECK(not has(conv, Op::kVfslide1upVF));
  CHECK(not has(conv, Op::kVslideupVX));
  CHECK(not has(conv, Op::kVslidedownVX));

  auto jac = ops_of(Kernel::kJacobi2d, 256);
  CHECK(has(jac, Op::kVfslide1upVF));
  CHECK(has(jac, Op::kVfslide1downVF));
  CHECK(not has(jac, Op::kVslideupVX));
  CHECK(not has(jac, Op::kVslidedownVX));
  CHECK(not has(jac, Op::kVfmaccVF)); // the stencil mix must stay FMA-free
  CHECK(not has(jac, Op::kVfmaccVV));
  CHECK(not has(jac, Op::kVfmaddVV));

  auto ex = ops_of(Kernel::kExp, 256);
  CHECK(has(ex, Op::kVmfgtVF));
  CHECK(has(ex, Op::kVmfltVF));
  CHECK(has(ex, Op::kVfmergeVFM));

  auto sm = ops_of(Kernel::kSoftmax, 256);
  CHECK(has(sm, Op::kVfredmax));
  CHECK(has(sm, Op::kVfredusum));
  CHECK(has(sm, Op::kVfmergeVFM));

  auto mm = ops_of(Kernel::kFmatmul, 256);
  CHECK(has(mm, Op::kVfmaccVF));
  CHECK(not has(mm, Op::kVfslide1upVF));
  CHECK(not has(mm, Op::kVfslide1downVF));

  auto fd = ops_of(Kernel::kFdotproduct, 256);
  CHECK(has(fd, Op::kVfredusum));
  CHECK(not has(fd, Op::kVfslide1upVF));
  CHECK(not has(fd, Op::kVfslide1downVF));
}

TEST_CASE("fmatmul elements match an independent fma chain", "[kernels]")
{
  MachineConfig cfg = cfg_with(2, 2); // 4 lanes
  const u64 bpl = 64, N = bpl / 8 * cfg.total_lanes();
  auto p = generate(Kernel::kFmatmul, cfg, bpl);

  Addr al;
  const u64 at = al.take(256 * 64 * 8);
  const u64 b = al.take(256 * N * 8);
  const u64 c = al.take(64 * N * 8);
  auto acol = read_block(p.image, at, 256 * 64); // A[i][k] at k*64+i
  auto bm = read_block(p.image, b, 256 * N);

  for (u64 i = 0; i < 64; ++i)
    for (u64 j = 0; j < N; ++j)
      {
        f64 acc = 0.0;
        for (u64 k = 0; k < 256; ++k)
          acc = sem_fmacc(acc, acol[k * 64 + i], bm[k * N + j]);
        f64 got = p.golden.memory.read_f64(c + (i * N + j) * 8);
        REQUIRE(bits_equal(got, acc));
      }
}

TEST_CASE("jacobi2d elements match the stencil formula", "[kernels]")
{
  MachineConfig cfg = cfg_with(2, 2);
  const u64 bpl = 64, N = bpl / 8 * cfg.total_lanes();
  auto p = generate(Kernel::kJacobi2d, cfg, bpl);

  Addr al;
  const u64 im = al.take(256 * N * 8);
  const u64 outb = al.take(254 * N * 8);
  auto g = read_block(p.image, im, 256 * N);

  for (u64 r = 1; r <= 254; ++r)
    for (u64 j = 0; j < N; ++j)
      {
        f64 cc = g[r * N + j];
        f64 up = g[(r - 1) * N + j];
        f64 dn = g[(r + 1) * N + j];
        f64 lf = j == 0 ? g[r * N] : g[r * N + j - 1];
        f64 rt = j == N - 1 ? g[r * N + N - 1] : g[r * N + j + 1];
        f64 t = sem_fadd(sem_fadd(sem_fadd(cc, up), sem_fadd(dn, lf)), rt);
        f64 want = sem_fmul(t, 0.2);
        f64 got = p.golden.memory.read_f64(outb + ((r - 1) * N + j) * 8);
        REQUIRE(bits_equal(got, want));
      }
}

TEST_CASE("fconv2d elements match the tap accumulation", "[kernels]")
{
  MachineConfig cfg = cfg_with(2, 2);
  const u64 bpl = 128, N = bpl / 8 * cfg.total_lanes(); // one column panel
  const u64 wout = N - 6;
  auto p = generate(Kernel::kFconv2d, cfg, bpl);

  Addr al;
  const u64 im = al.take(256 * N * 8);
  const u64 filt = al.take(49 * 8);
  const u64 outb = al.take(250 * wout * 8);
  auto g = read_block(p.image, im, 256 * N);
  auto f = read_block(p.image, filt, 49);

  for (u64 r = 0; r < 250; ++r)
    for (u64 j = 0; j < wout; ++j)
      {
        f64 acc = sem_fmul(g[r * N + j], f[0]);
        for (u64 dr = 0; dr < 7; ++dr)
          for (u64 dc = 0; dc < 7; ++dc)
            {
              if (dr == 0 and dc == 0)
                continue;
              acc = sem_fmacc(acc, f[dr * 7 + dc], g[(r + dr) * N + j + dc]);
            }
        f64 got = p.golden.memory.read_f64(outb + (r * wout + j) * 8);
        REQUIRE(bits_equal(got, acc));
      }
}

TEST_CASE("fdotproduct matches an ordered product reduction", "[kernels]")
{
  MachineConfig cfg = cfg_with(2, 2); // vstrip at m8 = 512 elements
  const u64 vstrip = u64{cfg.vlen()} / 64 * 8;
  REQUIRE(vstrip == 512);

  auto check = [&](u64 bpl) {
    const u64 N = bpl / 8 * cfg.total_lanes();
    auto p = generate(Kernel::kFdotproduct, cfg, bpl);
    Addr al;
    const u64 a = al.take(N * 8);
    const u64 b = al.take(N * 8);
    const u64 y = al.take(8);
    auto av = read_block(p.image, a, N);
    auto bv = read_block(p.image, b, N);

    const u64 full = N / vstrip, tail = N % vstrip;
    f64 want;
    if (full == 0)
      {
        std::vector<f64> prod(N);
        for (u64 i = 0; i < N; ++i)
          prod[i] = sem_fmul(av[i], bv[i]);
        want = reduce_add(prod, N, cfg, 0.0);
      }
    else
      {
        std::vector<f64> prod(vstrip);
        for (u64 e = 0; e < vstrip; ++e)
          prod[e] = sem_fmul(av[e], bv[e]);
        for (u64 s = 1; s < full; ++s)
          for (u64 e = 0; e < vstrip; ++e)
            prod[e] =
              sem_fmacc(prod[e], av[s * vstrip + e], bv[s * vstrip + e]);
        for (u64 e = 0; e < tail; ++e)
          prod[e] =
            sem_fmacc(prod[e], av[full * vstrip + e], bv[full * vstrip + e]);
        want = reduce_add(prod, vstrip, cfg, 0.0);
      }
    f64 got = p.golden.memory.read_f64(y);
    REQUIRE(bits_equal(got, want));
  };

  check(64);   // single partial strip
  check(1280); // one full strip plus a tail
  check(2048); // two full strips
}

TEST_CASE("exp elements match the range-reduced polynomial", "[kernels]")
{
  MachineConfig cfg = cfg_with(2, 2); // vstrip at m1 = 64 elements
  for (u64 bpl : {64ull, 192ull, 256ull}) // partial, full+tail, two strips
    {
      const u64 N = bpl / 8 * cfg.total_lanes();
      auto p = generate(Kernel::kExp, cfg, bpl);
      Addr al;
      const u64 xb = al.take(N * 8);
      const u64 yb = al.take(N * 8);
      auto xv = read_block(p.image, xb, N);
      for (u64 i = 0; i < N; ++i)
        {
          f64 got = p.golden.memory.read_f64(yb + 8 * i);
          REQUIRE(bits_equal(got, exp_oracle(xv[i])));
        }
    }
}

TEST_CASE("exp clamps overflow and underflow", "[kernels]")
{
  CHECK(exp_oracle(710.0) == std::numeric_limits<f64>::infinity());
  CHECK(exp_oracle(-746.0) == 0.0);
  CHECK(bits_equal(exp_oracle(0.0), 1.0));
  // interior accuracy sanity: the degree-10 expansion truncates at about
  // 1e-13 relative error over the reduced range
  for (f64 x : {-0.9, -0.3, 0.0, 0.4, 0.97})
    CHECK(std::abs(exp_oracle(x) - std::exp(x)) <= 1e-12 * std::exp(x));
}

TEST_CASE("softmax rows match the three-pass oracle", "[kernels]")
{
  MachineConfig cfg = cfg_with(2, 2);
  const u64 vstrip = u64{cfg.vlen()} / 64;
  REQUIRE(vstrip == 64);
  for (u64 bpl : {64ull, 256ull}) // one strip, two strips
    {
      const u64 N = bpl / 8 * cfg.total_lanes();
      const u64 strips = N <= vstrip ? 1 : N / vstrip;
      const u64 svl = N <= vstrip ? N : vstrip;
      auto p = generate(Kernel::kSoftmax, cfg, bpl);
      Addr al;
      const u64 xb = al.take(64 * N * 8);
      const u64 yb = al.take(64 * N * 8);

      for (u64 r = 0; r < 64; ++r)
        {
          auto row = read_block(p.image, xb + r * N * 8, N);
          f64 m = -std::numeric_limits<f64>::infinity();
          for (u64 s = 0; s < strips; ++s)
            {
              std::vector<f64> strip(row.begin() + s * svl,
                                     row.begin() + (s + 1) * svl);
              m = reduce_max(strip, svl, cfg, m);
            }
          std::vector<f64> ex(N);
          std::vector<f64> sums(svl, 0.0);
          for (u64 s = 0; s < strips; ++s)
            for (u64 e = 0; e < svl; ++e)
              {
                f64 v = exp_oracle(sem_fsub(row[s * svl + e], m));
                ex[s * svl + e] = v;
                sums[e] = s == 0 ? v : sem_fadd(sums[e], v);
              }
          f64 total = reduce_add(sums, svl, cfg, 0.0);
          for (u64 i = 0; i < N; ++i)
            {
              f64 got = p.golden.memory.read_f64(yb + (r * N + i) * 8);
              REQUIRE(bits_equal(got, sem_fdiv(ex[i], total)));
            }
        }
    }
}

TEST_CASE("timed engine reproduces the reference memory", "[kernels]")
{
  for (auto [C, L, bpl] : {std::tuple<unsigned, unsigned, u64>{2, 2, 64},
                           {2, 4, 128}})
    {
      MachineConfig cfg = cfg_with(C, L);
      for (Kernel k : kAllKernels)
        {
          INFO(kernel_name(k) << " C=" << C << " L=" << L << " bpl=" << bpl);
          auto p = generate(k, cfg, bpl);
          Engine eng(cfg, p.image);
          eng.run(p.program);
          auto res = std::move(eng).result();
          REQUIRE(res.memory.bytes() == p.golden.memory.bytes());
          CHECK(res.stats.flops == p.flops);
          CHECK(res.executed == p.golden.executed);
          CHECK(res.stats.total_cycles > 0);
        }
    }
}
