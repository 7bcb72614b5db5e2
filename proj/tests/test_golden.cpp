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

#include <cmath>
#include <limits>

#include <araxl/golden.hpp>

using namespace araxl;

namespace
{

MachineConfig default_cfg()
{
  MachineConfig cfg; // 2 clusters x 4 lanes, vlen 8192
  return cfg;
}

GoldenResult run_text(const std::string& text, MemoryImage image,
                      MachineConfig cfg = default_cfg())
{
  return golden_execute(parse_program(text), cfg, std::move(image));
}

} // namespace

TEST_CASE("golden: f64 dot product of short vectors", "[golden]")
{
  MemoryImage img(0, 1 << 16);
  const f64 a[3] = {1, 2, 3};
  const f64 b[3] = {4, 5, 6};
  for (int i = 0; i < 3; ++i)
    {
      img.write_f64(0x1000 + 8 * i, a[i]);
      img.write_f64(0x2000 + 8 * i, b[i]);
    }
  auto r = run_text(R"(
    li a0, 0x1000
    li a1, 0x2000
    li a2, 0x3000
    li t0, 3
    vsetvli t1, t0, e64, m1
    vle64.v v1, (a0)
    vle64.v v2, (a1)
    vfmul.vv v3, v1, v2
    fli.d ft0, 0
    vfmv.s.f v4, ft0
    vfredusum.vs v5, v3, v4
    vfmv.f.s ft1, v5
    fsd ft1, 0(a2)
  )",
                    std::move(img));
  CHECK(r.memory.read_f64(0x3000) == 32.0);
  CHECK(r.fregs[1] == 32.0); // ft1
  // 3 multiplies + 3 reduction combines (2 tree joins + seed join)
  CHECK(r.flops == 6);
}

TEST_CASE("golden: vfslide1down shifts in the scalar at the tail", "[golden]")
{
  MemoryImage img(0, 1 << 16);
  const f64 v[4] = {1.5, 2.5, 3.5, 4.5};
  for (int i = 0; i < 4; ++i)
    img.write_f64(0x1000 + 8 * i, v[i]);
  auto r = run_text(R"(
    li a0, 0x1000
    li a1, 0x2000
    li t0, 4
    vsetvli t1, t0, e64, m1
    vle64.v v1, (a0)
    fli.d ft0, 9.25
    vfslide1down.vf v2, v1, ft0
    vse64.v v2, (a1)
  )",
                    std::move(img));
  CHECK(r.memory.read_f64(0x2000) == 2.5);
  CHECK(r.memory.read_f64(0x2008) == 3.5);
  CHECK(r.memory.read_f64(0x2010) == 4.5);
  CHECK(r.memory.read_f64(0x2018) == 9.25);
}

TEST_CASE("golden: vfslide1up shifts in the scalar at the head", "[golden]")
{
  MemoryImage img(0, 1 << 16);
  for (int i = 0; i < 4; ++i)
    img.write_f64(0x1000 + 8 * i, 1.0 + i);
  auto r = run_text(R"(
    li a0, 0x1000
    li a1, 0x2000
    li t0, 4
    vsetvli t1, t0, e64, m1
    vle64.v v1, (a0)
    fli.d ft0, -7.0
    vfslide1up.vf v2, v1, ft0
    vse64.v v2, (a1)
  )",
                    std::move(img));
  CHECK(r.memory.read_f64(0x2000) == -7.0);
  CHECK(r.memory.read_f64(0x2008) == 1.0);
  CHECK(r.memory.read_f64(0x2010) == 2.0);
  CHECK(r.memory.read_f64(0x2018) == 3.0);
}

TEST_CASE("golden: 4x4 matmul with identity A copies B", "[golden]")
{
  MemoryImage img(0, 1 << 16);
  Rng rng(kDataSeed);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      {
        img.write_f64(0x1000 + 8 * (4 * i + j), i == j ? 1.0 : 0.0);
        img.write_f64(0x2000 + 8 * (4 * i + j), rng.signed_unit());
      }
  auto r = run_text(R"(
    li a0, 0x1000      # A
    li a1, 0x2000      # B
    li a2, 0x3000      # C
    li t0, 4
    vsetvli t1, t0, e64, m1
    row:
    fli.d ft1, 0
    vfmv.v.f v8, ft1
    inner:
    fld ft0, 0(a0)
    vle64.v v1, (a1)
    vfmacc.vf v8, ft0, v1
    addi a0, a0, 8
    addi a1, a1, 32
    .loop inner 4
    vse64.v v8, (a2)
    addi a2, a2, 32
    addi a1, a1, -128
    .loop row 4
  )",
                    std::move(img));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      {
        u64 got = r.memory.read_u64(0x3000 + 8 * (4 * i + j));
        u64 want = r.memory.read_u64(0x2000 + 8 * (4 * i + j));
        REQUIRE(got == want); // bit-exact, not approximate
      }
  CHECK(r.flops == 2 * 4 * 4 * 4); // one FMA per (i,j,k)
}

TEST_CASE("golden: vsetvli forms", "[golden]")
{
  MachineConfig cfg = default_cfg(); // vlen 8192
  GoldenModel vm(cfg, MemoryImage(0, 4096));

  // plain clamp
  vm.step(decode("li t0, 9000"));
  vm.step(decode("vsetvli t1, t0, e64, m1"));
  CHECK(vm.vl() == 128);
  CHECK(vm.xreg(6) == 128); // t1 = x6

  // avl below VLMAX
  vm.step(decode("li t0, 100"));
  vm.step(decode("vsetvli t1, t0, e64, m1"));
  CHECK(vm.vl() == 100);

  // rs1 = x0, rd != x0 selects VLMAX
  vm.step(decode("vsetvli t2, zero, e64, m2"));
  CHECK(vm.vl() == 256);
  CHECK(vm.xreg(7) == 256);

  // vtype-only form preserves vl
  vm.step(decode("li t0, 60"));
  vm.step(decode("vsetvli t1, t0, e64, m1"));
  vm.step(decode("vsetvli zero, zero, e64, m2"));
  CHECK(vm.vl() == 60);
  CHECK(vm.lmul() == 2);
}

TEST_CASE("golden: tail elements are undisturbed", "[golden]")
{
  MemoryImage img(0, 1 << 16);
  for (int i = 0; i < 8; ++i)
    img.write_f64(0x1000 + 8 * i, 10.0 + i);
  auto r = run_text(R"(
    li a0, 0x1000
    li a1, 0x2000
    li t0, 8
    vsetvli t1, t0, e64, m1
    vle64.v v1, (a0)
    vmv.v.v v2, v1
    li t0, 4
    vsetvli t1, t0, e64, m1
    fli.d ft0, 100.0
    vfadd.vf v2, v1, ft0
    li t0, 8
    vsetvli t1, t0, e64, m1
    vse64.v v2, (a1)
  )",
                    std::move(img));
  for (int i = 0; i < 8; ++i)
    {
      f64 want = i < 4 ? 110.0 + i : 10.0 + i;
      CHECK(r.memory.read_f64(0x2000 + 8 * i) == want);
    }
}

TEST_CASE("golden: masked ops leave inactive elements undisturbed",
          "[golden]")
{
  MemoryImage img(0, 1 << 16);
  for (int i = 0; i < 8; ++i)
    img.write_f64(0x1000 + 8 * i, static_cast<f64>(i));
  MachineConfig cfg = default_cfg();
  GoldenModel vm(cfg, std::move(img));
  vm.step(decode("li a0, 0x1000"));
  vm.step(decode("li t0, 8"));
  vm.step(decode("vsetvli t1, t0, e64, m1"));
  vm.step(decode("vle64.v v1, (a0)"));
  vm.step(decode("fli.d ft0, 4.0"));
  vm.step(decode("vmflt.vf v0, v1, ft0")); // elements 0..3 active
  CHECK(vm.vreg(0)[0] == 0x0f);
  u64 flops_before = vm.flops();
  vm.step(decode("vmv.v.v v2, v1"));
  vm.step(decode("fli.d ft1, 100.0"));
  vm.step(decode("vfadd.vf v2, v1, ft1, v0.t"));
  CHECK(vm.flops() - flops_before == 4); // only active elements count
  auto elem = [&](unsigned reg, int i) {
    u64 bits = 0;
    for (int b = 0; b < 8; ++b)
      bits |= static_cast<u64>(vm.vreg(reg)[8 * i + b]) << 8 * b;
    return bits_f64(bits);
  };
  for (int i = 0; i < 8; ++i)
    {
      f64 want = i < 4 ? 100.0 + i : static_cast<f64>(i);
      CHECK(elem(2, i) == want);
    }

  // compare under mask: inactive destination bits are undisturbed
  vm.step(decode("fli.d ft2, 100.0"));
  vm.step(decode("vmfge.vf v3, v1, ft2"));        // all zero
  vm.step(decode("fli.d ft3, -1.0"));
  vm.step(decode("vmfgt.vf v3, v1, ft3, v0.t"));  // writes bits 0..3 only
  CHECK(vm.vreg(3)[0] == 0x0f);

  // vfmerge picks the scalar where the mask is set
  vm.step(decode("fli.d ft4, -5.0"));
  vm.step(decode("vfmerge.vfm v4, v1, ft4, v0"));
  for (int i = 0; i < 8; ++i)
    CHECK(elem(4, i) == (i < 4 ? -5.0 : static_cast<f64>(i)));
}

TEST_CASE("golden: reduction order is the pinned machine tree", "[golden]")
{
  // vl=16 over 2 clusters x 4 lanes: lane (c,l) folds slots {c*4+l, c*4+l+8}
  // ascending, lanes then clusters join as binary trees, seed joins last.
  MachineConfig cfg = default_cfg();
  MemoryImage img(0, 1 << 16);
  f64 v[16];
  Rng rng(0x5eed);
  for (int i = 0; i < 16; ++i)
    {
      v[i] = (1.0 + rng.unit()) * std::ldexp(1.0, (i % 5) * 23 - 46);
      img.write_f64(0x1000 + 8 * i, v[i]);
    }
  const f64 seed = 1e-3;
  GoldenModel vm(cfg, std::move(img));
  vm.step(decode("li a0, 0x1000"));
  vm.step(decode("li t0, 16"));
  vm.step(decode("vsetvli t1, t0, e64, m1"));
  vm.step(decode("vle64.v v1, (a0)"));
  vm.step(decode("fli.d ft0, 1e-3"));
  vm.step(decode("vfmv.s.f v2, ft0"));
  vm.step(decode("vfredusum.vs v3, v1, v2"));

  auto lane = [&](int c, int l) { return v[c * 4 + l] + v[c * 4 + l + 8]; };
  auto cl = [&](int c) {
    return (lane(c, 0) + lane(c, 1)) + (lane(c, 2) + lane(c, 3));
  };
  f64 expect = (cl(0) + cl(1)) + seed;
  u64 got = 0;
  for (int b = 0; b < 8; ++b)
    got |= static_cast<u64>(vm.vreg(3)[b]) << 8 * b;
  REQUIRE(got == f64_bits(expect));

  // the pinned order is not plain left-to-right accumulation
  f64 naive = seed;
  for (int i = 0; i < 16; ++i)
    naive += v[i];
  CHECK(f64_bits(naive) != f64_bits(expect));
}

TEST_CASE("golden: vfredmax ignores NaN and prefers +0 over -0", "[golden]")
{
  MemoryImage img(0, 1 << 16);
  const f64 vals[4] = {-3.0, std::nan(""), -0.0, 0.0};
  for (int i = 0; i < 4; ++i)
    img.write_f64(0x1000 + 8 * i, vals[i]);
  auto r = run_text(R"(
    li a0, 0x1000
    li a1, 0x2000
    li t0, 4
    vsetvli t1, t0, e64, m1
    vle64.v v1, (a0)
    fli.d ft0, -inf
    vfmv.s.f v2, ft0
    vfredmax.vs v3, v1, v2
    vfmv.f.s ft1, v3
    fsd ft1, 0(a1)
  )",
                    std::move(img));
  // +0.0 exactly: max(-3, NaN, -0, +0, seed -inf), NaN losing and +0 > -0
  CHECK(r.memory.read_u64(0x2000) == f64_bits(0.0));
  CHECK(r.memory.read_f64(0x2000) == 0.0);
  CHECK(not std::signbit(r.memory.read_f64(0x2000)));
}

TEST_CASE("golden: register-offset slides", "[golden]")
{
  MemoryImage img(0, 1 << 16);
  for (u64 i = 0; i < 128; ++i)
    img.write_u64(0x1000 + 8 * i, 0xab0000 + i);
  auto r = run_text(R"(
    li a0, 0x1000
    li a1, 0x2000
    li a2, 0x6000
    li t0, 1000
    vsetvli t1, t0, e64, m1   # vl = VLMAX = 128
    vle64.v v1, (a0)
    vmv.v.v v2, v1
    li t2, 2
    vslidedown.vx v2, v1, t2
    vse64.v v2, (a1)
    vmv.v.v v3, v1
    vslideup.vx v3, v1, t2
    vse64.v v3, (a2)
  )",
                    std::move(img));
  for (u64 i = 0; i < 128; ++i)
    {
      u64 down = r.memory.read_u64(0x2000 + 8 * i);
      CHECK(down == (i + 2 < 128 ? 0xab0000 + i + 2 : 0));
      u64 up = r.memory.read_u64(0x6000 + 8 * i);
      CHECK(up == (i < 2 ? 0xab0000 + i : 0xab0000 + i - 2));
    }
}

TEST_CASE("golden: strided load and store", "[golden]")
{
  MemoryImage img(0, 1 << 16);
  for (int i = 0; i < 32; ++i)
    img.write_f64(0x1000 + 8 * i, 1000.0 + i);
  auto r = run_text(R"(
    li a0, 0x1000
    li a1, 0x2000
    li t2, 32          # byte stride = every 4th f64
    li t0, 8
    vsetvli t1, t0, e64, m1
    vlse64.v v1, (a0), t2
    vsse64.v v1, (a1), t2
    vse64.v v1, (a1)   # also packed, over the first 8 slots
  )",
                    std::move(img));
  for (int i = 0; i < 8; ++i)
    CHECK(r.memory.read_f64(0x2000 + 8 * i) == 1000.0 + 4 * i);
  // strided store wrote the same values at stride 32 where not overwritten
  for (int i = 2; i < 8; ++i)
    CHECK(r.memory.read_f64(0x2000 + 32 * i) == 1000.0 + 4 * i);
}

TEST_CASE("golden: integer ops and conversions", "[golden]")
{
  MemoryImage img(0, 1 << 16);
  const f64 xs[4] = {2.5, 3.5, -2.5, 1e300};
  for (int i = 0; i < 4; ++i)
    img.write_f64(0x1000 + 8 * i, xs[i]);
  auto r = run_text(R"(
    li a0, 0x1000
    li a1, 0x2000
    li a2, 0x3000
    li t0, 4
    vsetvli t1, t0, e64, m1
    vle64.v v1, (a0)
    vfcvt.x.f.v v2, v1
    vse64.v v2, (a1)
    li t2, 1023
    vadd.vx v3, v2, t2
    vsll.vi v4, v3, 52
    vse64.v v4, (a2)
  )",
                    std::move(img));
  CHECK(static_cast<i64>(r.memory.read_u64(0x2000)) == 2);  // RNE ties-to-even
  CHECK(static_cast<i64>(r.memory.read_u64(0x2008)) == 4);
  CHECK(static_cast<i64>(r.memory.read_u64(0x2010)) == -2);
  CHECK(static_cast<i64>(r.memory.read_u64(0x2018)) ==
        std::numeric_limits<i64>::max()); // saturated
  // exponent-assembly trick: (n + 1023) << 52 is the f64 2^n
  CHECK(r.memory.read_f64(0x3000) == std::ldexp(1.0, 2));
  CHECK(r.memory.read_f64(0x3008) == std::ldexp(1.0, 4));
}

TEST_CASE("golden: vfcvt.f.x round trip and integer compares", "[golden]")
{
  MemoryImage img(0, 1 << 16);
  for (int i = 0; i < 8; ++i)
    img.write_u64(0x1000 + 8 * i, static_cast<u64>(i % 3));
  MachineConfig cfg = default_cfg();
  GoldenModel vm(cfg, std::move(img));
  vm.step(decode("li a0, 0x1000"));
  vm.step(decode("li t0, 8"));
  vm.step(decode("vsetvli t1, t0, e64, m1"));
  vm.step(decode("vle64.v v1, (a0)"));
  vm.step(decode("vfcvt.f.x.v v2, v1"));
  u64 bits = 0;
  for (int b = 0; b < 8; ++b)
    bits |= static_cast<u64>(vm.vreg(2)[8 + b]) << 8 * b;
  CHECK(bits_f64(bits) == 1.0);
  vm.step(decode("li t2, 1"));
  vm.step(decode("vmseq.vx v0, v1, t2")); // i%3==1 at i=1,4,7
  CHECK(vm.vreg(0)[0] == 0b10010010);
  vm.step(decode("vmsne.vx v5, v1, t2"));
  CHECK(vm.vreg(5)[0] == 0b01101101);
}

TEST_CASE("golden: scalar stub semantics", "[golden]")
{
  MemoryImage img(0, 4096);
  img.write_f64(0x100, 6.5);
  auto r = run_text(R"(
    li zero, 77       # writes to x0 are ignored
    li t0, 5
    addi t1, t0, -2
    add t2, t0, t1
    sub t3, t0, t1
    slli t4, t1, 4
    addi t5, zero, 0
    li a0, 0x100
    fld ft0, 0(a0)
    fsd ft0, 8(a0)
  )",
                    std::move(img));
  CHECK(r.xregs[0] == 0);
  CHECK(r.xregs[5] == 5);   // t0
  CHECK(r.xregs[6] == 3);   // t1
  CHECK(r.xregs[7] == 8);   // t2
  CHECK(r.xregs[28] == 2);  // t3
  CHECK(r.xregs[29] == 48); // t4
  CHECK(r.xregs[30] == 0);  // t5
  CHECK(r.memory.read_f64(0x108) == 6.5);
  CHECK(r.executed == 10);
  CHECK(r.flops == 0);
}

TEST_CASE("golden: nested loops re-arm inner counters", "[golden]")
{
  MemoryImage img(0, 4096);
  auto r = run_text(R"(
    li t0, 0
    outer:
    inner:
    addi t0, t0, 1
    .loop inner 3
    addi t0, t0, 100
    .loop outer 4
  )",
                    std::move(img));
  CHECK(r.xregs[5] == 4 * 3 + 4 * 100);
}

TEST_CASE("golden: out-of-bounds access faults with the address", "[golden]")
{
  MemoryImage img(0, 4096);
  auto prog = parse_program(R"(
    li a0, 4000
    li t0, 32
    vsetvli t1, t0, e64, m1
    vle64.v v1, (a0)
  )");
  REQUIRE_THROWS_AS(golden_execute(prog, default_cfg(), std::move(img)),
                    MemFault);
}

TEST_CASE("golden: empty program leaves everything untouched", "[golden]")
{
  MemoryImage img(0, 4096);
  img.write_u64(0, 0x1234);
  auto r = run_text("# nothing but a comment\n", std::move(img));
  CHECK(r.executed == 0);
  CHECK(r.flops == 0);
  CHECK(r.memory.read_u64(0) == 0x1234);
}

TEST_CASE("golden: data segments are applied before execution", "[golden]")
{
  MemoryImage img(0, 4096);
  auto r = run_text(R"(
    .data 0x80 0000000000001040
    li a0, 0x80
    fld ft0, 0(a0)
  )",
                    std::move(img));
  // bytes are literal little-endian memory contents: 0x4010000000000000
  CHECK(r.fregs[0] == 4.0);
}
