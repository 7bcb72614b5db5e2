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

#include <cmath>

#include <catch_amalgamated.hpp>

#include "araxl/isa.hpp"

using namespace araxl;

TEST_CASE("vsetvl grants min(avl, VLMAX)", "[isa]")
{
  CHECK(vsetvl(10, 64, 1, 4096) == 10);
  CHECK(vsetvl(100, 64, 1, 4096) == 64);
  CHECK(vsetvl(9000, 64, 8, 65536) == 8192);
  CHECK(vsetvl(0, 64, 1, 4096) == 0);
  CHECK(vsetvl(8192, 64, 8, 65536) == 8192);
}

TEST_CASE("vsetvl rejects illegal vtypes", "[isa]")
{
  CHECK_THROWS_AS(vsetvl(1, 48, 1, 4096), ConfigError);
  CHECK_THROWS_AS(vsetvl(1, 64, 3, 4096), ConfigError);
  CHECK_THROWS_AS(vsetvl(1, 64, 1, 131072), ConfigError);
}

TEST_CASE("vsetvl is monotone in avl and bounded by VLMAX", "[isa][property]")
{
  Rng rng(7);
  for (unsigned sew : {8u, 16u, 32u, 64u})
    for (unsigned lmul : {1u, 2u, 4u, 8u})
      for (unsigned vlen : {64u, 1024u, 8192u, 65536u})
        {
          u64 vm = vlmax(vlen, sew, lmul);
          u64 prev = 0;
          for (u64 avl = 0; avl < 3 * vm; avl += 1 + rng.next() % 17)
            {
              u64 vl = vsetvl(avl, sew, lmul, vlen);
              CHECK(vl <= vm);
              CHECK(vl <= avl);
              CHECK(vl >= prev * (vl < vm)); // monotone until saturation
              prev = vl;
            }
          CHECK(vsetvl(vm + 1, sew, lmul, vlen) == vm);
        }
}

TEST_CASE("flop weights follow operation class", "[isa]")
{
  CHECK(flops_per_element(Op::kVfmaccVV) == 2);
  CHECK(flops_per_element(Op::kVfmaccVF) == 2);
  CHECK(flops_per_element(Op::kVfmaddVV) == 2);
  CHECK(flops_per_element(Op::kVfnmsacVF) == 2);
  CHECK(flops_per_element(Op::kVfaddVV) == 1);
  CHECK(flops_per_element(Op::kVfmulVF) == 1);
  CHECK(flops_per_element(Op::kVfdivVV) == 1);
  CHECK(flops_per_element(Op::kVfredusum) == 1);
  CHECK(flops_per_element(Op::kVfredmax) == 1);
  CHECK(flops_per_element(Op::kVmfltVF) == 0);
  CHECK(flops_per_element(Op::kVmvVV) == 0);
  CHECK(flops_per_element(Op::kVfcvtXF) == 0);
  CHECK(flops_per_element(Op::kVaddVX) == 0);
  CHECK(flops_per_element(Op::kVle) == 0);
}

TEST_CASE("vector/scalar op partition", "[isa]")
{
  CHECK(is_vector_op(Op::kVle));
  CHECK(is_vector_op(Op::kVsetvli));
  CHECK(is_vector_op(Op::kVfmvFS));
  CHECK_FALSE(is_vector_op(Op::kLi));
  CHECK_FALSE(is_vector_op(Op::kFld));
  CHECK_FALSE(is_vector_op(Op::kLoop));
  CHECK(is_vector_memory_op(Op::kVlse));
  CHECK_FALSE(is_vector_memory_op(Op::kVfaddVV));
  CHECK(is_reduction_op(Op::kVfredmax));
  CHECK(is_slide_op(Op::kVslidedownVX));
  CHECK(is_compare_op(Op::kVmseqVX));
}

TEST_CASE("fp max follows IEEE maximumNumber", "[isa]")
{
  f64 nan = std::numeric_limits<f64>::quiet_NaN();
  CHECK(sem_fmax(1.0, 2.0) == 2.0);
  CHECK(sem_fmax(2.0, 1.0) == 2.0);
  CHECK(sem_fmax(nan, 3.0) == 3.0);
  CHECK(sem_fmax(3.0, nan) == 3.0);
  CHECK(std::isnan(sem_fmax(nan, nan)));
  CHECK_FALSE(std::signbit(sem_fmax(-0.0, 0.0)));
  CHECK_FALSE(std::signbit(sem_fmax(0.0, -0.0)));
  CHECK(sem_fmax(-1.0, -2.0) == -1.0);
}

TEST_CASE("float-to-int conversion rounds to nearest even and saturates",
          "[isa]")
{
  CHECK(sem_fcvt_x(2.5) == 2);
  CHECK(sem_fcvt_x(3.5) == 4);
  CHECK(sem_fcvt_x(-2.5) == -2);
  CHECK(sem_fcvt_x(0.49999999999999994) == 0);
  CHECK(sem_fcvt_x(1e300) == std::numeric_limits<i64>::max());
  CHECK(sem_fcvt_x(-1e300) == std::numeric_limits<i64>::min());
  CHECK(sem_fcvt_x(std::numeric_limits<f64>::quiet_NaN()) ==
        std::numeric_limits<i64>::max());
  CHECK(sem_fcvt_x(0x1p62) == i64{1} << 62);
  CHECK(sem_fcvt_f(i64{1} << 52) == 0x1p52);
  CHECK(sem_fcvt_f(-3) == -3.0);
}

TEST_CASE("integer helpers wrap modulo 2^64", "[isa]")
{
  CHECK(sem_add(std::numeric_limits<i64>::max(), 1) ==
        std::numeric_limits<i64>::min());
  CHECK(sem_add(-1, 1) == 0);
  CHECK(sem_sll(1, 63) == std::numeric_limits<i64>::min());
  CHECK(sem_sll(3, 2) == 12);
}

TEST_CASE("fma semantics fuse the rounding", "[isa]")
{
  // (2^27+1)^2 = 2^54 + 2^28 + 1; the lone multiply rounds the +1 away
  // (ties-to-even), so only a fused multiply-add can recover it.
  volatile f64 a = 0x1p27 + 1.0;
  f64 c = -(0x1p54 + 0x1p28);
  CHECK(a * a == 0x1p54 + 0x1p28);
  CHECK(sem_fmacc(c, a, a) == 1.0);
}
