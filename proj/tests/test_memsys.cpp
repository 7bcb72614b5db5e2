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

#include <cstdio>
#include <numeric>

#include <catch_amalgamated.hpp>

#include "araxl/memsys.hpp"

using namespace araxl;

TEST_CASE("align plan decomposes the offset into distinct shifts", "[memsys]")
{
  CHECK(align_plan(0, 64).empty());
  CHECK(align_plan(3, 64) == std::vector<unsigned>{2, 1});
  CHECK(align_plan(37, 64) == std::vector<unsigned>{32, 4, 1});
  CHECK(align_plan(63, 64) == std::vector<unsigned>{32, 16, 8, 4, 2, 1});
  CHECK_THROWS_AS(align_plan(64, 64), ConfigError);
  CHECK_THROWS_AS(align_plan(0, 48), ConfigError);
}

TEST_CASE("align plan equals one barrel shift", "[memsys][property]")
{
  Rng rng(23);
  for (int round = 0; round < 10000; ++round)
    {
      unsigned w = 8u << rng.next() % 7; // 8..512
      unsigned off = static_cast<unsigned>(rng.next() % w);
      auto shifts = align_plan(off, w);
      CHECK(shifts.size() <= ilog2(w));
      unsigned total = 0, prev = w;
      for (unsigned s : shifts)
        {
          CHECK(is_pow2(s));
          CHECK(s < prev); // strictly descending ⇒ distinct
          prev = s;
          total += s;
        }
      CHECK(total == off);
    }
}

TEST_CASE("addrgen splits at bus windows and pages", "[memsys]")
{
  auto beats = addrgen_split(0x1000, 256, 64);
  REQUIRE(beats.size() == 4);
  for (unsigned i = 0; i < 4; ++i)
    CHECK(beats[i] == Beat{0x1000 + 64ull * i, 64});

  beats = addrgen_split(0x1003, 256, 64);
  REQUIRE(beats.size() == 5);
  CHECK(beats[0] == Beat{0x1003, 61});
  CHECK(beats[1] == Beat{0x1040, 64});
  CHECK(beats[4] == Beat{0x1100, 3});

  beats = addrgen_split(0x1FC0, 128, 64);
  REQUIRE(beats.size() == 2);
  CHECK(beats[0] == Beat{0x1FC0, 64});
  CHECK(beats[1] == Beat{0x2000, 64});

  CHECK(addrgen_split(0x42, 0, 64).empty());
}

TEST_CASE("addrgen output partitions the byte range", "[memsys][property]")
{
  Rng rng(29);
  for (int round = 0; round < 10000; ++round)
    {
      unsigned w = 16u << rng.next() % 6;
      u64 base = rng.next() % 0x10000;
      u64 len = 1 + rng.next() % 2048;
      u64 next = base;
      for (const Beat& b : addrgen_split(base, len, w))
        {
          CHECK(b.addr == next); // in order, no gap, no overlap
          CHECK(b.len >= 1);
          CHECK(b.addr / w == (b.addr + b.len - 1) / w);
          CHECK(b.addr / 4096 == (b.addr + b.len - 1) / 4096);
          next = b.addr + b.len;
        }
      CHECK(next == base + len);
    }
}

TEST_CASE("glsu latency grows two cycles per cut", "[memsys]")
{
  CHECK(glsu_pipe_depth(64, 2) == 8); // 6 align + 1 addrgen + 1 shuffle
  CHECK(glsu_pipe_depth(512, 16) == 14);
  CHECK(glsu_latency(MemDir::kLoad, 0, 64, 2) == 8);
  CHECK(glsu_latency(MemDir::kLoad, 4, 64, 2) -
          glsu_latency(MemDir::kLoad, 0, 64, 2) ==
        8);
  CHECK(glsu_latency(MemDir::kStore, 1, 64, 2) -
          glsu_latency(MemDir::kStore, 0, 64, 2) ==
        2);
}

TEST_CASE("memory service pipelines beats at one per cycle", "[memsys]")
{
  // One beat: memory latency plus pipeline depth.
  CHECK(memory_service({{0, true}}, 20, 10) == std::vector<u64>{30});

  // Four back-to-back beats stream out on consecutive cycles.
  std::vector<BeatRequest> four(4, {0, true});
  CHECK(memory_service(four, 20, 10) == std::vector<u64>{30, 31, 32, 33});

  // A beat that becomes ready later is granted then.
  CHECK(memory_service({{5, true}}, 20, 10) == std::vector<u64>{35});
}

TEST_CASE("memory service alternates loads and stores under contention",
          "[memsys]")
{
  std::vector<BeatRequest> beats = {{0, true},  {0, true},  {0, true},
                                    {0, false}, {0, false}, {0, false}};
  auto done = memory_service(beats, 0, 0);
  // Grant order L S L S L S → loads at 0,2,4; stores at 1,3,5.
  CHECK(done == std::vector<u64>{0, 2, 4, 1, 3, 5});
}

TEST_CASE("memory port mirrors the pure arbitration", "[memsys]")
{
  MemoryPort port;
  port.request(true, 0, 100);
  port.request(true, 0, 101);
  port.request(false, 0, 200);
  std::vector<u64> order;
  for (u64 cycle = 0; not port.idle(); ++cycle)
    if (auto g = port.grant(cycle))
      order.push_back(g->tag);
  CHECK(order == std::vector<u64>{100, 200, 101});
  CHECK_FALSE(port.grant(99).has_value());
}

TEST_CASE("memory image bounds, accessors and persistence", "[memsys]")
{
  MemoryImage img(0x1000, 4096);
  CHECK(img.base() == 0x1000);
  CHECK(img.size() == 4096);

  img.write_u64(0x1008, 0x1122334455667788ull);
  CHECK(img.read_u64(0x1008) == 0x1122334455667788ull);
  CHECK(img.at(0x1008, 1)[0] == 0x88); // little-endian
  img.write_f64(0x1010, -2.5);
  CHECK(img.read_f64(0x1010) == -2.5);

  CHECK_THROWS_AS(img.read_u64(0xFF8), MemFault);
  CHECK_THROWS_AS(img.read_u64(0x1FFC), MemFault);
  try
    {
      img.check(0x2000, 1);
      FAIL("expected MemFault");
    }
  catch (const MemFault& e)
    {
      CHECK(e.addr() == 0x2000);
    }

  const char* path = "memsys_roundtrip.img";
  img.save(path);
  MemoryImage back = MemoryImage::load(path);
  CHECK(back.base() == img.base());
  CHECK(back.bytes() == img.bytes());
  std::remove(path);

  std::FILE* f = std::fopen(path, "wb");
  std::fwrite("notmagic", 1, 8, f);
  std::fclose(f);
  CHECK_THROWS_AS(MemoryImage::load(path), Error);
  std::remove(path);

  CHECK_THROWS_AS(MemoryImage(0, (16ull << 20) + 1), ConfigError);
}
