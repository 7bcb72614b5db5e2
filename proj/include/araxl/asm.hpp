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

#include <charconv>
#include <cstdlib>
#include <string>
#include <unordered_map>
#include <vector>

#include "isa.hpp"

namespace araxl
{

/// Textual program format: one instruction per line, `#` comments,
/// labels `name:`, directives `.data addr bytes-hex` and
/// `.loop label count`. Mnemonics follow RVV assembly style.

struct DataSegment
{
  u64 addr = 0;
  std::vector<u8> bytes;

  bool operator==(const DataSegment&) const = default;
};

struct Program
{
  std::vector<Instr> code;
  std::vector<DataSegment> data;
  std::vector<std::pair<u32, std::string>> labels; ///< (code index, name)
};

namespace asmdetail
{

inline const char* kIntRegNames[32] = {
  "zero", "ra", "sp", "gp", "tp", "t0", "t1", "t2",
  "s0", "s1", "a0", "a1", "a2", "a3", "a4", "a5",
  "a6", "a7", "s2", "s3", "s4", "s5", "s6", "s7",
  "s8", "s9", "s10", "s11", "t3", "t4", "t5", "t6"};

inline const char* kFpRegNames[32] = {
  "ft0", "ft1", "ft2", "ft3", "ft4", "ft5", "ft6", "ft7",
  "fs0", "fs1", "fa0", "fa1", "fa2", "fa3", "fa4", "fa5",
  "fa6", "fa7", "fs2", "fs3", "fs4", "fs5", "fs6", "fs7",
  "fs8", "fs9", "fs10", "fs11", "ft8", "ft9", "ft10", "ft11"};

inline std::string trim(const std::string& s)
{
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos)
    return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

/// Strip a trailing `# ...` comment and surrounding whitespace.
inline std::string strip_comment(const std::string& s)
{
  size_t h = s.find('#');
  return trim(h == std::string::npos ? s : s.substr(0, h));
}

/// Split " v8, f0, v16 " into {"v8","f0","v16"}.
inline std::vector<std::string> split_operands(const std::string& s)
{
  std::vector<std::string> out;
  size_t pos = 0;
  while (pos <= s.size())
    {
      size_t c = s.find(',', pos);
      std::string tok = trim(c == std::string::npos ? s.substr(pos)
                                                    : s.substr(pos, c - pos));
      if (not tok.empty())
        out.push_back(tok);
      else if (c != std::string::npos or not out.empty())
        out.push_back(tok); // keep empty slot so arity errors are caught
      if (c == std::string::npos)
        break;
      pos = c + 1;
    }
  while (not out.empty() and out.back().empty())
    out.pop_back();
  return out;
}

inline i64 parse_int(const std::string& s, unsigned line)
{
  if (s.empty())
    throw ParseError(line, "expected integer");
  char* end = nullptr;
  errno = 0;
  long long v = std::strtoll(s.c_str(), &end, 0);
  if (errno != 0 or end != s.c_str() + s.size())
    throw ParseError(line, "bad integer '" + s + "'");
  return static_cast<i64>(v);
}

inline u64 parse_u64(const std::string& s, unsigned line)
{
  if (s.empty() or s[0] == '-')
    throw ParseError(line, "expected non-negative integer");
  char* end = nullptr;
  errno = 0;
  unsigned long long v = std::strtoull(s.c_str(), &end, 0);
  if (errno != 0 or end != s.c_str() + s.size())
    throw ParseError(line, "bad integer '" + s + "'");
  return static_cast<u64>(v);
}

inline f64 parse_f64(const std::string& s, unsigned line)
{
  if (s == "inf")
    return std::numeric_limits<f64>::infinity();
  if (s == "-inf")
    return -std::numeric_limits<f64>::infinity();
  if (s == "nan")
    return std::numeric_limits<f64>::quiet_NaN();
  f64 v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() or p != s.data() + s.size())
    throw ParseError(line, "bad float literal '" + s + "'");
  return v;
}

inline std::string format_f64(f64 v)
{
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, p);
}

inline u8 parse_vreg(const std::string& s, unsigned line)
{
  if (s.size() >= 2 and s[0] == 'v')
    {
      char* end = nullptr;
      long v = std::strtol(s.c_str() + 1, &end, 10);
      if (end == s.c_str() + s.size() and v >= 0 and v < 32)
        return static_cast<u8>(v);
    }
  throw ParseError(line, "bad vector register '" + s + "'");
}

inline u8 parse_xreg(const std::string& s, unsigned line)
{
  for (unsigned i = 0; i < 32; ++i)
    if (s == kIntRegNames[i])
      return static_cast<u8>(i);
  if (s == "fp")
    return 8;
  if (s.size() >= 2 and s[0] == 'x')
    {
      char* end = nullptr;
      long v = std::strtol(s.c_str() + 1, &end, 10);
      if (end == s.c_str() + s.size() and v >= 0 and v < 32)
        return static_cast<u8>(v);
    }
  throw ParseError(line, "bad integer register '" + s + "'");
}

inline u8 parse_freg(const std::string& s, unsigned line)
{
  for (unsigned i = 0; i < 32; ++i)
    if (s == kFpRegNames[i])
      return static_cast<u8>(i);
  if (s.size() >= 2 and s[0] == 'f' and s[1] >= '0' and s[1] <= '9')
    {
      char* end = nullptr;
      long v = std::strtol(s.c_str() + 1, &end, 10);
      if (end == s.c_str() + s.size() and v >= 0 and v < 32)
        return static_cast<u8>(v);
    }
  throw ParseError(line, "bad float register '" + s + "'");
}

/// "(a0)" → base register.
inline u8 parse_addr(const std::string& s, unsigned line)
{
  if (s.size() >= 3 and s.front() == '(' and s.back() == ')')
    return parse_xreg(trim(s.substr(1, s.size() - 2)), line);
  throw ParseError(line, "expected (reg) address operand, got '" + s + "'");
}

/// "8(a0)" or "(a0)" → (offset, base register).
inline std::pair<i64, u8> parse_offset_addr(const std::string& s, unsigned line)
{
  size_t o = s.find('(');
  if (o == std::string::npos or s.back() != ')')
    throw ParseError(line, "expected offset(reg) operand, got '" + s + "'");
  std::string off = trim(s.substr(0, o));
  u8 base = parse_xreg(trim(s.substr(o + 1, s.size() - o - 2)), line);
  return {off.empty() ? 0 : parse_int(off, line), base};
}

inline unsigned parse_sew_token(const std::string& s, unsigned line)
{
  if (s.size() >= 2 and s[0] == 'e')
    {
      i64 v = parse_int(s.substr(1), line);
      if (v == 8 or v == 16 or v == 32 or v == 64)
        return static_cast<unsigned>(v);
    }
  throw ParseError(line, "bad sew token '" + s + "'");
}

inline unsigned parse_lmul_token(const std::string& s, unsigned line)
{
  if (s.size() >= 2 and s[0] == 'm')
    {
      i64 v = parse_int(s.substr(1), line);
      if (v == 1 or v == 2 or v == 4 or v == 8)
        return static_cast<unsigned>(v);
    }
  throw ParseError(line, "bad lmul token '" + s + "'");
}

inline void expect_arity(const std::vector<std::string>& ops, size_t n,
                         const std::string& mnem, unsigned line)
{
  if (ops.size() != n)
    throw ParseError(line, mnem + ": expected " + std::to_string(n) +
                             " operands, got " + std::to_string(ops.size()));
}

} // namespace asmdetail

/// Decode one instruction line (no labels or directives — those belong to
/// parse_program). `line_no` is used only for error reporting.
inline Instr decode(const std::string& text, unsigned line_no = 0)
{
  using namespace asmdetail;

  std::string s = strip_comment(text);
  if (s.empty())
    throw ParseError(line_no, "empty instruction");

  size_t sp = s.find_first_of(" \t");
  std::string mnem = s.substr(0, sp);
  std::vector<std::string> ops =
    sp == std::string::npos ? std::vector<std::string>{}
                            : split_operands(s.substr(sp + 1));

  Instr in;

  // Trailing "v0.t" marks a masked operation; legality is checked per-op.
  bool masked = false;
  if (not ops.empty() and ops.back() == "v0.t")
    {
      masked = true;
      ops.pop_back();
    }

  auto require_unmasked = [&]() {
    if (masked)
      throw ParseError(line_no, mnem + " cannot take v0.t");
  };

  // vop.vv vd, vs2, vs1 (standard operand order)
  auto dec_vv = [&](Op op) {
    expect_arity(ops, 3, mnem, line_no);
    in.op = op;
    in.vd = parse_vreg(ops[0], line_no);
    in.vs2 = parse_vreg(ops[1], line_no);
    in.vs1 = parse_vreg(ops[2], line_no);
    in.masked = masked;
  };
  // vop.vf vd, vs2, fs1
  auto dec_vf = [&](Op op) {
    expect_arity(ops, 3, mnem, line_no);
    in.op = op;
    in.vd = parse_vreg(ops[0], line_no);
    in.vs2 = parse_vreg(ops[1], line_no);
    in.fs1 = parse_freg(ops[2], line_no);
    in.masked = masked;
  };
  // multiply-add order: vop.vv vd, vs1, vs2 / vop.vf vd, fs1, vs2
  auto dec_ma_vv = [&](Op op) {
    expect_arity(ops, 3, mnem, line_no);
    in.op = op;
    in.vd = parse_vreg(ops[0], line_no);
    in.vs1 = parse_vreg(ops[1], line_no);
    in.vs2 = parse_vreg(ops[2], line_no);
    in.masked = masked;
  };
  auto dec_ma_vf = [&](Op op) {
    expect_arity(ops, 3, mnem, line_no);
    in.op = op;
    in.vd = parse_vreg(ops[0], line_no);
    in.fs1 = parse_freg(ops[1], line_no);
    in.vs2 = parse_vreg(ops[2], line_no);
    in.masked = masked;
  };
  // vop.vx vd, vs2, rs1
  auto dec_vx = [&](Op op) {
    expect_arity(ops, 3, mnem, line_no);
    in.op = op;
    in.vd = parse_vreg(ops[0], line_no);
    in.vs2 = parse_vreg(ops[1], line_no);
    in.rs1 = parse_xreg(ops[2], line_no);
    in.masked = masked;
  };
  auto dec_mem = [&](Op op, unsigned sew, bool strided) {
    require_unmasked(); // masked memory ops are outside the subset
    expect_arity(ops, strided ? 3u : 2u, mnem, line_no);
    in.op = op;
    in.vd = parse_vreg(ops[0], line_no);
    in.rs1 = parse_addr(ops[1], line_no);
    if (strided)
      in.rs2 = parse_xreg(ops[2], line_no);
    in.mem_sew = static_cast<u8>(sew);
  };

  if (mnem == "vsetvli")
    {
      require_unmasked();
      if (ops.size() < 4)
        throw ParseError(line_no, "vsetvli: expected rd, rs1, eN, mN");
      in.op = Op::kVsetvli;
      in.rd = parse_xreg(ops[0], line_no);
      in.rs1 = parse_xreg(ops[1], line_no);
      in.sew = static_cast<u8>(parse_sew_token(ops[2], line_no));
      in.lmul = static_cast<u8>(parse_lmul_token(ops[3], line_no));
      for (size_t i = 4; i < ops.size(); ++i)
        if (ops[i] != "ta" and ops[i] != "tu" and ops[i] != "ma" and
            ops[i] != "mu")
          throw ParseError(line_no, "vsetvli: bad flag '" + ops[i] + "'");
    }
  else if (mnem == "vle8.v")
    dec_mem(Op::kVle, 8, false);
  else if (mnem == "vle16.v")
    dec_mem(Op::kVle, 16, false);
  else if (mnem == "vle32.v")
    dec_mem(Op::kVle, 32, false);
  else if (mnem == "vle64.v")
    dec_mem(Op::kVle, 64, false);
  else if (mnem == "vse8.v")
    dec_mem(Op::kVse, 8, false);
  else if (mnem == "vse16.v")
    dec_mem(Op::kVse, 16, false);
  else if (mnem == "vse32.v")
    dec_mem(Op::kVse, 32, false);
  else if (mnem == "vse64.v")
    dec_mem(Op::kVse, 64, false);
  else if (mnem == "vlse64.v")
    dec_mem(Op::kVlse, 64, true);
  else if (mnem == "vsse64.v")
    dec_mem(Op::kVsse, 64, true);
  else if (mnem == "vfadd.vv")
    dec_vv(Op::kVfaddVV);
  else if (mnem == "vfadd.vf")
    dec_vf(Op::kVfaddVF);
  else if (mnem == "vfsub.vv")
    dec_vv(Op::kVfsubVV);
  else if (mnem == "vfsub.vf")
    dec_vf(Op::kVfsubVF);
  else if (mnem == "vfmul.vv")
    dec_vv(Op::kVfmulVV);
  else if (mnem == "vfmul.vf")
    dec_vf(Op::kVfmulVF);
  else if (mnem == "vfdiv.vv")
    dec_vv(Op::kVfdivVV);
  else if (mnem == "vfdiv.vf")
    dec_vf(Op::kVfdivVF);
  else if (mnem == "vfmacc.vv")
    dec_ma_vv(Op::kVfmaccVV);
  else if (mnem == "vfmacc.vf")
    dec_ma_vf(Op::kVfmaccVF);
  else if (mnem == "vfmadd.vv")
    dec_ma_vv(Op::kVfmaddVV);
  else if (mnem == "vfnmsac.vf")
    dec_ma_vf(Op::kVfnmsacVF);
  else if (mnem == "vmv.v.v")
    {
      require_unmasked();
      expect_arity(ops, 2, mnem, line_no);
      in.op = Op::kVmvVV;
      in.vd = parse_vreg(ops[0], line_no);
      in.vs1 = parse_vreg(ops[1], line_no);
    }
  else if (mnem == "vfmv.v.f" or mnem == "vfmv.s.f")
    {
      require_unmasked();
      expect_arity(ops, 2, mnem, line_no);
      in.op = mnem == "vfmv.v.f" ? Op::kVfmvVF : Op::kVfmvSF;
      in.vd = parse_vreg(ops[0], line_no);
      in.fs1 = parse_freg(ops[1], line_no);
    }
  else if (mnem == "vfmv.f.s")
    {
      require_unmasked();
      expect_arity(ops, 2, mnem, line_no);
      in.op = Op::kVfmvFS;
      in.fd = parse_freg(ops[0], line_no);
      in.vs2 = parse_vreg(ops[1], line_no);
    }
  else if (mnem == "vfmerge.vfm")
    {
      require_unmasked(); // the v0 operand is explicit, not a v0.t suffix
      expect_arity(ops, 4, mnem, line_no);
      if (ops[3] != "v0")
        throw ParseError(line_no, "vfmerge.vfm: last operand must be v0");
      in.op = Op::kVfmergeVFM;
      in.vd = parse_vreg(ops[0], line_no);
      in.vs2 = parse_vreg(ops[1], line_no);
      in.fs1 = parse_freg(ops[2], line_no);
      in.masked = true;
    }
  else if (mnem == "vmflt.vf")
    dec_vf(Op::kVmfltVF);
  else if (mnem == "vmfle.vf")
    dec_vf(Op::kVmfleVF);
  else if (mnem == "vmfgt.vf")
    dec_vf(Op::kVmfgtVF);
  else if (mnem == "vmfge.vf")
    dec_vf(Op::kVmfgeVF);
  else if (mnem == "vmseq.vx")
    dec_vx(Op::kVmseqVX);
  else if (mnem == "vmsne.vx")
    dec_vx(Op::kVmsneVX);
  else if (mnem == "vfslide1up.vf")
    {
      require_unmasked();
      dec_vf(Op::kVfslide1upVF);
    }
  else if (mnem == "vfslide1down.vf")
    {
      require_unmasked();
      dec_vf(Op::kVfslide1downVF);
    }
  else if (mnem == "vslideup.vx")
    {
      require_unmasked();
      dec_vx(Op::kVslideupVX);
    }
  else if (mnem == "vslidedown.vx")
    {
      require_unmasked();
      dec_vx(Op::kVslidedownVX);
    }
  else if (mnem == "vfredusum.vs" or mnem == "vfredosum.vs")
    {
      require_unmasked();
      dec_vv(Op::kVfredusum); // one fixed order covers both mnemonics
    }
  else if (mnem == "vfredmax.vs")
    {
      require_unmasked();
      dec_vv(Op::kVfredmax);
    }
  else if (mnem == "vfcvt.x.f.v" or mnem == "vfcvt.f.x.v")
    {
      expect_arity(ops, 2, mnem, line_no);
      in.op = mnem == "vfcvt.x.f.v" ? Op::kVfcvtXF : Op::kVfcvtFX;
      in.vd = parse_vreg(ops[0], line_no);
      in.vs2 = parse_vreg(ops[1], line_no);
      in.masked = masked;
    }
  else if (mnem == "vadd.vx")
    dec_vx(Op::kVaddVX);
  else if (mnem == "vsll.vi")
    {
      expect_arity(ops, 3, mnem, line_no);
      in.op = Op::kVsllVI;
      in.vd = parse_vreg(ops[0], line_no);
      in.vs2 = parse_vreg(ops[1], line_no);
      in.imm = parse_int(ops[2], line_no);
      in.masked = masked;
      if (in.imm < 0 or in.imm > 63)
        throw ParseError(line_no, "vsll.vi: shift out of range");
    }
  else if (mnem == "li")
    {
      require_unmasked();
      expect_arity(ops, 2, mnem, line_no);
      in.op = Op::kLi;
      in.rd = parse_xreg(ops[0], line_no);
      in.imm = parse_int(ops[1], line_no);
    }
  else if (mnem == "addi" or mnem == "slli")
    {
      require_unmasked();
      expect_arity(ops, 3, mnem, line_no);
      in.op = mnem == "addi" ? Op::kAddi : Op::kSlli;
      in.rd = parse_xreg(ops[0], line_no);
      in.rs1 = parse_xreg(ops[1], line_no);
      in.imm = parse_int(ops[2], line_no);
      if (in.op == Op::kSlli and (in.imm < 0 or in.imm > 63))
        throw ParseError(line_no, "slli: shift out of range");
    }
  else if (mnem == "add" or mnem == "sub")
    {
      require_unmasked();
      expect_arity(ops, 3, mnem, line_no);
      in.op = mnem == "add" ? Op::kAdd : Op::kSub;
      in.rd = parse_xreg(ops[0], line_no);
      in.rs1 = parse_xreg(ops[1], line_no);
      in.rs2 = parse_xreg(ops[2], line_no);
    }
  else if (mnem == "fld" or mnem == "fsd")
    {
      require_unmasked();
      expect_arity(ops, 2, mnem, line_no);
      auto [off, base] = parse_offset_addr(ops[1], line_no);
      in.op = mnem == "fld" ? Op::kFld : Op::kFsd;
      if (in.op == Op::kFld)
        in.fd = parse_freg(ops[0], line_no);
      else
        in.fs1 = parse_freg(ops[0], line_no);
      in.rs1 = base;
      in.imm = off;
    }
  else if (mnem == "fli.d")
    {
      require_unmasked();
      expect_arity(ops, 2, mnem, line_no);
      in.op = Op::kFli;
      in.fd = parse_freg(ops[0], line_no);
      in.imm = static_cast<i64>(f64_bits(parse_f64(ops[1], line_no)));
    }
  else
    throw ParseError(line_no, "unknown mnemonic '" + mnem + "'");

  return in;
}

/// Render one instruction back to its textual form (decode ∘ format = id).
/// kLoop needs a label name, supplied by format_program.
inline std::string format(const Instr& in, const std::string& loop_label = "")
{
  using namespace asmdetail;

  auto v = [](u8 r) { return "v" + std::to_string(r); };
  auto x = [](u8 r) { return std::string(kIntRegNames[r]); };
  auto f = [](u8 r) { return std::string(kFpRegNames[r]); };
  auto m = [&in]() { return in.masked ? std::string(", v0.t") : ""; };

  auto vv = [&](const char* n) {
    return std::string(n) + " " + v(in.vd) + ", " + v(in.vs2) + ", " +
           v(in.vs1) + m();
  };
  auto vf = [&](const char* n) {
    return std::string(n) + " " + v(in.vd) + ", " + v(in.vs2) + ", " +
           f(in.fs1) + m();
  };
  auto ma_vv = [&](const char* n) {
    return std::string(n) + " " + v(in.vd) + ", " + v(in.vs1) + ", " +
           v(in.vs2) + m();
  };
  auto ma_vf = [&](const char* n) {
    return std::string(n) + " " + v(in.vd) + ", " + f(in.fs1) + ", " +
           v(in.vs2) + m();
  };
  auto vx = [&](const char* n) {
    return std::string(n) + " " + v(in.vd) + ", " + v(in.vs2) + ", " +
           x(in.rs1) + m();
  };
  auto mem = [&](const char* pfx, const char* sfx) {
    return std::string(pfx) + std::to_string(in.mem_sew) + sfx + " " +
           v(in.vd) + ", (" + x(in.rs1) + ")";
  };

  switch (in.op)
    {
    case Op::kVsetvli:
      return "vsetvli " + x(in.rd) + ", " + x(in.rs1) + ", e" +
             std::to_string(in.sew) + ", m" + std::to_string(in.lmul) +
             ", ta, ma";
    case Op::kVle:
      return mem("vle", ".v");
    case Op::kVse:
      return mem("vse", ".v");
    case Op::kVlse:
      return mem("vlse", ".v") + ", " + x(in.rs2);
    case Op::kVsse:
      return mem("vsse", ".v") + ", " + x(in.rs2);
    case Op::kVfaddVV:
      return vv("vfadd.vv");
    case Op::kVfaddVF:
      return vf("vfadd.vf");
    case Op::kVfsubVV:
      return vv("vfsub.vv");
    case Op::kVfsubVF:
      return vf("vfsub.vf");
    case Op::kVfmulVV:
      return vv("vfmul.vv");
    case Op::kVfmulVF:
      return vf("vfmul.vf");
    case Op::kVfdivVV:
      return vv("vfdiv.vv");
    case Op::kVfdivVF:
      return vf("vfdiv.vf");
    case Op::kVfmaccVV:
      return ma_vv("vfmacc.vv");
    case Op::kVfmaccVF:
      return ma_vf("vfmacc.vf");
    case Op::kVfmaddVV:
      return ma_vv("vfmadd.vv");
    case Op::kVfnmsacVF:
      return ma_vf("vfnmsac.vf");
    case Op::kVmvVV:
      return "vmv.v.v " + v(in.vd) + ", " + v(in.vs1);
    case Op::kVfmvVF:
      return "vfmv.v.f " + v(in.vd) + ", " + f(in.fs1);
    case Op::kVfmvSF:
      return "vfmv.s.f " + v(in.vd) + ", " + f(in.fs1);
    case Op::kVfmvFS:
      return "vfmv.f.s " + f(in.fd) + ", " + v(in.vs2);
    case Op::kVfmergeVFM:
      return "vfmerge.vfm " + v(in.vd) + ", " + v(in.vs2) + ", " + f(in.fs1) +
             ", v0";
    case Op::kVmfltVF:
      return vf("vmflt.vf");
    case Op::kVmfleVF:
      return vf("vmfle.vf");
    case Op::kVmfgtVF:
      return vf("vmfgt.vf");
    case Op::kVmfgeVF:
      return vf("vmfge.vf");
    case Op::kVmseqVX:
      return vx("vmseq.vx");
    case Op::kVmsneVX:
      return vx("vmsne.vx");
    case Op::kVfslide1upVF:
      return vf("vfslide1up.vf");
    case Op::kVfslide1downVF:
      return vf("vfslide1down.vf");
    case Op::kVslideupVX:
      return vx("vslideup.vx");
    case Op::kVslidedownVX:
      return vx("vslidedown.vx");
    case Op::kVfredusum:
      return vv("vfredusum.vs");
    case Op::kVfredmax:
      return vv("vfredmax.vs");
    case Op::kVfcvtXF:
      return "vfcvt.x.f.v " + v(in.vd) + ", " + v(in.vs2) + m();
    case Op::kVfcvtFX:
      return "vfcvt.f.x.v " + v(in.vd) + ", " + v(in.vs2) + m();
    case Op::kVaddVX:
      return vx("vadd.vx");
    case Op::kVsllVI:
      return "vsll.vi " + v(in.vd) + ", " + v(in.vs2) + ", " +
             std::to_string(in.imm) + m();
    case Op::kLi:
      return "li " + x(in.rd) + ", " + std::to_string(in.imm);
    case Op::kAddi:
      return "addi " + x(in.rd) + ", " + x(in.rs1) + ", " +
             std::to_string(in.imm);
    case Op::kAdd:
      return "add " + x(in.rd) + ", " + x(in.rs1) + ", " + x(in.rs2);
    case Op::kSub:
      return "sub " + x(in.rd) + ", " + x(in.rs1) + ", " + x(in.rs2);
    case Op::kSlli:
      return "slli " + x(in.rd) + ", " + x(in.rs1) + ", " +
             std::to_string(in.imm);
    case Op::kFld:
      return "fld " + f(in.fd) + ", " + std::to_string(in.imm) + "(" +
             x(in.rs1) + ")";
    case Op::kFsd:
      return "fsd " + f(in.fs1) + ", " + std::to_string(in.imm) + "(" +
             x(in.rs1) + ")";
    case Op::kFli:
      return "fli.d " + f(in.fd) + ", " +
             format_f64(bits_f64(static_cast<u64>(in.imm)));
    case Op::kLoop:
      return ".loop " + (loop_label.empty() ? "L" + std::to_string(in.loop_target)
                                            : loop_label) +
             " " + std::to_string(in.imm);
    }
  throw ConfigError("format: unhandled opcode");
}

/// Parse a whole program: instructions, labels, `.data`, `.loop`.
inline Program parse_program(const std::string& text)
{
  using namespace asmdetail;

  Program prog;
  std::unordered_map<std::string, u32> label_at;
  struct Fixup
  {
    u32 index;
    std::string label;
    unsigned line;
  };
  std::vector<Fixup> fixups;

  unsigned line_no = 0;
  size_t pos = 0;
  while (pos <= text.size())
    {
      size_t nl = text.find('\n', pos);
      std::string raw = nl == std::string::npos ? text.substr(pos)
                                                : text.substr(pos, nl - pos);
      pos = nl == std::string::npos ? text.size() + 1 : nl + 1;
      ++line_no;

      std::string s = strip_comment(raw);
      if (s.empty())
        continue;

      if (s.back() == ':')
        {
          std::string name = trim(s.substr(0, s.size() - 1));
          if (name.empty() or name.find_first_of(" \t") != std::string::npos)
            throw ParseError(line_no, "bad label '" + s + "'");
          if (label_at.count(name))
            throw ParseError(line_no, "duplicate label '" + name + "'");
          label_at[name] = static_cast<u32>(prog.code.size());
          prog.labels.emplace_back(static_cast<u32>(prog.code.size()), name);
          continue;
        }

      if (s.rfind(".data", 0) == 0)
        {
          size_t sp1 = s.find_first_of(" \t");
          if (sp1 == std::string::npos)
            throw ParseError(line_no, ".data: expected addr and hex bytes");
          std::string rest = trim(s.substr(sp1));
          size_t sp2 = rest.find_first_of(" \t");
          if (sp2 == std::string::npos)
            throw ParseError(line_no, ".data: expected hex bytes");
          DataSegment seg;
          seg.addr = parse_u64(trim(rest.substr(0, sp2)), line_no);
          std::string hex = trim(rest.substr(sp2));
          if (hex.empty() or hex.size() % 2 != 0)
            throw ParseError(line_no, ".data: hex string must have even length");
          for (size_t i = 0; i < hex.size(); i += 2)
            {
              auto nib = [&](char c) -> unsigned {
                if (c >= '0' and c <= '9')
                  return c - '0';
                if (c >= 'a' and c <= 'f')
                  return c - 'a' + 10;
                if (c >= 'A' and c <= 'F')
                  return c - 'A' + 10;
                throw ParseError(line_no, ".data: bad hex digit");
              };
              seg.bytes.push_back(
                static_cast<u8>(nib(hex[i]) * 16 + nib(hex[i + 1])));
            }
          prog.data.push_back(std::move(seg));
          continue;
        }

      if (s.rfind(".loop", 0) == 0)
        {
          size_t sp1 = s.find_first_of(" \t");
          if (sp1 == std::string::npos)
            throw ParseError(line_no, ".loop: expected label and count");
          std::string rest = trim(s.substr(sp1));
          size_t sp2 = rest.find_first_of(" \t");
          if (sp2 == std::string::npos)
            throw ParseError(line_no, ".loop: expected count");
          std::string label = trim(rest.substr(0, sp2));
          i64 count = parse_int(trim(rest.substr(sp2)), line_no);
          if (count < 1)
            throw ParseError(line_no, ".loop: count must be positive");
          Instr in;
          in.op = Op::kLoop;
          in.imm = count;
          fixups.push_back({static_cast<u32>(prog.code.size()), label, line_no});
          prog.code.push_back(in);
          continue;
        }

      if (s[0] == '.')
        throw ParseError(line_no, "unknown directive '" + s + "'");

      prog.code.push_back(decode(s, line_no));
    }

  for (const Fixup& fx : fixups)
    {
      auto it = label_at.find(fx.label);
      if (it == label_at.end())
        throw ParseError(fx.line, ".loop: unknown label '" + fx.label + "'");
      prog.code[fx.index].loop_target = static_cast<i32>(it->second);
    }

  return prog;
}

/// Render a program (data first, then labeled code). Loop targets without a
/// recorded label get a synthetic one so the output always re-parses.
inline std::string format_program(const Program& prog)
{
  std::string out;

  for (const DataSegment& seg : prog.data)
    {
      out += ".data 0x";
      char buf[24];
      auto [p, ec] = std::to_chars(buf, buf + sizeof buf, seg.addr, 16);
      (void)ec;
      out.append(buf, p);
      out += ' ';
      static const char* kHex = "0123456789abcdef";
      for (u8 b : seg.bytes)
        {
          out += kHex[b >> 4];
          out += kHex[b & 15];
        }
      out += '\n';
    }

  // index → label names; synthesize names for unlabeled loop targets
  std::unordered_map<u32, std::vector<std::string>> names;
  for (const auto& [idx, name] : prog.labels)
    names[idx].push_back(name);
  for (const Instr& in : prog.code)
    if (in.op == Op::kLoop)
      {
        u32 tgt = static_cast<u32>(in.loop_target);
        if (names.find(tgt) == names.end())
          names[tgt].push_back("L" + std::to_string(tgt));
      }

  for (u32 i = 0; i <= prog.code.size(); ++i)
    {
      if (auto it = names.find(i); it != names.end())
        for (const std::string& n : it->second)
          out += n + ":\n";
      if (i == prog.code.size())
        break;
      const Instr& in = prog.code[i];
      std::string label;
      if (in.op == Op::kLoop)
        label = names[static_cast<u32>(in.loop_target)].front();
      out += format(in, label) + '\n';
    }

  return out;
}

} // namespace araxl
