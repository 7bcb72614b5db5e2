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

/// \file experiments.hpp
/// Measurement campaigns over the timed machine: the weak-scaling sweep
/// (problem bytes per lane held constant while the lane count grows), the
/// interface-latency sweep (register cuts on one interface at a time), CSV
/// serialization of both, acceptance-threshold checks, and a report
/// generator that turns the CSVs into a text summary plus per-figure data
/// files.  Every run of the machine is deterministic, so reruns of the same
/// plan produce byte-identical CSV text.

#pragma once

#include <algorithm>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "araxl/config.hpp"
#include "araxl/engine.hpp"
#include "araxl/kernels.hpp"

namespace araxl
{

/// A measurement campaign.  The defaults describe the full sweep: every
/// kernel, cluster counts 2..16 at four lanes each, four problem sizes, and
/// the cut sweeps for the three latency-tolerant interfaces.
struct ExperimentPlan
{
  std::vector<Kernel> kernels{std::begin(kAllKernels), std::end(kAllKernels)};
  std::vector<unsigned> cluster_counts{2, 4, 8, 16};
  unsigned lanes_per_cluster = 4;
  std::vector<u64> bytes_per_lane{64, 128, 256, 512};
  std::vector<unsigned> glsu_cuts{0, 1, 2, 4};
  std::vector<unsigned> reqi_cuts{0, 1};
  std::vector<unsigned> ring_cuts{0, 1};
  unsigned repetitions = 1; ///< must stay 1: the machine is deterministic

  /// Throw ConfigError unless the plan is runnable.
  void validate() const
  {
    if (repetitions != 1)
      throw ConfigError("repetitions must be 1: runs are deterministic and "
                        "a repeated cell would measure the same numbers");
    if (kernels.empty())
      throw ConfigError("plan needs at least one kernel");
    if (cluster_counts.empty())
      throw ConfigError("plan needs at least one cluster count");
    if (bytes_per_lane.empty())
      throw ConfigError("plan needs at least one bytes-per-lane point");
    for (u64 b : bytes_per_lane)
      if (b == 0 or b % 8 != 0)
        throw ConfigError("bytes per lane must be a positive multiple of 8");
  }
};

/// One cell of the weak-scaling sweep.
struct ScalingRow
{
  std::string kernel;
  unsigned lanes = 0;
  u64 bytes_per_lane = 0;
  u64 cycles = 0;
  u64 flops = 0;
  f64 flop_per_cycle = 0.0;
  f64 utilization = 0.0;
  f64 speedup = 0.0; ///< throughput over the smallest swept lane count
};

/// One cell of the interface-latency sweep.
struct LatencyRow
{
  std::string kernel;
  std::string interface; ///< "glsu", "reqi", or "ring"
  unsigned cuts = 0;
  u64 bytes_per_lane = 0;
  f64 utilization = 0.0;
  f64 drop_pp = 0.0; ///< baseline utilization minus this cell, in points
};

namespace xdetail
{

struct CellResult
{
  u64 cycles = 0;
  u64 flops = 0;
  f64 util = 0.0;
};

/// Generate one benchmark, run it on the timed machine, and require the
/// final memory image to match the reference model bit for bit.  A mismatch
/// names the failing cell and aborts the campaign.
inline CellResult run_cell(Kernel k, unsigned clusters, unsigned lanes,
                           u64 bytes_per_lane, unsigned glsu, unsigned reqi,
                           unsigned ring)
{
  MachineConfig cfg;
  cfg.clusters = clusters;
  cfg.lanes_per_cluster = lanes;
  cfg.glsu_cuts = glsu;
  cfg.reqi_cuts = reqi;
  cfg.ring_cuts = ring;
  cfg.validate();
  KernelProgram kp = generate(k, cfg, bytes_per_lane);
  EngineResult res = engine_execute(kp.program, cfg, std::move(kp.image));
  if (res.memory.bytes() != kp.golden.memory.bytes())
    throw Error(std::string("golden mismatch: kernel=") + kernel_name(k) +
                " lanes=" + std::to_string(clusters * lanes) +
                " bytes_per_lane=" + std::to_string(bytes_per_lane) +
                " glsu_cuts=" + std::to_string(glsu) +
                " reqi_cuts=" + std::to_string(reqi) +
                " ring_cuts=" + std::to_string(ring));
  return {res.stats.total_cycles, kp.flops, utilization(res.stats, cfg)};
}

/// Fixed-point decimal with six places; enough to round-trip every
/// threshold comparison and stable across reruns.
inline std::string fmt6(f64 v)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

inline std::string seed_comment()
{
  char buf[64];
  std::snprintf(buf, sizeof buf, "# seed=0x%016llx\n",
                static_cast<unsigned long long>(kDataSeed));
  return buf;
}

} // namespace xdetail

/// Run the weak-scaling campaign: for every kernel and problem size, sweep
/// the cluster counts with all interface cuts at zero.  Speedup is the
/// flop-per-cycle ratio over the smallest swept lane count, so the baseline
/// row reads exactly 1.
inline std::vector<ScalingRow> run_scaling(const ExperimentPlan& plan)
{
  plan.validate();
  std::vector<unsigned> clusters = plan.cluster_counts;
  std::sort(clusters.begin(), clusters.end());
  clusters.erase(std::unique(clusters.begin(), clusters.end()),
                 clusters.end());

  std::vector<ScalingRow> rows;
  for (Kernel k : plan.kernels)
    for (u64 bpl : plan.bytes_per_lane)
      {
        f64 base_fpc = 0.0;
        for (unsigned c : clusters)
          {
            xdetail::CellResult cell =
              xdetail::run_cell(k, c, plan.lanes_per_cluster, bpl, 0, 0, 0);
            ScalingRow r;
            r.kernel = kernel_name(k);
            r.lanes = c * plan.lanes_per_cluster;
            r.bytes_per_lane = bpl;
            r.cycles = cell.cycles;
            r.flops = cell.flops;
            r.flop_per_cycle =
              cell.cycles ? static_cast<f64>(cell.flops) /
                              static_cast<f64>(cell.cycles)
                          : 0.0;
            r.utilization = cell.util;
            if (base_fpc == 0.0)
              base_fpc = r.flop_per_cycle;
            r.speedup = base_fpc > 0.0 ? r.flop_per_cycle / base_fpc : 0.0;
            rows.push_back(std::move(r));
          }
      }
  return rows;
}

/// Run the interface-latency campaign at the plan's largest lane
/// configuration: for every kernel and problem size, sweep each interface's
/// cut counts one interface at a time while the other two stay at zero.
/// The zero-cut baseline row is always emitted, even when a sweep list
/// omits it, so the drop column has its reference in the same file.
inline std::vector<LatencyRow> run_latency(const ExperimentPlan& plan)
{
  plan.validate();
  const unsigned c =
    *std::max_element(plan.cluster_counts.begin(), plan.cluster_counts.end());

  std::vector<LatencyRow> rows;
  for (Kernel k : plan.kernels)
    for (u64 bpl : plan.bytes_per_lane)
      {
        const xdetail::CellResult base =
          xdetail::run_cell(k, c, plan.lanes_per_cluster, bpl, 0, 0, 0);
        auto sweep = [&](const char* name,
                         const std::vector<unsigned>& cut_list, int which)
          {
            std::vector<unsigned> cuts = cut_list;
            cuts.push_back(0);
            std::sort(cuts.begin(), cuts.end());
            cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
            for (unsigned n : cuts)
              {
                const xdetail::CellResult cell =
                  n == 0 ? base
                         : xdetail::run_cell(k, c, plan.lanes_per_cluster,
                                             bpl, which == 0 ? n : 0,
                                             which == 1 ? n : 0,
                                             which == 2 ? n : 0);
                LatencyRow r;
                r.kernel = kernel_name(k);
                r.interface = name;
                r.cuts = n;
                r.bytes_per_lane = bpl;
                r.utilization = cell.util;
                r.drop_pp = 100.0 * (base.util - cell.util);
                rows.push_back(std::move(r));
              }
          };
        sweep("glsu", plan.glsu_cuts, 0);
        sweep("reqi", plan.reqi_cuts, 1);
        sweep("ring", plan.ring_cuts, 2);
      }
  return rows;
}

inline constexpr char kScalingHeader[] =
  "kernel,lanes,bytes_per_lane,cycles,flops,flop_per_cycle,utilization,"
  "speedup";
inline constexpr char kLatencyHeader[] =
  "kernel,interface,cuts,bytes_per_lane,utilization,utilization_drop_pp";

/// Serialize scaling rows.  The header row is mandatory; comment lines
/// record the data seed and the speedup normalization.
inline std::string to_csv(const std::vector<ScalingRow>& rows)
{
  std::string s = xdetail::seed_comment();
  s += "# speedup is relative to the smallest swept lane count\n";
  s += kScalingHeader;
  s += '\n';
  for (const ScalingRow& r : rows)
    {
      s += r.kernel;
      s += ',';
      s += std::to_string(r.lanes);
      s += ',';
      s += std::to_string(r.bytes_per_lane);
      s += ',';
      s += std::to_string(r.cycles);
      s += ',';
      s += std::to_string(r.flops);
      s += ',';
      s += xdetail::fmt6(r.flop_per_cycle);
      s += ',';
      s += xdetail::fmt6(r.utilization);
      s += ',';
      s += xdetail::fmt6(r.speedup);
      s += '\n';
    }
  return s;
}

/// Serialize latency rows; same conventions as the scaling serializer.
inline std::string to_csv(const std::vector<LatencyRow>& rows)
{
  std::string s = xdetail::seed_comment();
  s += kLatencyHeader;
  s += '\n';
  for (const LatencyRow& r : rows)
    {
      s += r.kernel;
      s += ',';
      s += r.interface;
      s += ',';
      s += std::to_string(r.cuts);
      s += ',';
      s += std::to_string(r.bytes_per_lane);
      s += ',';
      s += xdetail::fmt6(r.utilization);
      s += ',';
      s += xdetail::fmt6(r.drop_pp);
      s += '\n';
    }
  return s;
}

namespace xdetail
{

inline std::vector<std::string> split_csv(const std::string& line)
{
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line)
    if (ch == ',')
      {
        out.push_back(cur);
        cur.clear();
      }
    else
      cur += ch;
  out.push_back(cur);
  return out;
}

inline bool to_u64(const std::string& s, u64& out)
{
  if (s.empty())
    return false;
  errno = 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
  if (errno != 0 or end != s.c_str() + s.size())
    return false;
  out = v;
  return true;
}

inline bool to_f64(const std::string& s, f64& out)
{
  if (s.empty())
    return false;
  errno = 0;
  char* end = nullptr;
  const f64 v = std::strtod(s.c_str(), &end);
  if (errno != 0 or end != s.c_str() + s.size())
    return false;
  out = v;
  return true;
}

/// Iterate the physical lines of `text`, calling `fn(lineno, line)` for
/// every non-empty, non-comment line, with 1-based file line numbers.
template <typename Fn>
inline void for_each_csv_line(const std::string& text, Fn fn)
{
  u64 lineno = 0;
  std::size_t pos = 0;
  while (pos < text.size())
    {
      const std::size_t nl = text.find('\n', pos);
      std::string line = nl == std::string::npos
                           ? text.substr(pos)
                           : text.substr(pos, nl - pos);
      pos = nl == std::string::npos ? text.size() : nl + 1;
      ++lineno;
      if (not line.empty() and line.back() == '\r')
        line.pop_back();
      if (line.empty() or line[0] == '#')
        continue;
      fn(lineno, line);
    }
}

} // namespace xdetail

/// Parse scaling CSV text.  Malformed rows are skipped; each one produces a
/// diagnostic naming its file line number.
inline std::vector<ScalingRow>
parse_scaling_csv(const std::string& text,
                  std::vector<std::string>* diagnostics = nullptr)
{
  std::vector<ScalingRow> rows;
  bool saw_header = false;
  auto diag = [&](u64 lineno, const std::string& msg)
    {
      if (diagnostics)
        diagnostics->push_back("scaling csv line " + std::to_string(lineno) +
                               ": " + msg);
    };
  xdetail::for_each_csv_line(text, [&](u64 lineno, const std::string& line)
    {
      if (not saw_header)
        {
          saw_header = true;
          if (line != kScalingHeader)
            diag(lineno, "unexpected header '" + line + "'");
          return;
        }
      const std::vector<std::string> f = xdetail::split_csv(line);
      if (f.size() != 8)
        {
          diag(lineno,
               "expected 8 fields, found " + std::to_string(f.size()));
          return;
        }
      ScalingRow r;
      r.kernel = f[0];
      u64 lanes = 0;
      if (not xdetail::to_u64(f[1], lanes))
        return diag(lineno, "lanes is not a number: '" + f[1] + "'");
      r.lanes = static_cast<unsigned>(lanes);
      if (not xdetail::to_u64(f[2], r.bytes_per_lane))
        return diag(lineno, "bytes_per_lane is not a number: '" + f[2] + "'");
      if (not xdetail::to_u64(f[3], r.cycles))
        return diag(lineno, "cycles is not a number: '" + f[3] + "'");
      if (not xdetail::to_u64(f[4], r.flops))
        return diag(lineno, "flops is not a number: '" + f[4] + "'");
      if (not xdetail::to_f64(f[5], r.flop_per_cycle))
        return diag(lineno, "flop_per_cycle is not a number: '" + f[5] + "'");
      if (not xdetail::to_f64(f[6], r.utilization))
        return diag(lineno, "utilization is not a number: '" + f[6] + "'");
      if (not xdetail::to_f64(f[7], r.speedup))
        return diag(lineno, "speedup is not a number: '" + f[7] + "'");
      rows.push_back(std::move(r));
    });
  return rows;
}

/// Parse latency CSV text; same conventions as the scaling parser.
inline std::vector<LatencyRow>
parse_latency_csv(const std::string& text,
                  std::vector<std::string>* diagnostics = nullptr)
{
  std::vector<LatencyRow> rows;
  bool saw_header = false;
  auto diag = [&](u64 lineno, const std::string& msg)
    {
      if (diagnostics)
        diagnostics->push_back("latency csv line " + std::to_string(lineno) +
                               ": " + msg);
    };
  xdetail::for_each_csv_line(text, [&](u64 lineno, const std::string& line)
    {
      if (not saw_header)
        {
          saw_header = true;
          if (line != kLatencyHeader)
            diag(lineno, "unexpected header '" + line + "'");
          return;
        }
      const std::vector<std::string> f = xdetail::split_csv(line);
      if (f.size() != 6)
        {
          diag(lineno,
               "expected 6 fields, found " + std::to_string(f.size()));
          return;
        }
      LatencyRow r;
      r.kernel = f[0];
      r.interface = f[1];
      u64 cuts = 0;
      if (not xdetail::to_u64(f[2], cuts))
        return diag(lineno, "cuts is not a number: '" + f[2] + "'");
      r.cuts = static_cast<unsigned>(cuts);
      if (not xdetail::to_u64(f[3], r.bytes_per_lane))
        return diag(lineno, "bytes_per_lane is not a number: '" + f[3] + "'");
      if (not xdetail::to_f64(f[4], r.utilization))
        return diag(lineno, "utilization is not a number: '" + f[4] + "'");
      if (not xdetail::to_f64(f[5], r.drop_pp))
        return diag(lineno, "utilization_drop_pp is not a number: '" + f[5] +
                              "'");
      rows.push_back(std::move(r));
    });
  return rows;
}

/// Instruction-mix throughput ceiling for a kernel name at a lane count,
/// in DP-FLOP/cycle; 0 when the name is unknown.
inline f64 perf_ceiling(const std::string& kernel, unsigned lanes)
{
  for (Kernel k : kAllKernels)
    if (kernel == kernel_name(k))
      {
        MachineConfig cfg;
        cfg.clusters = lanes;
        cfg.lanes_per_cluster = 1;
        return max_perf(k, cfg);
      }
  return 0.0;
}

/// Acceptance thresholds for the weak-scaling sweep.  Returns one
/// human-readable line per violation; an empty result means the rows pass.
/// Checks only the cells present in `rows`:
///  - utilization lies in [0, 1] and speedup is positive everywhere;
///  - flop/cycle never exceeds the instruction-mix ceiling;
///  - at 64 lanes and 512 bytes/lane: fmatmul utilization >= 0.97 with
///    flop/cycle >= 0.97 of ceiling, fconv2d utilization >= 0.95;
///  - 8->64 lane speedup at 512 bytes/lane in [7.6, 8.0] for fmatmul,
///    fconv2d, jacobi2d, and exp; in [5.2, 7.0] for fdotproduct;
///  - fdotproduct speedup >= 7.5 at 64 lanes for >= 16384 bytes/lane.
inline std::vector<std::string>
check_scaling(const std::vector<ScalingRow>& rows)
{
  // Guard against the 1e-6 quantization of CSV round-trips; every
  // threshold below is otherwise compared exactly.
  constexpr f64 kEps = 1e-6;
  std::vector<std::string> bad;
  auto cell = [](const ScalingRow& r)
    {
      return r.kernel + " at " + std::to_string(r.lanes) + " lanes, " +
             std::to_string(r.bytes_per_lane) + " bytes/lane";
    };

  bool has_8_lane = false;
  for (const ScalingRow& r : rows)
    if (r.lanes == 8)
      has_8_lane = true;

  for (const ScalingRow& r : rows)
    {
      if (r.utilization < 0.0 or r.utilization > 1.0 + kEps)
        bad.push_back(cell(r) + ": utilization " +
                      xdetail::fmt6(r.utilization) + " outside [0, 1]");
      if (r.speedup <= 0.0)
        bad.push_back(cell(r) + ": speedup " + xdetail::fmt6(r.speedup) +
                      " is not positive");
      const f64 ceiling = perf_ceiling(r.kernel, r.lanes);
      if (ceiling > 0.0 and r.flop_per_cycle > ceiling + kEps)
        bad.push_back(cell(r) + ": " + xdetail::fmt6(r.flop_per_cycle) +
                      " flop/cycle exceeds the ceiling " +
                      xdetail::fmt6(ceiling));
      if (r.lanes == 64 and r.bytes_per_lane == 512)
        {
          if (r.kernel == "fmatmul" and r.utilization < 0.97 - kEps)
            bad.push_back(cell(r) + ": utilization " +
                          xdetail::fmt6(r.utilization) + " below 0.97");
          if (r.kernel == "fconv2d" and r.utilization < 0.95 - kEps)
            bad.push_back(cell(r) + ": utilization " +
                          xdetail::fmt6(r.utilization) + " below 0.95");
          if (r.kernel == "fmatmul" and ceiling > 0.0 and
              r.flop_per_cycle < 0.97 * ceiling - kEps)
            bad.push_back(cell(r) + ": " + xdetail::fmt6(r.flop_per_cycle) +
                          " flop/cycle below 0.97 of the ceiling " +
                          xdetail::fmt6(ceiling));
          if (has_8_lane)
            {
              const bool band_76 = r.kernel == "fmatmul" or
                                   r.kernel == "fconv2d" or
                                   r.kernel == "jacobi2d" or
                                   r.kernel == "exp";
              if (band_76 and
                  (r.speedup < 7.6 - kEps or r.speedup > 8.0 + kEps))
                bad.push_back(cell(r) + ": speedup " +
                              xdetail::fmt6(r.speedup) +
                              " outside [7.6, 8.0]");
              if (r.kernel == "fdotproduct" and
                  (r.speedup < 5.2 - kEps or r.speedup > 7.0 + kEps))
                bad.push_back(cell(r) + ": speedup " +
                              xdetail::fmt6(r.speedup) +
                              " outside [5.2, 7.0]");
            }
        }
      if (r.lanes == 64 and r.bytes_per_lane >= 16384 and has_8_lane and
          r.kernel == "fdotproduct" and r.speedup < 7.5 - kEps)
        bad.push_back(cell(r) + ": speedup " + xdetail::fmt6(r.speedup) +
                      " below 7.5");
    }
  return bad;
}

/// Acceptance thresholds for the interface-latency sweep, against the
/// cells present in `rows`:
///  - utilization lies in [0, 1]; zero-cut rows report a zero drop;
///  - glsu with 4 cuts drops at most 2 points for >= 128 bytes/lane;
///  - reqi with 1 cut drops at most 6 points at 128 bytes/lane and at most
///    1 point at 512 bytes/lane;
///  - ring with 1 cut drops at most 2 points for >= 128 bytes/lane.
inline std::vector<std::string>
check_latency(const std::vector<LatencyRow>& rows)
{
  constexpr f64 kEps = 1e-6;
  std::vector<std::string> bad;
  auto cell = [](const LatencyRow& r)
    {
      return r.kernel + " with " + std::to_string(r.cuts) + " " +
             r.interface + " cuts at " + std::to_string(r.bytes_per_lane) +
             " bytes/lane";
    };
  auto over = [&](const LatencyRow& r, f64 limit)
    {
      bad.push_back(cell(r) + ": utilization drop " +
                    xdetail::fmt6(r.drop_pp) + " pp exceeds " +
                    xdetail::fmt6(limit) + " pp");
    };
  for (const LatencyRow& r : rows)
    {
      if (r.utilization < 0.0 or r.utilization > 1.0 + kEps)
        bad.push_back(cell(r) + ": utilization " +
                      xdetail::fmt6(r.utilization) + " outside [0, 1]");
      if (r.cuts == 0 and (r.drop_pp > kEps or r.drop_pp < -kEps))
        bad.push_back(cell(r) + ": baseline row reports a nonzero drop " +
                      xdetail::fmt6(r.drop_pp) + " pp");
      if (r.interface == "glsu" and r.cuts == 4 and
          r.bytes_per_lane >= 128 and r.drop_pp > 2.0 + kEps)
        over(r, 2.0);
      if (r.interface == "reqi" and r.cuts == 1)
        {
          if (r.bytes_per_lane == 128 and r.drop_pp > 6.0 + kEps)
            over(r, 6.0);
          if (r.bytes_per_lane == 512 and r.drop_pp > 1.0 + kEps)
            over(r, 1.0);
        }
      if (r.interface == "ring" and r.cuts == 1 and
          r.bytes_per_lane >= 128 and r.drop_pp > 2.0 + kEps)
        over(r, 2.0);
    }
  return bad;
}

/// Everything the report generator produces: a text summary, the
/// per-figure CSV files as (name, content) pairs, parser diagnostics, and
/// the list of absent sweep cells.  Missing cells and malformed rows are
/// reported, never fatal; empty input yields an empty summary.
struct Report
{
  std::string summary;
  std::vector<std::pair<std::string, std::string>> figures;
  std::vector<std::string> diagnostics;
  std::vector<std::string> missing_cells;
};

/// Digest the two campaign CSVs.  The summary leads with the data seed and
/// the speedup normalization, then gives per-kernel headline numbers and
/// the worst drop per interface.  Figure files: fig5.csv (weak scaling),
/// fig6a.csv / fig6b.csv / fig6c.csv (glsu / reqi / ring sensitivity).
/// Missing cells are computed against the cartesian product of the values
/// actually seen, so a partial campaign lists its own holes.
inline Report report(const std::string& scaling_csv,
                     const std::string& latency_csv)
{
  Report rep;
  std::vector<ScalingRow> srows =
    parse_scaling_csv(scaling_csv, &rep.diagnostics);
  std::vector<LatencyRow> lrows =
    parse_latency_csv(latency_csv, &rep.diagnostics);

  // Missing-cell inventory from the observed value sets.
  {
    std::set<std::string> kset;
    std::set<unsigned> lset;
    std::set<u64> bset;
    std::set<std::string> have;
    for (const ScalingRow& r : srows)
      {
        kset.insert(r.kernel);
        lset.insert(r.lanes);
        bset.insert(r.bytes_per_lane);
        have.insert(r.kernel + '|' + std::to_string(r.lanes) + '|' +
                    std::to_string(r.bytes_per_lane));
      }
    for (const std::string& k : kset)
      for (unsigned l : lset)
        for (u64 b : bset)
          if (not have.count(k + '|' + std::to_string(l) + '|' +
                             std::to_string(b)))
            rep.missing_cells.push_back(
              "scaling: kernel=" + k + " lanes=" + std::to_string(l) +
              " bytes_per_lane=" + std::to_string(b));
  }
  {
    std::set<std::string> kset;
    std::set<std::string> iset;
    std::set<u64> bset;
    std::set<std::string> have;
    std::set<std::pair<std::string, unsigned>> icuts;
    for (const LatencyRow& r : lrows)
      {
        kset.insert(r.kernel);
        iset.insert(r.interface);
        bset.insert(r.bytes_per_lane);
        icuts.insert({r.interface, r.cuts});
        have.insert(r.kernel + '|' + r.interface + '|' +
                    std::to_string(r.cuts) + '|' +
                    std::to_string(r.bytes_per_lane));
      }
    for (const std::string& k : kset)
      for (const auto& [iface, cuts] : icuts)
        for (u64 b : bset)
          if (not have.count(k + '|' + iface + '|' + std::to_string(cuts) +
                             '|' + std::to_string(b)))
            rep.missing_cells.push_back(
              "latency: kernel=" + k + " interface=" + iface +
              " cuts=" + std::to_string(cuts) +
              " bytes_per_lane=" + std::to_string(b));
  }

  // Figure files.
  if (not srows.empty())
    {
      std::vector<ScalingRow> sorted = srows;
      std::sort(sorted.begin(), sorted.end(),
                [](const ScalingRow& a, const ScalingRow& b)
                  {
                    if (a.kernel != b.kernel)
                      return a.kernel < b.kernel;
                    if (a.bytes_per_lane != b.bytes_per_lane)
                      return a.bytes_per_lane < b.bytes_per_lane;
                    return a.lanes < b.lanes;
                  });
      std::string fig = "# weak scaling: speedup over the smallest swept "
                        "lane count\n";
      fig += "kernel,bytes_per_lane,lanes,speedup\n";
      for (const ScalingRow& r : sorted)
        fig += r.kernel + ',' + std::to_string(r.bytes_per_lane) + ',' +
               std::to_string(r.lanes) + ',' + xdetail::fmt6(r.speedup) +
               '\n';
      rep.figures.emplace_back("fig5.csv", std::move(fig));
    }
  if (not lrows.empty())
    {
      std::vector<LatencyRow> sorted = lrows;
      std::sort(sorted.begin(), sorted.end(),
                [](const LatencyRow& a, const LatencyRow& b)
                  {
                    if (a.kernel != b.kernel)
                      return a.kernel < b.kernel;
                    if (a.bytes_per_lane != b.bytes_per_lane)
                      return a.bytes_per_lane < b.bytes_per_lane;
                    return a.cuts < b.cuts;
                  });
      const std::pair<const char*, const char*> figs[3] = {
        {"fig6a.csv", "glsu"}, {"fig6b.csv", "reqi"}, {"fig6c.csv", "ring"}};
      for (const auto& [name, iface] : figs)
        {
          std::string fig = std::string("# utilization drop vs cuts on the ")
                            + iface + " interface\n";
          fig += "kernel,bytes_per_lane,cuts,utilization_drop_pp\n";
          for (const LatencyRow& r : sorted)
            if (r.interface == iface)
              fig += r.kernel + ',' + std::to_string(r.bytes_per_lane) +
                     ',' + std::to_string(r.cuts) + ',' +
                     xdetail::fmt6(r.drop_pp) + '\n';
          rep.figures.emplace_back(name, std::move(fig));
        }
    }

  // Summary text; empty inputs yield an empty summary.
  if (srows.empty() and lrows.empty())
    return rep;

  std::string s = "experiment report\n";
  {
    char buf[64];
    std::snprintf(buf, sizeof buf, "seed 0x%016llx\n",
                  static_cast<unsigned long long>(kDataSeed));
    s += buf;
  }
  if (not srows.empty())
    {
      unsigned min_lanes = srows.front().lanes;
      for (const ScalingRow& r : srows)
        min_lanes = std::min(min_lanes, r.lanes);
      s += "speedups normalized to the " + std::to_string(min_lanes) +
           "-lane";
      if (min_lanes % 4 == 0)
        s += " (" + std::to_string(min_lanes / 4) + "-cluster)";
      s += " instance\n";

      s += "\nscaling: " + std::to_string(srows.size()) + " rows\n";
      std::set<std::string> kernels;
      for (const ScalingRow& r : srows)
        kernels.insert(r.kernel);
      for (const std::string& k : kernels)
        {
          const ScalingRow* top = nullptr;
          for (const ScalingRow& r : srows)
            if (r.kernel == k and
                (not top or r.lanes > top->lanes or
                 (r.lanes == top->lanes and
                  r.bytes_per_lane > top->bytes_per_lane)))
              top = &r;
          s += "  " + k + ": " + xdetail::fmt6(top->flop_per_cycle) +
               " flop/cycle at " + std::to_string(top->lanes) + " lanes, " +
               std::to_string(top->bytes_per_lane) +
               " bytes/lane; utilization " +
               xdetail::fmt6(top->utilization) + "; speedup " +
               xdetail::fmt6(top->speedup) + "\n";
        }
    }
  if (not lrows.empty())
    {
      s += "\nlatency: " + std::to_string(lrows.size()) + " rows\n";
      std::set<std::string> ifaces;
      for (const LatencyRow& r : lrows)
        ifaces.insert(r.interface);
      for (const std::string& iface : ifaces)
        {
          const LatencyRow* worst = nullptr;
          for (const LatencyRow& r : lrows)
            if (r.interface == iface and
                (not worst or r.drop_pp > worst->drop_pp))
              worst = &r;
          s += "  " + iface + ": worst drop " + xdetail::fmt6(worst->drop_pp)
               + " pp (" + worst->kernel + ", " +
               std::to_string(worst->cuts) + " cuts, " +
               std::to_string(worst->bytes_per_lane) + " bytes/lane)\n";
        }
    }
  if (rep.missing_cells.empty())
    s += "\nmissing cells: none\n";
  else
    {
      s += "\nmissing cells: " + std::to_string(rep.missing_cells.size()) +
           "\n";
      for (const std::string& m : rep.missing_cells)
        s += "  " + m + "\n";
    }
  if (not rep.diagnostics.empty())
    {
      s += "diagnostics: " + std::to_string(rep.diagnostics.size()) + "\n";
      for (const std::string& d : rep.diagnostics)
        s += "  " + d + "\n";
    }
  rep.summary = std::move(s);
  return rep;
}

} // namespace araxl
