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

/// araxl-sim — command-line driver.
///
///   gen      generate a benchmark program plus its initial memory image
///   run      execute a program on the timed machine and print statistics
///   scaling  run the weak-scaling campaign and emit its CSV
///   latency  run the interface-latency campaign and emit its CSV
///   report   digest campaign CSVs into a summary and figure data files
///
/// `--check` makes run compare the final memory against the reference
/// model, and makes scaling/latency apply the acceptance thresholds; any
/// mismatch or violation exits nonzero.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "araxl/experiments.hpp"

namespace
{

using namespace araxl;

std::string read_file(const std::string& path)
{
  std::ifstream in(path, std::ios::binary);
  if (not in)
    throw Error("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content)
{
  std::ofstream out(path, std::ios::binary);
  if (not out)
    throw Error("cannot write '" + path + "'");
  out << content;
}

/// Machine shape shared by gen and run.
struct MachineFlags
{
  unsigned clusters = 2;
  unsigned lanes = 4;
  unsigned vlen = 0;
  unsigned glsu_cuts = 0;
  unsigned reqi_cuts = 0;
  unsigned ring_cuts = 0;

  MachineConfig config() const
  {
    MachineConfig cfg;
    cfg.clusters = clusters;
    cfg.lanes_per_cluster = lanes;
    cfg.vlen_bits = vlen;
    cfg.glsu_cuts = glsu_cuts;
    cfg.reqi_cuts = reqi_cuts;
    cfg.ring_cuts = ring_cuts;
    cfg.validate();
    return cfg;
  }
};

void add_machine_flags(CLI::App* cmd, MachineFlags& m)
{
  cmd->add_option("--clusters", m.clusters, "cluster count (power of two)")
    ->capture_default_str();
  cmd->add_option("--lanes", m.lanes, "lanes per cluster (power of two)")
    ->capture_default_str();
  cmd->add_option("--vlen", m.vlen,
                  "vector register length in bits (0 derives it)")
    ->capture_default_str();
  cmd->add_option("--glsu-cuts", m.glsu_cuts,
                  "register cuts on the memory interface")
    ->capture_default_str();
  cmd->add_option("--reqi-cuts", m.reqi_cuts,
                  "register cuts on the request broadcast")
    ->capture_default_str();
  cmd->add_option("--ring-cuts", m.ring_cuts,
                  "register cuts per inter-cluster ring link")
    ->capture_default_str();
}

int do_gen(const MachineFlags& m, const std::string& kernel,
           u64 bytes_per_lane, const std::string& out)
{
  const MachineConfig cfg = m.config();
  const KernelProgram kp =
    generate(parse_kernel(kernel), cfg, bytes_per_lane);
  if (out.empty())
    {
      std::fputs(kp.text.c_str(), stdout);
      return 0;
    }
  write_file(out, kp.text);
  kp.image.save(out + ".mem");
  std::printf("wrote %s (%zu lines) and %s (%llu bytes)\n", out.c_str(),
              static_cast<size_t>(
                std::count(kp.text.begin(), kp.text.end(), '\n')),
              (out + ".mem").c_str(),
              static_cast<unsigned long long>(kp.image.size()));
  return 0;
}

int do_run(const MachineFlags& m, const std::string& program_path,
           const std::string& kernel, u64 bytes_per_lane, bool check)
{
  const MachineConfig cfg = m.config();

  Program prog;
  MemoryImage image{0, cfg.mem_size};
  u64 flops = 0;
  bool have_flops = false;
  if (not program_path.empty())
    {
      prog = parse_program(read_file(program_path));
      const std::string mem_path = program_path + ".mem";
      if (std::filesystem::exists(mem_path))
        image = MemoryImage::load(mem_path);
    }
  else if (not kernel.empty())
    {
      KernelProgram kp = generate(parse_kernel(kernel), cfg, bytes_per_lane);
      prog = std::move(kp.program);
      image = std::move(kp.image);
      flops = kp.flops;
      have_flops = true;
    }
  else
    throw Error("run needs a program file or --kernel");

  // The reference execution starts from the same image as the timed run.
  GoldenResult golden;
  if (check)
    golden = golden_execute(prog, cfg, image);

  const EngineResult res = engine_execute(prog, cfg, std::move(image));
  if (not have_flops)
    flops = res.stats.flops;

  const f64 util = utilization(res.stats, cfg);
  std::printf("cycles        %llu\n",
              static_cast<unsigned long long>(res.stats.total_cycles));
  std::printf("instructions  %llu\n",
              static_cast<unsigned long long>(res.executed));
  std::printf("flops         %llu\n", static_cast<unsigned long long>(flops));
  std::printf("flop/cycle    %.6f\n",
              res.stats.total_cycles
                ? static_cast<f64>(flops) /
                    static_cast<f64>(res.stats.total_cycles)
                : 0.0);
  std::printf("utilization   %.6f\n", util);

  if (check)
    {
      if (res.memory.bytes() != golden.memory.bytes())
        {
          std::fprintf(stderr, "memory differs from the reference model\n");
          return 1;
        }
      std::printf("memory matches the reference model\n");
    }
  return 0;
}

/// Campaign shape shared by scaling and latency.
struct PlanFlags
{
  std::vector<std::string> kernels;
  std::vector<unsigned> clusters{2, 4, 8, 16};
  unsigned lanes = 4;
  std::vector<u64> bytes_per_lane{64, 128, 256, 512};
  std::vector<unsigned> glsu_cuts{0, 1, 2, 4};
  std::vector<unsigned> reqi_cuts{0, 1};
  std::vector<unsigned> ring_cuts{0, 1};

  ExperimentPlan plan() const
  {
    ExperimentPlan p;
    if (not kernels.empty())
      {
        p.kernels.clear();
        for (const std::string& name : kernels)
          p.kernels.push_back(parse_kernel(name));
      }
    p.cluster_counts = clusters;
    p.lanes_per_cluster = lanes;
    p.bytes_per_lane = bytes_per_lane;
    p.glsu_cuts = glsu_cuts;
    p.reqi_cuts = reqi_cuts;
    p.ring_cuts = ring_cuts;
    p.validate();
    return p;
  }
};

void add_plan_flags(CLI::App* cmd, PlanFlags& p)
{
  cmd->add_option("--kernel", p.kernels,
                  "kernels to sweep (default: all six)")
    ->delimiter(',');
  cmd->add_option("--clusters", p.clusters, "cluster counts to sweep")
    ->delimiter(',')
    ->capture_default_str();
  cmd->add_option("--lanes", p.lanes, "lanes per cluster")
    ->capture_default_str();
  cmd->add_option("--bytes-per-lane", p.bytes_per_lane,
                  "problem bytes per lane to sweep")
    ->delimiter(',')
    ->capture_default_str();
  cmd->add_option("--glsu-cuts", p.glsu_cuts,
                  "memory-interface cut counts to sweep")
    ->delimiter(',')
    ->capture_default_str();
  cmd->add_option("--reqi-cuts", p.reqi_cuts,
                  "request-broadcast cut counts to sweep")
    ->delimiter(',')
    ->capture_default_str();
  cmd->add_option("--ring-cuts", p.ring_cuts,
                  "ring-link cut counts to sweep")
    ->delimiter(',')
    ->capture_default_str();
}

int emit_campaign(const std::string& csv,
                  const std::vector<std::string>& violations,
                  const std::string& out, bool check)
{
  if (out.empty())
    std::fputs(csv.c_str(), stdout);
  else
    {
      write_file(out, csv);
      std::printf("wrote %s\n", out.c_str());
    }
  if (check)
    {
      for (const std::string& v : violations)
        std::fprintf(stderr, "violation: %s\n", v.c_str());
      if (not violations.empty())
        return 1;
      std::printf("all thresholds hold\n");
    }
  return 0;
}

int do_report(const std::string& scaling_path,
              const std::string& latency_path, const std::string& out_dir)
{
  const std::string scaling_csv =
    scaling_path.empty() ? std::string() : read_file(scaling_path);
  const std::string latency_csv =
    latency_path.empty() ? std::string() : read_file(latency_path);
  const Report rep = report(scaling_csv, latency_csv);

  std::fputs(rep.summary.c_str(), stdout);
  for (const std::string& d : rep.diagnostics)
    std::fprintf(stderr, "%s\n", d.c_str());
  if (not rep.figures.empty())
    {
      std::filesystem::create_directories(out_dir);
      for (const auto& [name, content] : rep.figures)
        {
          const std::string path =
            (std::filesystem::path(out_dir) / name).string();
          write_file(path, content);
          std::printf("wrote %s\n", path.c_str());
        }
    }
  return 0;
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"araxl-sim: cycle-approximate long-vector cluster simulator"};
  app.require_subcommand(1);

  MachineFlags machine;
  std::string kernel;
  u64 bytes_per_lane = 512;
  std::string out;
  std::string program_path;
  bool check = false;
  PlanFlags plan;
  std::string scaling_path;
  std::string latency_path;
  std::string report_dir = ".";

  CLI::App* gen = app.add_subcommand(
    "gen", "generate a benchmark program and its memory image");
  add_machine_flags(gen, machine);
  gen->add_option("--kernel", kernel, "benchmark kernel name")->required();
  gen->add_option("--bytes-per-lane", bytes_per_lane,
                  "problem bytes per lane")
    ->capture_default_str();
  gen->add_option("--out", out,
                  "program file to write; its memory image goes to "
                  "<out>.mem (default: program text on stdout)");

  CLI::App* run = app.add_subcommand(
    "run", "execute a program on the timed machine");
  add_machine_flags(run, machine);
  run->add_option("program", program_path,
                  "program text file; <program>.mem is loaded when present");
  run->add_option("--kernel", kernel,
                  "generate and run this kernel instead of loading a file");
  run->add_option("--bytes-per-lane", bytes_per_lane,
                  "problem bytes per lane for --kernel")
    ->capture_default_str();
  run->add_flag("--check", check,
                "compare the final memory against the reference model");

  CLI::App* scaling = app.add_subcommand(
    "scaling", "run the weak-scaling campaign and emit its CSV");
  add_plan_flags(scaling, plan);
  scaling->add_option("--out", out, "CSV file (default: stdout)");
  scaling->add_flag("--check", check, "apply the acceptance thresholds");

  CLI::App* latency = app.add_subcommand(
    "latency", "run the interface-latency campaign and emit its CSV");
  add_plan_flags(latency, plan);
  latency->add_option("--out", out, "CSV file (default: stdout)");
  latency->add_flag("--check", check, "apply the acceptance thresholds");

  CLI::App* rep = app.add_subcommand(
    "report", "summarize campaign CSVs and write figure data files");
  rep->add_option("scaling", scaling_path, "weak-scaling campaign CSV");
  rep->add_option("latency", latency_path, "interface-latency campaign CSV");
  rep->add_option("--out", report_dir, "directory for the figure files")
    ->capture_default_str();

  try
    {
      app.parse(argc, argv);
      if (*gen)
        return do_gen(machine, kernel, bytes_per_lane, out);
      if (*run)
        return do_run(machine, program_path, kernel, bytes_per_lane, check);
      if (*scaling)
        {
          const std::vector<ScalingRow> rows = run_scaling(plan.plan());
          return emit_campaign(to_csv(rows), check_scaling(rows), out,
                               check);
        }
      if (*latency)
        {
          const std::vector<LatencyRow> rows = run_latency(plan.plan());
          return emit_campaign(to_csv(rows), check_latency(rows), out,
                               check);
        }
      if (*rep)
        return do_report(scaling_path, latency_path, report_dir);
    }
  catch (const CLI::ParseError& e)
    {
      return app.exit(e);
    }
  catch (const std::exception& e)
    {
      std::fprintf(stderr, "araxl-sim: %s\n", e.what());
      return 1;
    }
  return 0;
}
