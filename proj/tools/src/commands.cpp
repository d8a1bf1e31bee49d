// Copyright 2026 The eetsim Authors
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

#include "eetsim_cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "eetsim/errors.hpp"
#include "eetsim/units.hpp"
#include "eetsim_cli/output.hpp"

namespace eetsim::cli {
namespace {

using Json = nlohmann::ordered_json;

std::string output_path(const RunConfig& config, const Overrides& flags) {
  if (flags.out) return *flags.out;
  if (config.output) return *config.output;
  throw ValidationError("no output path: pass --out or set 'output' in the config");
}

RunConfig with_overrides(RunConfig config, const Overrides& flags) {
  if (flags.engine) config.engine = flags.engine;
  if (flags.frame) {
    if (*flags.frame == Frame::kReduced) {
      config.engine = Engine::kReduced;
    } else {
      config.frame = *flags.frame;
    }
  }
  if (flags.format) config.format = *flags.format;
  return config;
}

double rounded(double v) { return std::strtod(sci(v).c_str(), nullptr); }

}  // namespace

int cmd_simulate(const RunConfig& base, const Overrides& flags, std::ostream& out) {
  const RunConfig config = with_overrides(base, flags);
  const Engine engine = config.resolved_engine(Engine::kFull);
  const SimulationConfig sim = config.simulation(engine);
  const std::string path = output_path(config, flags);
  const std::string hash = hash_hex(config_hash(config, engine));

  // Metadata goes out first so an aborted run still documents its inputs.
  write_file(path + ".meta.json", metadata_json(config, engine, sim));
  const TrajectoryRecord record = simulate(sim, config.params);
  const TransferMetrics metrics = transfer_metrics(record, config.metrics_options());
  write_file(path, trajectory_text(record, config.format, hash));
  write_file(path + ".metrics.json", metrics_json(metrics, hash));

  const Sample& last = record.final();
  char buf[160];
  std::snprintf(buf, sizeof buf, "t = %.3f ns  P1..P4 = %.4f %.4f %.4f %.4f  Pa = %.4f  Pb = %.4f\n",
                units::to_ns(last.time), last.qubit[0], last.qubit[1], last.qubit[2],
                last.qubit[3], last.resonator_a, last.resonator_b);
  out << buf;
  if (metrics.equilibration_time) {
    std::snprintf(buf, sizeof buf, "equilibration %.3f ns", units::to_ns(*metrics.equilibration_time));
    out << buf;
  } else {
    out << "equilibration not-reached";
  }
  std::snprintf(buf, sizeof buf, "  efficiency %.4f at %.3f ns  trapped %.4f\n",
                metrics.efficiency, units::to_ns(metrics.measured_at), metrics.trapped);
  out << buf << "wrote " << path << '\n';
  return kExitOk;
}

int cmd_couplings(const RunConfig& config, std::ostream& out) {
  require_dispersive(config.params);
  out << couplings_text(config.params);
  return kExitOk;
}

int cmd_sweep(const RunConfig& base, const Overrides& flags, std::ostream& out) {
  RunConfig config = with_overrides(base, flags);
  if (!config.has_grid) {
    throw ValidationError("sweep needs a grid: set g1_min/max/step, g2_*, gab_*");
  }
  // Long enough to tell a slow equilibration from one that never happens.
  if (config.given.count("t_final") == 0) config.t_final = 400e-9;
  const Engine engine = config.resolved_engine(Engine::kReduced);
  const std::string path = output_path(config, flags);

  SweepOptions options;
  options.config = config.simulation(engine);
  options.base = config.params;
  options.metrics = config.metrics;
  options.workers = flags.workers;
  options.checkpoint_path = config.checkpoint.value_or(path + ".checkpoint");
  options.checkpoint_every = config.checkpoint_every;
  options.resume = flags.resume;

  const SweepResult result = sweep(config.grid, options);
  write_file(path, checkpoint_text(config.grid, options, result.records));

  Json summary;
  char hash[32];
  std::snprintf(hash, sizeof hash, "%016llx",
                static_cast<unsigned long long>(sweep_hash(config.grid, options)));
  summary["config_hash"] = hash;
  summary["engine"] = engine_name(engine);
  summary["objective"] = objective_name(config.grid.objective);
  summary["points"] = result.records.size();
  summary["resumed"] = result.resumed;
  std::size_t counts[3] = {0, 0, 0};
  for (const SweepRecord& r : result.records) ++counts[static_cast<int>(r.status)];
  summary["ok"] = counts[0];
  summary["not_reached"] = counts[1];
  summary["failed"] = counts[2];
  if (result.best) {
    const SweepRecord& b = result.records[*result.best];
    summary["best"] = {{"g1_mhz", rounded(units::to_mhz(b.g1))},
                       {"g2_mhz", rounded(units::to_mhz(b.g2))},
                       {"gab_mhz", rounded(units::to_mhz(b.g_ab))},
                       {"J12_over_J23", rounded(b.ratio)},
                       {"objective_value", b.objective_value}};
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "best: g1 = %.1f MHz  g2 = %.1f MHz  g_ab = %.1f MHz  J12/J23 = %.4f  %s = %.6g\n",
                  units::to_mhz(b.g1), units::to_mhz(b.g2), units::to_mhz(b.g_ab), b.ratio,
                  objective_name(config.grid.objective).c_str(), b.objective_value);
    out << buf;
  } else {
    summary["best"] = nullptr;
    out << "best: none (no point reached the objective)\n";
  }
  write_file(path + ".summary.json", summary.dump(2) + "\n");
  out << result.records.size() << " points (" << result.resumed << " from checkpoint), wrote "
      << path << '\n';
  return kExitOk;
}

FrameComparison compare_frames(const RunConfig& config) {
  if (config.engine == Engine::kReduced) {
    throw ValidationError("compare-frames needs the full engine");
  }
  const TrajectoryRecord lab = simulate(config.simulation(Frame::kLab), config.params);
  const TrajectoryRecord rot = simulate(config.simulation(Frame::kInteraction), config.params);
  FrameComparison c;
  std::size_t j = 0;
  for (const Sample& s : lab.samples) {
    while (j < rot.samples.size() && rot.samples[j].time < s.time - 1e-15) ++j;
    if (j == rot.samples.size()) break;
    const Sample& r = rot.samples[j];
    if (std::abs(r.time - s.time) > 1e-15) continue;
    ++c.compared;
    const double d[] = {s.qubit[0] - r.qubit[0],        s.qubit[1] - r.qubit[1],
                        s.qubit[2] - r.qubit[2],        s.qubit[3] - r.qubit[3],
                        s.resonator_a - r.resonator_a, s.resonator_b - r.resonator_b,
                        s.ground - r.ground};
    for (double v : d) {
      if (std::abs(v) > c.max_deviation) {
        c.max_deviation = std::abs(v);
        c.worst_time = s.time;
      }
    }
  }
  if (c.compared == 0) throw ValidationError("lab and interaction runs share no sample times");
  return c;
}

int cmd_compare_frames(const RunConfig& base, const Overrides& flags, std::ostream& out) {
  const RunConfig config = with_overrides(base, flags);
  const FrameComparison c = compare_frames(config);
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "max population deviation %.3e at %.3f ns over %zu samples (tolerance %.1e)\n",
                c.max_deviation, units::to_ns(c.worst_time), c.compared, kFrameTolerance);
  out << buf;
  if (c.max_deviation < kFrameTolerance) {
    out << "frames agree\n";
    return kExitOk;
  }
  out << "frames disagree\n";
  return kExitFailure;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exciton energy transfer in a superconducting qubit circuit", "eetsim"};
  app.require_subcommand(1);

  std::string config_path;
  Overrides flags;
  std::string out_path, format, engine, frame;

  auto common = [&](CLI::App* sub, bool outputs) {
    sub->add_option("--config", config_path, "Run configuration file")->required();
    if (outputs) {
      sub->add_option("--out", out_path, "Output path");
      sub->add_option("--format", format, "Trajectory format")
          ->check(CLI::IsMember({"csv", "jsonl"}));
    }
    sub->add_option("--engine", engine, "Simulation engine")
        ->check(CLI::IsMember({"full", "reduced"}));
    sub->add_option("--frame", frame, "Full-engine frame")
        ->check(CLI::IsMember({"lab", "interaction"}));
  };
  CLI::App* simulate_cmd = app.add_subcommand("simulate", "Integrate one trajectory");
  common(simulate_cmd, true);
  CLI::App* couplings_cmd = app.add_subcommand("couplings", "Print the effective coupling table");
  couplings_cmd->add_option("--config", config_path, "Run configuration file")->required();
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Sweep g1 = g4, g2 = g3 and g_ab");
  common(sweep_cmd, true);
  sweep_cmd->add_option("--workers", flags.workers, "Worker threads")
      ->check(CLI::Range(1, 1024));
  sweep_cmd->add_flag("--resume", flags.resume, "Continue from the checkpoint");
  CLI::App* compare_cmd =
      app.add_subcommand("compare-frames", "Check lab and interaction frames agree");
  common(compare_cmd, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitFailure;
  }

  try {
    if (!out_path.empty()) flags.out = out_path;
    if (!format.empty()) flags.format = format_from_name(format);
    if (!engine.empty()) flags.engine = engine_from_name(engine);
    if (!frame.empty()) flags.frame = frame_from_name(frame);
    const RunConfig config = load_config(config_path);
    if (*simulate_cmd) return cmd_simulate(config, flags, out);
    if (*couplings_cmd) return cmd_couplings(config, out);
    if (*sweep_cmd) return cmd_sweep(config, flags, out);
    return cmd_compare_frames(config, flags, out);
  } catch (const IoError& e) {
    err << "eetsim: " << e.what() << '\n';
    return kExitIo;
  } catch (const PhysicalityError& e) {
    err << "eetsim: unphysical state: " << e.what() << '\n';
    return kExitFailure;
  } catch (const Error& e) {
    err << "eetsim: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace eetsim::cli
