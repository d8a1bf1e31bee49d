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

#include <algorithm>
#include <atomic>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>
#include <tuple>

#include "eetsim/errors.hpp"
#include "eetsim/experiments.hpp"
#include "eetsim/units.hpp"

namespace eetsim {
namespace {

constexpr const char* kColumns =
    "g1_mhz,g2_mhz,gab_mhz,J12_over_J23,objective_value,status";

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.8e", v);
  return buf;
}

std::string exact(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Round-trips through the checkpoint representation.
double round9(double v) { return std::strtod(sci(v).c_str(), nullptr); }

std::string axis_text(const SweepAxis& a) {
  return sci(units::to_mhz(a.min)) + ":" + sci(units::to_mhz(a.max)) + ":" +
         sci(units::to_mhz(a.step));
}

struct GridPoint {
  double g1, g2, g_ab;
};

std::vector<GridPoint> grid_points(const SweepGrid& grid) {
  std::vector<GridPoint> out;
  for (double g1 : grid.g1.values()) {
    for (double g2 : grid.g2.values()) {
      for (double g_ab : grid.g_ab.values()) out.push_back({g1, g2, g_ab});
    }
  }
  return out;
}

PointStatus status_from_name(const std::string& name) {
  for (PointStatus s : {PointStatus::kOk, PointStatus::kNotReached, PointStatus::kFailed}) {
    if (point_status_name(s) == name) return s;
  }
  throw CheckpointError("unknown status '" + name + "'");
}

bool close_mhz(double parsed, double expected) {
  return std::abs(parsed - expected) <= 1e-7 * std::max(1.0, std::abs(expected));
}

void write_atomically(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write checkpoint '" + tmp + "'");
    out << text;
    if (!out.flush()) throw IoError("cannot write checkpoint '" + tmp + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot replace checkpoint '" + path + "': " + ec.message());
}

}  // namespace

std::vector<double> SweepAxis::values() const {
  std::vector<double> out;
  const auto count =
      static_cast<std::size_t>(std::floor((max - min) / step + 1e-9)) + 1;
  for (std::size_t k = 0; k < count; ++k) out.push_back(min + static_cast<double>(k) * step);
  return out;
}

std::string objective_name(Objective objective) {
  return objective == Objective::kEquilibrationTime ? "equilibration_time"
                                                    : "efficiency_at_t";
}

Objective objective_from_name(std::string_view name) {
  if (name == "equilibration_time") return Objective::kEquilibrationTime;
  if (name == "efficiency_at_t") return Objective::kEfficiencyAtTime;
  throw ValidationError("unknown objective '" + std::string(name) +
                        "' (expected equilibration_time or efficiency_at_t)");
}

std::size_t SweepGrid::size() const {
  return g1.values().size() * g2.values().size() * g_ab.values().size();
}

SweepGrid SweepGrid::point(double g1, double g2, double g_ab) {
  SweepGrid grid;
  grid.g1 = {g1, g1, 1.0};
  grid.g2 = {g2, g2, 1.0};
  grid.g_ab = {g_ab, g_ab, 1.0};
  return grid;
}

void validate(const SweepGrid& grid) {
  auto check = [](const SweepAxis& a, const char* name) {
    if (!std::isfinite(a.min) || !std::isfinite(a.max) || !std::isfinite(a.step)) {
      throw ValidationError(std::string(name) + " axis must be finite");
    }
    if (a.min < 0.0) throw ValidationError(std::string(name) + " axis must be non-negative");
    if (a.min > a.max) throw ValidationError(std::string(name) + " axis needs min <= max");
    if (a.step <= 0.0) throw ValidationError(std::string(name) + " axis needs step > 0");
  };
  check(grid.g1, "g1");
  check(grid.g2, "g2");
  check(grid.g_ab, "g_ab");
  if (grid.objective == Objective::kEfficiencyAtTime && !(grid.objective_time >= 0.0)) {
    throw ValidationError("objective time must be non-negative");
  }
}

std::string point_status_name(PointStatus status) {
  switch (status) {
    case PointStatus::kOk:
      return "ok";
    case PointStatus::kNotReached:
      return "not-reached";
    case PointStatus::kFailed:
      return "failed";
  }
  return "failed";
}

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t sweep_hash(const SweepGrid& grid, const SweepOptions& options) {
  std::ostringstream s;
  const auto& c = options.config;
  const auto& p = options.base;
  s << "g1=" << exact(grid.g1.min) << ':' << exact(grid.g1.max) << ':' << exact(grid.g1.step)
    << ";g2=" << exact(grid.g2.min) << ':' << exact(grid.g2.max) << ':' << exact(grid.g2.step)
    << ";gab=" << exact(grid.g_ab.min) << ':' << exact(grid.g_ab.max) << ':'
    << exact(grid.g_ab.step) << ";objective=" << objective_name(grid.objective)
    << ";objective_time=" << exact(grid.objective_time)
    << ";frame=" << frame_name(c.frame) << ";n_max=" << c.n_max
    << ";t_final=" << exact(c.t_final) << ";dt=" << exact(c.dt)
    << ";stride=" << c.record_stride << ";initial=" << basis_state_name(c.initial_state)
    << ";spread=" << exact(options.metrics.spread)
    << ";window=" << exact(options.metrics.window)
    << ";measure=" << (options.metrics.measure_time ? exact(*options.metrics.measure_time) : "-")
    << ";omega_a=" << exact(p.omega_a) << ";omega_b=" << exact(p.omega_b)
    << ";kappa=" << exact(p.kappa_a) << ',' << exact(p.kappa_b)
    << ";T=" << exact(p.temperature)
    << ";occupation=" << static_cast<int>(p.qubit_occupation)
    << ";bridge=" << static_cast<int>(p.bridge);
  for (int q = 0; q < kQubitCount; ++q) {
    s << ";q" << q << '=' << exact(p.omega[q]) << ',' << exact(p.gamma[q]) << ','
      << exact(p.gphi[q]);
  }
  return fnv1a(s.str());
}

SweepRecord evaluate_point(double g1, double g2, double g_ab, const SweepGrid& grid,
                           const SweepOptions& options) {
  SweepRecord r;
  r.g1 = g1;
  r.g2 = g2;
  r.g_ab = g_ab;
  r.ratio = std::numeric_limits<double>::quiet_NaN();
  CircuitParams p = options.base;
  p.g = {g1, g2, g2, g1};
  p.g_ab = g_ab;
  MetricsOptions metrics = options.metrics;
  if (grid.objective == Objective::kEfficiencyAtTime) metrics.measure_time = grid.objective_time;
  try {
    validate(p);
    r.ratio = round9(effective_couplings(p).clustering_ratio());
    const TransferMetrics m = transfer_metrics(simulate(options.config, p), metrics);
    r.metrics = m;
    if (grid.objective == Objective::kEquilibrationTime) {
      if (m.equilibration_time) {
        r.objective_value = round9(units::to_ns(*m.equilibration_time));
      } else {
        r.status = PointStatus::kNotReached;
        r.objective_value = std::numeric_limits<double>::infinity();
      }
    } else {
      r.objective_value = round9(m.efficiency);
    }
  } catch (const Error&) {
    r.status = PointStatus::kFailed;
    r.objective_value = std::numeric_limits<double>::quiet_NaN();
    r.metrics.reset();
  }
  return r;
}

std::optional<std::size_t> select_best(const std::vector<SweepRecord>& records,
                                       Objective objective) {
  std::optional<std::size_t> best;
  auto key = [objective](const SweepRecord& r) {
    const double v =
        objective == Objective::kEquilibrationTime ? r.objective_value : -r.objective_value;
    return std::make_tuple(v, r.g1, r.g2, r.g_ab);
  };
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (records[i].status != PointStatus::kOk) continue;
    if (!best || key(records[i]) < key(records[*best])) best = i;
  }
  return best;
}

std::string checkpoint_text(const SweepGrid& grid, const SweepOptions& options,
                            const std::vector<SweepRecord>& records) {
  std::ostringstream out;
  char hash[32];
  std::snprintf(hash, sizeof hash, "%016" PRIx64, sweep_hash(grid, options));
  out << "# eetsim sweep checkpoint\n";
  out << "# grid g1_mhz=" << axis_text(grid.g1) << " g2_mhz=" << axis_text(grid.g2)
      << " gab_mhz=" << axis_text(grid.g_ab) << " objective=" << objective_name(grid.objective)
      << " engine=" << frame_name(options.config.frame) << " points=" << grid.size() << "\n";
  out << "# config_hash=" << hash << "\n";
  out << kColumns << "\n";
  for (const SweepRecord& r : records) {
    out << sci(units::to_mhz(r.g1)) << ',' << sci(units::to_mhz(r.g2)) << ','
        << sci(units::to_mhz(r.g_ab)) << ',' << sci(r.ratio) << ','
        << sci(r.objective_value) << ',' << point_status_name(r.status) << "\n";
  }
  return out.str();
}

std::vector<SweepRecord> read_checkpoint(const std::string& path, const SweepGrid& grid,
                                         const SweepOptions& options) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read checkpoint '" + path + "'");
  char hash[32];
  std::snprintf(hash, sizeof hash, "%016" PRIx64, sweep_hash(grid, options));
  const std::string expected_hash = std::string("# config_hash=") + hash;

  const std::vector<GridPoint> points = grid_points(grid);
  std::vector<SweepRecord> records;
  std::string line;
  bool hash_seen = false;
  bool header_seen = false;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (line.rfind("# config_hash=", 0) == 0) {
        if (line != expected_hash) {
          throw CheckpointError("checkpoint '" + path +
                                "' was written for a different grid or configuration");
        }
        hash_seen = true;
      }
      continue;
    }
    if (!header_seen) {
      if (line != kColumns) throw CheckpointError("checkpoint has an unexpected header row");
      header_seen = true;
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    if (cells.size() != 6) {
      throw CheckpointError("checkpoint line " + std::to_string(line_no) +
                            " does not have 6 columns");
    }
    if (records.size() >= points.size()) {
      throw CheckpointError("checkpoint has more rows than the grid");
    }
    double values[5];
    for (int k = 0; k < 5; ++k) {
      char* end = nullptr;
      values[k] = std::strtod(cells[static_cast<std::size_t>(k)].c_str(), &end);
      if (end == cells[static_cast<std::size_t>(k)].c_str() || *end != '\0') {
        throw CheckpointError("checkpoint line " + std::to_string(line_no) +
                              " has a malformed number");
      }
    }
    const GridPoint& gp = points[records.size()];
    if (!close_mhz(values[0], units::to_mhz(gp.g1)) ||
        !close_mhz(values[1], units::to_mhz(gp.g2)) ||
        !close_mhz(values[2], units::to_mhz(gp.g_ab))) {
      throw CheckpointError("checkpoint line " + std::to_string(line_no) +
                            " does not match the grid point order");
    }
    SweepRecord r;
    r.g1 = gp.g1;
    r.g2 = gp.g2;
    r.g_ab = gp.g_ab;
    r.ratio = values[3];
    r.objective_value = values[4];
    r.status = status_from_name(cells[5]);
    records.push_back(r);
  }
  if (!hash_seen || !header_seen) {
    throw CheckpointError("checkpoint '" + path + "' is missing its header");
  }
  return records;
}

SweepResult sweep(const SweepGrid& grid, const SweepOptions& options) {
  validate(grid);
  validate(options.config);
  const std::size_t total = grid.size();
  if (options.config.frame != Frame::kReduced && total > kFullEngineGridLimit) {
    throw ValidationError("grid of " + std::to_string(total) +
                          " points exceeds the full-space engine limit of " +
                          std::to_string(kFullEngineGridLimit) +
                          "; use the reduced engine or coarsen the grid");
  }
  const std::vector<GridPoint> points = grid_points(grid);
  const bool checkpointing = !options.checkpoint_path.empty();

  std::vector<std::optional<SweepRecord>> slots(total);
  SweepResult result;
  if (options.resume && checkpointing && std::filesystem::exists(options.checkpoint_path)) {
    std::vector<SweepRecord> done = read_checkpoint(options.checkpoint_path, grid, options);
    result.resumed = done.size();
    for (std::size_t i = 0; i < done.size(); ++i) slots[i] = std::move(done[i]);
  }

  std::mutex collector;
  std::size_t prefix = result.resumed;
  std::size_t last_written = result.resumed;
  std::exception_ptr failure;
  std::atomic<std::size_t> next{result.resumed};

  auto completed_prefix = [&] {
    std::vector<SweepRecord> out;
    for (std::size_t i = 0; i < prefix; ++i) out.push_back(*slots[i]);
    return out;
  };

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= total) return;
      try {
        SweepRecord r = evaluate_point(points[i].g1, points[i].g2, points[i].g_ab, grid, options);
        std::lock_guard<std::mutex> lock(collector);
        slots[i] = std::move(r);
        while (prefix < total && slots[prefix]) ++prefix;
        if (checkpointing && prefix - last_written >= options.checkpoint_every) {
          write_atomically(options.checkpoint_path,
                           checkpoint_text(grid, options, completed_prefix()));
          last_written = prefix;
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(collector);
        if (!failure) failure = std::current_exception();
        next.store(total);
        return;
      }
    }
  };

  const std::size_t remaining = total - result.resumed;
  const auto workers = static_cast<std::size_t>(std::max(1, options.workers));
  const std::size_t count = std::min(workers, std::max<std::size_t>(remaining, 1));
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < count; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  result.records = completed_prefix();
  if (checkpointing) {
    write_atomically(options.checkpoint_path, checkpoint_text(grid, options, result.records));
  }
  result.best = select_best(result.records, grid.objective);
  return result;
}

}  // namespace eetsim
