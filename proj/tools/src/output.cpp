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

#include "eetsim_cli/output.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "eetsim/errors.hpp"
#include "eetsim/units.hpp"

namespace eetsim::cli {
namespace {

using Json = nlohmann::ordered_json;

// Value that serializes with the same 9 significant digits as sci().
Json num(double v) {
  if (!std::isfinite(v)) return std::isinf(v) ? Json("inf") : Json(nullptr);
  return std::strtod(sci(v).c_str(), nullptr);
}

const char* const kColumns[] = {"time_ns", "P1", "P2", "P3", "P4",
                                "Pa",      "Pb", "trace", "purity"};

}  // namespace

std::string sci(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.8e", value);
  return buf;
}

std::string trajectory_text(const TrajectoryRecord& record, OutputFormat format,
                            const std::string& hash) {
  std::string out;
  if (format == OutputFormat::kCsv) {
    out += "# eetsim trajectory config_hash=" + hash + "\n";
    for (std::size_t c = 0; c < std::size(kColumns); ++c) {
      out += (c ? "," : "") + std::string(kColumns[c]);
    }
    out += '\n';
  } else {
    out += "{\"config_hash\":\"" + hash + "\",\"columns\":[";
    for (std::size_t c = 0; c < std::size(kColumns); ++c) {
      out += (c ? ",\"" : "\"") + std::string(kColumns[c]) + "\"";
    }
    out += "]}\n";
  }
  for (const Sample& s : record.samples) {
    const double row[] = {units::to_ns(s.time), s.qubit[0], s.qubit[1],   s.qubit[2],
                          s.qubit[3],          s.resonator_a, s.resonator_b, s.trace,
                          s.purity};
    if (format == OutputFormat::kCsv) {
      for (std::size_t c = 0; c < std::size(row); ++c) out += (c ? "," : "") + sci(row[c]);
    } else {
      out += '{';
      for (std::size_t c = 0; c < std::size(row); ++c) {
        out += (c ? ",\"" : "\"") + std::string(kColumns[c]) + "\":" + sci(row[c]);
      }
      out += '}';
    }
    out += '\n';
  }
  return out;
}

std::string metrics_json(const TransferMetrics& metrics, const std::string& hash) {
  Json j;
  j["config_hash"] = hash;
  j["equilibration_time_ns"] = metrics.equilibration_time
                                   ? num(units::to_ns(*metrics.equilibration_time))
                                   : Json("not-reached");
  j["measured_at_ns"] = num(units::to_ns(metrics.measured_at));
  j["efficiency"] = num(metrics.efficiency);
  j["trapped"] = num(metrics.trapped);
  j["peak_p4"] = num(metrics.peak_p4);
  return j.dump(2) + "\n";
}

std::string metadata_json(const RunConfig& config, Engine engine, const SimulationConfig& sim) {
  const CircuitParams& p = config.params;
  auto inverse_us = [](double rate) {
    return rate > 0.0 ? num(1e6 / rate) : Json("inf");
  };
  Json j;
  j["config_hash"] = hash_hex(config_hash(config, engine));
  j["given"] = config.given;
  j["preset"] = config.preset ? Json(*config.preset) : Json(nullptr);
  j["geometry"] = geometry_name(config.geometry);
  j["engine"] = engine_name(engine);
  j["frame"] = frame_name(sim.frame);
  j["n_max"] = sim.n_max;
  j["t_final_ns"] = num(units::to_ns(sim.t_final));
  j["dt_ps"] = num(sim.dt * 1e12);
  j["record_stride"] = sim.record_stride;
  j["initial_state"] = basis_state_name(sim.initial_state);

  Json params;
  params["omega_a_ghz"] = num(units::to_ghz(p.omega_a));
  params["omega_b_ghz"] = num(units::to_ghz(p.omega_b));
  for (int q = 0; q < kQubitCount; ++q) {
    const std::string n = std::to_string(q + 1);
    params["omega" + n + "_ghz"] = num(units::to_ghz(p.omega[q]));
    params["g" + n + "_mhz"] = num(units::to_mhz(p.g[q]));
    params["delta" + n + "_ghz"] = num(units::to_ghz(p.detuning(q)));
    params["t1_" + n + "_us"] = inverse_us(p.gamma[q]);
    params["tphi_" + n + "_us"] = inverse_us(p.gphi[q]);
  }
  params["g_ab_mhz"] = num(units::to_mhz(p.g_ab));
  params["tau_a_us"] = inverse_us(p.kappa_a);
  params["tau_b_us"] = inverse_us(p.kappa_b);
  params["temperature_mk"] = num(p.temperature * 1e3);
  params["qubit_occupation"] =
      p.qubit_occupation == QubitOccupation::kAsPrinted ? "as-printed" : "bose-einstein";
  j["params"] = params;

  const MetricsOptions m = config.metrics_options();
  j["metrics_options"] = {{"eq_spread", num(m.spread)},
                          {"eq_window_ns", num(units::to_ns(m.window))},
                          {"measure_time_ns", m.measure_time
                                                  ? num(units::to_ns(*m.measure_time))
                                                  : Json(nullptr)}};

  try {
    const CouplingTable t = effective_couplings(p);
    Json c;
    c["J12_mhz"] = num(units::to_mhz(t.J12));
    c["J34_mhz"] = num(units::to_mhz(t.J34));
    c["J23_mhz"] = num(units::to_mhz(t.J23));
    c["J13_mhz"] = num(units::to_mhz(t.J13));
    c["J24_mhz"] = num(units::to_mhz(t.J24));
    c["J14_mhz"] = num(units::to_mhz(t.J14));
    for (int q = 0; q < kQubitCount; ++q) {
      c["eps" + std::to_string(q + 1) + "_ghz"] = num(units::to_ghz(t.eps[q]));
    }
    c["ratio_J12_J23"] = num(t.clustering_ratio());
    c["energy_ordered"] = t.energy_ordered();
    j["couplings"] = c;
  } catch (const Error& e) {
    j["couplings"] = {{"error", e.what()}};
  }
  return j.dump(2) + "\n";
}

std::string couplings_text(const CircuitParams& p) {
  const DispersiveCheck check = check_dispersive(p);
  const CouplingTable t = effective_couplings(p);
  std::ostringstream s;
  char buf[96];
  auto line = [&](const char* name, double value, const char* unit) {
    std::snprintf(buf, sizeof buf, "%-10s %16.6f %s\n", name, value, unit);
    s << buf;
  };
  line("J12/2pi", units::to_mhz(t.J12), "MHz");
  line("J34/2pi", units::to_mhz(t.J34), "MHz");
  line("J23/2pi", units::to_mhz(t.J23), "MHz");
  line("J13/2pi", units::to_mhz(t.J13), "MHz");
  line("J24/2pi", units::to_mhz(t.J24), "MHz");
  line("J14/2pi", units::to_mhz(t.J14), "MHz");
  for (int q = 0; q < kQubitCount; ++q) {
    const std::string name = "eps" + std::to_string(q + 1) + "/2pi";
    line(name.c_str(), units::to_ghz(t.eps[q]), "GHz");
  }
  const double ratio = t.clustering_ratio();
  if (std::isinf(ratio)) {
    s << "J12/J23    inf\n";
  } else if (std::isnan(ratio)) {
    s << "J12/J23    undefined\n";
  } else {
    std::snprintf(buf, sizeof buf, "J12/J23    %16.6f\n", ratio);
    s << buf;
  }
  s << "ordering   "
    << (t.energy_ordered() ? "eps1 > eps2 > eps3 > eps4 (downhill)" : "not ordered") << '\n';
  std::snprintf(buf, sizeof buf, "max g/delta %15.6f (qubit %d)%s\n", check.max_ratio,
                check.worst_qubit + 1,
                check.level == DispersiveCheck::Level::kWarning ? " warning: weakly dispersive"
                                                                : "");
  s << buf;
  return s.str();
}

void write_file(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + tmp + "' for writing");
    out << text;
    out.flush();
    if (!out) throw IoError("write to '" + tmp + "' failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot move output into place at '" + path + "'");
  }
}

}  // namespace eetsim::cli
