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

#include "eetsim_cli/config.hpp"

#include <algorithm>
#include <cctype>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include "eetsim/errors.hpp"
#include "eetsim/units.hpp"

namespace eetsim::cli {
namespace {

enum class Kind { kFrequency, kTime, kTimeOrInfinity, kTemperature };

struct UnitFactor {
  const char* name;
  double factor;
};

// Frequencies become angular.
constexpr UnitFactor kFrequencyUnits[] = {{"Hz", units::kTwoPi},
                                          {"kHz", units::kTwoPi * 1e3},
                                          {"MHz", units::kTwoPi * 1e6},
                                          {"GHz", units::kTwoPi * 1e9}};
constexpr UnitFactor kTimeUnits[] = {{"s", 1.0},   {"ms", 1e-3}, {"us", 1e-6},
                                     {"\xC2\xB5s", 1e-6}, {"ns", 1e-9}, {"ps", 1e-12}};
constexpr UnitFactor kTemperatureUnits[] = {{"K", 1.0}, {"mK", 1e-3}, {"uK", 1e-6}};

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string unquote(const std::string& v, const std::string& key) {
  if (v.size() >= 2 && (v.front() == '"' || v.front() == '\'')) {
    if (v.back() != v.front()) {
      throw ValidationError("unterminated quote in value of '" + key + "'");
    }
    return v.substr(1, v.size() - 2);
  }
  return v;
}

double parse_number(const std::string& text, const std::string& key) {
  const std::string t = trim(text);
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || end == t.c_str() || *end != '\0' || !std::isfinite(v)) {
    throw ValidationError("field '" + key + "': expected a number, got '" + text + "'");
  }
  return v;
}

int parse_int(const std::string& text, const std::string& key) {
  const double v = parse_number(text, key);
  if (v != std::floor(v) || std::abs(v) > 1e9) {
    throw ValidationError("field '" + key + "': expected an integer, got '" + text + "'");
  }
  return static_cast<int>(v);
}

double parse_quantity(const std::string& text, const std::string& key, Kind kind) {
  const std::string t = trim(text);
  if (kind == Kind::kTimeOrInfinity && (t == "inf" || t == "infinite")) {
    return std::numeric_limits<double>::infinity();
  }
  std::size_t split = 0;
  while (split < t.size() &&
         (std::isdigit(static_cast<unsigned char>(t[split])) || t[split] == '.' ||
          t[split] == '-' || t[split] == '+' ||
          ((t[split] == 'e' || t[split] == 'E') && split + 1 < t.size() &&
           (std::isdigit(static_cast<unsigned char>(t[split + 1])) || t[split + 1] == '-' ||
            t[split + 1] == '+')))) {
    ++split;
  }
  const std::string number = t.substr(0, split);
  const std::string unit = trim(std::string_view(t).substr(split));
  const double value = parse_number(number, key);

  const UnitFactor* begin = nullptr;
  const UnitFactor* end = nullptr;
  const char* expected = "";
  switch (kind) {
    case Kind::kFrequency:
      begin = std::begin(kFrequencyUnits);
      end = std::end(kFrequencyUnits);
      expected = "Hz, kHz, MHz or GHz";
      break;
    case Kind::kTime:
    case Kind::kTimeOrInfinity:
      begin = std::begin(kTimeUnits);
      end = std::end(kTimeUnits);
      expected = "s, ms, us, ns or ps";
      break;
    case Kind::kTemperature:
      begin = std::begin(kTemperatureUnits);
      end = std::end(kTemperatureUnits);
      expected = "K, mK or uK";
      break;
  }
  if (unit.empty()) {
    throw ValidationError("field '" + key + "' needs a unit suffix (" + expected + ")");
  }
  for (const UnitFactor* u = begin; u != end; ++u) {
    if (unit == u->name) return value * u->factor;
  }
  throw ValidationError("field '" + key + "': unknown unit '" + unit + "' (expected " +
                        expected + ")");
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

std::string exact(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const char* const kCouplingKeys[] = {"g1", "g2", "g3", "g4", "g_ab"};
const char* const kAxisKeys[] = {"g1_min", "g1_max", "g1_step", "g2_min", "g2_max",
                                 "g2_step", "gab_min", "gab_max", "gab_step"};

}  // namespace

std::string engine_name(Engine engine) {
  return engine == Engine::kFull ? "full" : "reduced";
}

Engine engine_from_name(std::string_view name) {
  if (name == "full") return Engine::kFull;
  if (name == "reduced") return Engine::kReduced;
  throw ValidationError("unknown engine '" + std::string(name) + "' (expected full or reduced)");
}

std::string format_name(OutputFormat format) {
  return format == OutputFormat::kCsv ? "csv" : "jsonl";
}

OutputFormat format_from_name(std::string_view name) {
  if (name == "csv") return OutputFormat::kCsv;
  if (name == "jsonl" || name == "json-lines") return OutputFormat::kJsonLines;
  throw ValidationError("unknown format '" + std::string(name) + "' (expected csv or jsonl)");
}

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys = {
      "preset",   "omega_a",  "omega_b",       "omega1",        "omega2",
      "omega3",   "omega4",   "g1",            "g2",            "g3",
      "g4",       "g_ab",     "t1",            "tphi",          "tau_a",
      "tau_b",    "temperature", "qubit_occupation", "engine",   "frame",
      "n_max",    "t_final",  "dt",            "record_stride", "initial_state",
      "output",   "format",   "eq_spread",     "eq_window",     "measure_time",
      "g1_min",   "g1_max",   "g1_step",       "g2_min",        "g2_max",
      "g2_step",  "gab_min",  "gab_max",       "gab_step",      "objective",
      "objective_time", "checkpoint", "checkpoint_every"};
  return keys;
}

std::optional<std::string> suggest_key(std::string_view key) {
  std::optional<std::string> best;
  std::size_t best_distance = std::numeric_limits<std::size_t>::max();
  for (const auto& k : known_keys()) {
    const std::size_t d = edit_distance(key, k);
    if (d < best_distance) {
      best_distance = d;
      best = k;
    }
  }
  if (best_distance > std::max<std::size_t>(2, key.size() / 2)) return std::nullopt;
  return best;
}

RunConfig parse_config(std::string_view text) {
  RunConfig config;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    // Strip comments outside quotes.
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') quoted = !quoted;
      if (line[i] == '#' && !quoted) {
        line.resize(i);
        break;
      }
    }
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ValidationError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key = trim(std::string_view(stripped).substr(0, eq));
    const std::string value = unquote(trim(std::string_view(stripped).substr(eq + 1)), key);
    if (std::find(known_keys().begin(), known_keys().end(), key) == known_keys().end()) {
      std::string msg = "unknown key '" + key + "'";
      if (const auto s = suggest_key(key)) msg += " (did you mean '" + *s + "'?)";
      throw ValidationError(msg);
    }
    if (config.given.count(key) != 0) {
      throw ValidationError("key '" + key + "' given twice");
    }
    config.given[key] = value;
  }

  const auto& g = config.given;
  auto has = [&](const char* k) { return g.count(k) != 0; };
  auto get = [&](const char* k) { return g.at(k); };

  CircuitParams p = CircuitParams::reference_device();
  if (has("omega_a")) p.omega_a = parse_quantity(get("omega_a"), "omega_a", Kind::kFrequency);
  if (has("omega_b")) p.omega_b = parse_quantity(get("omega_b"), "omega_b", Kind::kFrequency);
  for (int q = 0; q < kQubitCount; ++q) {
    const std::string k = "omega" + std::to_string(q + 1);
    if (g.count(k)) p.omega[q] = parse_quantity(g.at(k), k, Kind::kFrequency);
  }
  if (has("t1")) {
    const double t1 = parse_quantity(get("t1"), "t1", Kind::kTimeOrInfinity);
    if (!(t1 > 0.0)) throw ValidationError("field 't1' must be positive");
    p.gamma.fill(std::isinf(t1) ? 0.0 : 1.0 / t1);
  }
  if (has("tphi")) {
    const double tphi = parse_quantity(get("tphi"), "tphi", Kind::kTimeOrInfinity);
    if (!(tphi > 0.0)) throw ValidationError("field 'tphi' must be positive");
    p.gphi.fill(std::isinf(tphi) ? 0.0 : 1.0 / tphi);
  }
  for (const char* k : {"tau_a", "tau_b"}) {
    if (!has(k)) continue;
    const double tau = parse_quantity(get(k), k, Kind::kTimeOrInfinity);
    if (!(tau > 0.0)) throw ValidationError(std::string("field '") + k + "' must be positive");
    (std::string(k) == "tau_a" ? p.kappa_a : p.kappa_b) = std::isinf(tau) ? 0.0 : 1.0 / tau;
  }
  if (has("temperature")) {
    p.temperature = parse_quantity(get("temperature"), "temperature", Kind::kTemperature);
  }
  if (has("qubit_occupation")) {
    const std::string v = get("qubit_occupation");
    if (v == "as-printed") {
      p.qubit_occupation = QubitOccupation::kAsPrinted;
    } else if (v == "bose-einstein") {
      p.qubit_occupation = QubitOccupation::kBoseEinstein;
    } else {
      throw ValidationError("field 'qubit_occupation': expected as-printed or bose-einstein");
    }
  }

  bool any_axis = false;
  for (const char* k : kAxisKeys) any_axis = any_axis || has(k);

  bool any_coupling = false;
  bool all_couplings = true;
  for (const char* k : kCouplingKeys) {
    // Unit problems are reported before missing companions.
    if (has(k)) parse_quantity(get(k), k, Kind::kFrequency);
    any_coupling = any_coupling || has(k);
    all_couplings = all_couplings && has(k);
  }
  if (has("preset")) {
    if (any_coupling) {
      throw ValidationError("give either 'preset' or explicit couplings g1..g4, g_ab, not both");
    }
    const GeometryPreset preset = GeometryPreset::from_name(get("preset"));
    config.preset = get("preset");
    config.geometry = preset.geometry;
    p = preset.apply(p);
  } else if (all_couplings) {
    for (int q = 0; q < kQubitCount; ++q) {
      const std::string k = "g" + std::to_string(q + 1);
      p.g[q] = parse_quantity(g.at(k), k, Kind::kFrequency);
    }
    p.g_ab = parse_quantity(get("g_ab"), "g_ab", Kind::kFrequency);
    config.geometry = Geometry::kCustom;
  } else if (any_axis && !any_coupling) {
    // A sweep supplies its own couplings.
    config.geometry = Geometry::kCustom;
  } else {
    std::string missing;
    for (const char* k : kCouplingKeys) {
      if (!has(k)) missing += std::string(missing.empty() ? "" : ", ") + k;
    }
    throw ValidationError("no 'preset' given and couplings missing: " + missing);
  }
  validate(p);
  config.params = p;

  if (has("engine")) config.engine = engine_from_name(get("engine"));
  if (has("frame")) {
    const Frame f = frame_from_name(get("frame"));
    if (f == Frame::kReduced) {
      if (config.engine == Engine::kFull) {
        throw ValidationError("frame 'effective-reduced' conflicts with engine 'full'");
      }
      config.engine = Engine::kReduced;
    } else {
      config.frame = f;
    }
  }
  if (has("n_max")) config.n_max = parse_int(get("n_max"), "n_max");
  if (has("t_final")) config.t_final = parse_quantity(get("t_final"), "t_final", Kind::kTime);
  if (has("dt")) config.dt = parse_quantity(get("dt"), "dt", Kind::kTime);
  if (has("record_stride")) config.record_stride = parse_int(get("record_stride"), "record_stride");
  if (has("initial_state")) config.initial_state = basis_state_from_name(get("initial_state"));
  if (has("output")) config.output = get("output");
  if (has("format")) config.format = format_from_name(get("format"));
  if (has("eq_spread")) config.metrics.spread = parse_number(get("eq_spread"), "eq_spread");
  if (has("eq_window")) {
    config.metrics.window = parse_quantity(get("eq_window"), "eq_window", Kind::kTime);
  }
  if (has("measure_time")) {
    config.metrics.measure_time =
        parse_quantity(get("measure_time"), "measure_time", Kind::kTime);
  }
  if (!(config.metrics.spread > 0.0)) throw ValidationError("field 'eq_spread' must be positive");
  if (!(config.metrics.window >= 0.0)) {
    throw ValidationError("field 'eq_window' must be non-negative");
  }

  if (any_axis) {
    for (const char* k : kAxisKeys) {
      if (!has(k)) throw ValidationError(std::string("sweep grid is missing '") + k + "'");
    }
    auto axis = [&](const char* prefix) {
      const std::string s(prefix);
      return SweepAxis{parse_quantity(g.at(s + "_min"), s + "_min", Kind::kFrequency),
                       parse_quantity(g.at(s + "_max"), s + "_max", Kind::kFrequency),
                       parse_quantity(g.at(s + "_step"), s + "_step", Kind::kFrequency)};
    };
    config.grid.g1 = axis("g1");
    config.grid.g2 = axis("g2");
    config.grid.g_ab = axis("gab");
    config.has_grid = true;
  }
  if (has("objective")) config.grid.objective = objective_from_name(get("objective"));
  if (has("objective_time")) {
    config.grid.objective_time =
        parse_quantity(get("objective_time"), "objective_time", Kind::kTime);
  }
  if (config.has_grid) validate(config.grid);
  if (has("checkpoint")) config.checkpoint = get("checkpoint");
  if (has("checkpoint_every")) {
    const int every = parse_int(get("checkpoint_every"), "checkpoint_every");
    if (every < 1) throw ValidationError("field 'checkpoint_every' must be at least 1");
    config.checkpoint_every = static_cast<std::size_t>(every);
  }

  // Catches n_max, t_final, dt and stride problems early.
  validate(config.simulation(config.resolved_engine(Engine::kFull)));
  return config;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

SimulationConfig RunConfig::simulation(Engine which) const {
  if (which == Engine::kReduced) {
    SimulationConfig c = SimulationConfig::reduced(t_final);
    c.n_max = n_max;
    c.initial_state = initial_state;
    if (dt) c.dt = *dt;
    c.record_stride =
        record_stride.value_or(std::max(1, static_cast<int>(std::lround(1e-9 / c.dt))));
    return c;
  }
  return simulation(frame);
}

SimulationConfig RunConfig::simulation(Frame full_frame) const {
  SimulationConfig c = SimulationConfig::full(full_frame, t_final);
  c.n_max = n_max;
  c.initial_state = initial_state;
  if (dt) c.dt = *dt;
  c.record_stride =
      record_stride.value_or(std::max(1, static_cast<int>(std::lround(1e-9 / c.dt))));
  return c;
}

MetricsOptions RunConfig::metrics_options() const {
  MetricsOptions m = metrics;
  if (!m.measure_time) m.measure_time = default_metrics_options(geometry).measure_time;
  return m;
}

std::string canonical_text(const RunConfig& config, Engine engine) {
  const CircuitParams& p = config.params;
  const SimulationConfig sim = config.simulation(engine);
  const MetricsOptions m = config.metrics_options();
  std::ostringstream s;
  s << "engine=" << engine_name(engine) << ";frame=" << frame_name(sim.frame)
    << ";n_max=" << sim.n_max << ";t_final=" << exact(sim.t_final) << ";dt=" << exact(sim.dt)
    << ";stride=" << sim.record_stride << ";initial=" << basis_state_name(sim.initial_state)
    << ";omega_a=" << exact(p.omega_a) << ";omega_b=" << exact(p.omega_b)
    << ";g_ab=" << exact(p.g_ab) << ";kappa_a=" << exact(p.kappa_a)
    << ";kappa_b=" << exact(p.kappa_b) << ";T=" << exact(p.temperature)
    << ";occupation=" << static_cast<int>(p.qubit_occupation)
    << ";spread=" << exact(m.spread) << ";window=" << exact(m.window)
    << ";measure=" << (m.measure_time ? exact(*m.measure_time) : "-");
  for (int q = 0; q < kQubitCount; ++q) {
    s << ";q" << q + 1 << '=' << exact(p.omega[q]) << ',' << exact(p.g[q]) << ','
      << exact(p.gamma[q]) << ',' << exact(p.gphi[q]);
  }
  return s.str();
}

std::uint64_t config_hash(const RunConfig& config, Engine engine) {
  return fnv1a(canonical_text(config, engine));
}

std::string hash_hex(std::uint64_t hash) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, hash);
  return buf;
}

}  // namespace eetsim::cli
