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
#include <cmath>

#include "eetsim/errors.hpp"
#include "eetsim/experiments.hpp"
#include "eetsim/units.hpp"

namespace eetsim {

std::vector<DenseOperator> projectors(const HilbertLayout& layout) {
  std::vector<DenseOperator> out;
  for (BasisState s : {BasisState::kQ1, BasisState::kQ2, BasisState::kQ3,
                       BasisState::kQ4, BasisState::kResonatorA,
                       BasisState::kResonatorB}) {
    out.push_back(DenseOperator::projector(layout, basis_index(layout, s)));
  }
  return out;
}

DenseOperator ground_projector(const HilbertLayout& layout) {
  return DenseOperator::projector(layout, basis_index(layout, BasisState::kGround));
}

MetricsOptions default_metrics_options(Geometry geometry) {
  MetricsOptions options;
  if (geometry == Geometry::kModerateClustered) options.measure_time = units::ns(250.0);
  return options;
}

std::optional<double> equilibration_time(const TrajectoryRecord& record, double spread,
                                         double window) {
  const auto& s = record.samples;
  if (s.empty()) return std::nullopt;
  // Sample times are multiples of dt; allow for rounding in t + window.
  const double slack = 1e-6 * window;
  const double last = s.back().time;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i].time + window > last + slack) break;
    bool held = true;
    for (std::size_t j = i; j < s.size() && s[j].time <= s[i].time + window + slack; ++j) {
      const auto [lo, hi] = std::minmax_element(s[j].qubit.begin(), s[j].qubit.end());
      if (!(*hi - *lo < spread)) {
        held = false;
        break;
      }
    }
    if (held) return s[i].time;
  }
  return std::nullopt;
}

TransferMetrics transfer_metrics(const TrajectoryRecord& record,
                                 const MetricsOptions& options) {
  if (record.samples.empty()) throw ValidationError("trajectory has no samples");
  TransferMetrics m;
  m.equilibration_time = equilibration_time(record, options.spread, options.window);
  if (options.measure_time) {
    m.measured_at = *options.measure_time;
  } else if (m.equilibration_time) {
    m.measured_at = *m.equilibration_time;
  } else {
    m.measured_at = record.samples.back().time;
  }
  const Sample& at = record.at_time(m.measured_at);
  m.measured_at = at.time;
  m.efficiency = at.qubit_total();
  m.trapped = at.resonator_a + at.resonator_b;
  for (const Sample& s : record.samples) m.peak_p4 = std::max(m.peak_p4, s.qubit[3]);
  return m;
}

PresetRun run_preset(const GeometryPreset& preset, const SimulationConfig& config,
                     const CircuitParams& base) {
  return run_preset(preset, config, base, default_metrics_options(preset.geometry));
}

PresetRun run_preset(const GeometryPreset& preset, const SimulationConfig& config,
                     const CircuitParams& base, const MetricsOptions& options) {
  PresetRun run;
  run.params = preset.apply(base);
  validate(run.params);
  run.trajectory = simulate(config, run.params);
  run.metrics = transfer_metrics(run.trajectory, options);
  return run;
}

LinearFit linear_fit(const std::vector<double>& t, const std::vector<double>& y,
                     double begin, double end) {
  if (t.size() != y.size()) throw ValidationError("linear_fit: size mismatch");
  double n = 0.0, st = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < begin || t[i] > end) continue;
    n += 1.0;
    st += t[i];
    sy += y[i];
  }
  if (n < 2.0) throw ValidationError("linear_fit: fewer than two samples in window");
  const double mt = st / n;
  const double my = sy / n;
  double stt = 0.0, sty = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < begin || t[i] > end) continue;
    stt += (t[i] - mt) * (t[i] - mt);
    sty += (t[i] - mt) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LinearFit fit;
  fit.slope = sty / stt;
  fit.intercept = my - fit.slope * mt;
  fit.r_squared = syy > 0.0 ? sty * sty / (stt * syy) : 1.0;
  return fit;
}

TrappedPopulation trapped_population(const TrajectoryRecord& record, double query_time,
                                     double fit_begin, double fit_end) {
  if (record.samples.empty()) throw ValidationError("trajectory has no samples");
  TrappedPopulation out;
  for (const Sample& s : record.samples) {
    out.times.push_back(s.time);
    out.p_a.push_back(s.resonator_a);
    out.p_b.push_back(s.resonator_b);
  }
  const Sample& at = record.at_time(query_time);
  out.p_a_at = at.resonator_a;
  out.p_b_at = at.resonator_b;
  // Allow the window edges to sit on sample times despite rounding.
  const double slack = 1e-12;
  out.fit_a = linear_fit(out.times, out.p_a, fit_begin - slack, fit_end + slack);
  out.fit_b = linear_fit(out.times, out.p_b, fit_begin - slack, fit_end + slack);
  return out;
}

}  // namespace eetsim
