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

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "eetsim/errors.hpp"
#include "eetsim/experiments.hpp"
#include "eetsim/lindblad.hpp"
#include "eetsim/units.hpp"
#include "oracles.hpp"

namespace eetsim {
namespace {

CircuitParams moderate() {
  return GeometryPreset::named(Geometry::kModerateClustered)
      .apply(CircuitParams::reference_device());
}

// Random density matrix of full rank.
Matrix random_density(Eigen::Index n, std::uint32_t seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> d;
  Matrix g(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) g(i, j) = Complex(d(rng), d(rng));
  }
  Matrix rho = g * g.adjoint();
  return rho / rho.trace();
}

TEST(Thermal, MatchesOccupationFormulas) {
  CircuitParams p = moderate();
  for (QubitOccupation occ : {QubitOccupation::kAsPrinted, QubitOccupation::kBoseEinstein}) {
    p.qubit_occupation = occ;
    const ThermalNumbers n = thermal_occupations(p);
    const auto expected = oracle::thermal(p);
    EXPECT_NEAR(n.n_a / expected.n_resonator_a, 1.0, 1e-12);
    for (int q = 0; q < 4; ++q) EXPECT_NEAR(n.n_qubit[q] / expected.n_qubit[q], 1.0, 1e-12);
  }
  // 3 GHz at 20 mK: hbar w / kB T = 7.1988, N = 7.4799e-4.
  EXPECT_NEAR(thermal_occupations(p).n_a, 7.4799e-4, 1e-7);
  p.temperature = 0.0;
  EXPECT_EQ(thermal_occupations(p).n_a, 0.0);
  EXPECT_EQ(thermal_occupations(p).n_qubit[0], 0.0);
  p.temperature = -1.0;
  EXPECT_THROW(thermal_occupations(p), ValidationError);
}

TEST(LindbladSpec, TermsAndRates) {
  const CircuitParams p = moderate();
  const LindbladSpec spec = build_lindblad_spec(p, HilbertLayout::circuit(1));
  ASSERT_EQ(spec.terms.size(), 16u);
  const ThermalNumbers n = thermal_occupations(p);
  EXPECT_EQ(spec.terms[0].label, "kappa_a");
  EXPECT_DOUBLE_EQ(spec.terms[0].rate, p.kappa_a * (n.n_a + 1.0));
  EXPECT_DOUBLE_EQ(spec.terms[1].rate, p.kappa_a * n.n_a);
  bool found = false;
  for (const auto& t : spec.terms) {
    if (t.label == "gphi2") {
      EXPECT_DOUBLE_EQ(t.rate, p.gphi[1]);
      found = true;
    }
  }
  EXPECT_TRUE(found);
}

TEST(Dissipator, QubitClosedForms) {
  const HilbertLayout layout({{"q", 2}});
  Matrix m(2, 2);
  m << 0.3, Complex(0.1, 0.2), Complex(0.1, -0.2), 0.7;
  const DenseOperator rho(layout, m);
  // D[sigma-]: population flows e -> g, coherences halve their rate.
  const Matrix d = dissipator(DenseOperator(layout, sigma_minus()), rho).matrix();
  EXPECT_EQ(d(0, 0), Complex(0.7));
  EXPECT_EQ(d(1, 1), Complex(-0.7));
  EXPECT_EQ(d(0, 1), -0.5 * m(0, 1));
  // D[sigma_z]: populations fixed, coherences decay at 2.
  const Matrix z = dissipator(DenseOperator(layout, sigma_z()), rho).matrix();
  EXPECT_EQ(z(0, 0), Complex(0.0));
  EXPECT_EQ(z(1, 0), -2.0 * m(1, 0));
  // D[sigma+] mirrors D[sigma-].
  const Matrix u = dissipator(DenseOperator(layout, sigma_plus()), rho).matrix();
  EXPECT_EQ(u(1, 1), Complex(0.3));
}

TEST(Dissipator, BosonFockStates) {
  const HilbertLayout layout({{"r", 5}});
  const DenseOperator a(layout, boson_annihilation(4));
  for (int n = 0; n <= 4; ++n) {
    const Matrix d = dissipator(a, DenseOperator::pure_state(layout, n)).matrix();
    EXPECT_NEAR(d(n, n).real(), -n, 1e-14);
    if (n > 0) EXPECT_NEAR(d(n - 1, n - 1).real(), n, 1e-14);
    EXPECT_NEAR(d.trace().real(), 0.0, 1e-14);
  }
  const Matrix up = dissipator(a.adjoint(), DenseOperator::pure_state(layout, 1)).matrix();
  EXPECT_NEAR(up(2, 2).real(), 2.0, 1e-14);
  EXPECT_NEAR(up(1, 1).real(), -2.0, 1e-14);
}

TEST(Rhs, TracelessAndHermitian) {
  const CircuitParams p = moderate();
  const HilbertLayout layout = HilbertLayout::circuit(1);
  const auto source = HamiltonianSource::for_frame(Frame::kInteraction, p, layout);
  const auto spec = build_lindblad_spec(p, layout);
  const DenseOperator rho(layout, random_density(64, 11));
  const DenseOperator d = rhs(3e-9, rho, source, spec);
  EXPECT_LT(std::abs(d.trace()), 1e-12 * d.max_abs());
  EXPECT_LT(d.hermiticity_defect(), 1e-12 * d.max_abs());
}

// The dense reference and the sparse engine share nothing but their inputs.
TEST(MasterEquation, MatchesDenseReference) {
  CircuitParams p = moderate();
  p.temperature = 0.2;  // make heating terms visible
  for (Frame frame : {Frame::kLab, Frame::kInteraction}) {
    for (int n_max : {1, 2}) {
      const HilbertLayout layout = HilbertLayout::circuit(n_max);
      const auto source = HamiltonianSource::for_frame(frame, p, layout);
      const auto spec = build_lindblad_spec(p, layout);
      MasterEquation eq(source, spec);
      const auto n = static_cast<Eigen::Index>(layout.dimension());
      const Matrix rho = random_density(n, 5 + n_max);
      Matrix out;
      for (double t : {0.0, 1.7e-9}) {
        eq.derivative(t, rho, out);
        const Matrix expected = rhs(t, DenseOperator(layout, rho), source, spec).matrix();
        EXPECT_LT((out - expected).cwiseAbs().maxCoeff(),
                  1e-12 * expected.cwiseAbs().maxCoeff())
            << frame_name(frame) << " n_max " << n_max << " t " << t;
      }
    }
  }
}

TEST(MasterEquation, RejectsBlocksCoupledByHamiltonian) {
  const CircuitParams p = moderate();
  const HilbertLayout layout = HilbertLayout::circuit(1);
  const auto source = HamiltonianSource::for_frame(Frame::kLab, p, layout);
  EXPECT_THROW(MasterEquation(source, build_lindblad_spec(p, layout), {32, 32}), ValidationError);
  EXPECT_THROW(MasterEquation(source, build_lindblad_spec(p, layout), {10, 10}), ValidationError);
}

TEST(Frame, Names) {
  EXPECT_EQ(frame_name(Frame::kLab), "lab");
  EXPECT_EQ(frame_from_name("reduced"), Frame::kReduced);
  EXPECT_EQ(frame_from_name("effective-reduced"), Frame::kReduced);
  EXPECT_THROW(frame_from_name("rotating"), ValidationError);
  EXPECT_THROW(HamiltonianSource::for_frame(Frame::kReduced, moderate(),
                                            HilbertLayout::circuit(1)),
               ValidationError);
}

TEST(BasisState, NamesAndIndices) {
  const HilbertLayout layout = HilbertLayout::circuit(2);
  EXPECT_EQ(basis_index(layout, BasisState::kGround), 0u);
  EXPECT_EQ(basis_index(layout, BasisState::kQ1), 72u);
  EXPECT_EQ(basis_index(layout, BasisState::kResonatorA), 3u);
  EXPECT_EQ(basis_index(layout, BasisState::kResonatorB), 1u);
  EXPECT_EQ(basis_state_from_name("b"), BasisState::kResonatorB);
  EXPECT_EQ(basis_state_name(BasisState::kQ3), "3");
  EXPECT_THROW(basis_state_from_name("5"), ValidationError);
}

TEST(SimulationConfig, DefaultsAndValidation) {
  const auto lab = SimulationConfig::full(Frame::kLab, 10e-9);
  EXPECT_DOUBLE_EQ(lab.dt, 1e-12);
  EXPECT_EQ(lab.record_stride, 1000);
  const auto rot = SimulationConfig::full(Frame::kInteraction, 10e-9);
  EXPECT_DOUBLE_EQ(rot.dt, 2e-12);
  EXPECT_EQ(rot.step_count(), 5000u);
  const auto red = SimulationConfig::reduced(250e-9);
  EXPECT_DOUBLE_EQ(red.dt, 50e-12);
  EXPECT_EQ(red.step_count(), 5000u);

  SimulationConfig bad = rot;
  bad.t_final = 10.001e-9;
  EXPECT_THROW(validate(bad), ValidationError);
  bad = rot;
  bad.n_max = 0;
  EXPECT_THROW(validate(bad), ValidationError);
  bad = rot;
  bad.dt = 0.0;
  EXPECT_THROW(validate(bad), ValidationError);
  bad = rot;
  bad.record_stride = 0;
  EXPECT_THROW(validate(bad), ValidationError);
}

TEST(Evolve, StepGuardRejectsLargeSteps) {
  SimulationConfig c = SimulationConfig::full(Frame::kLab, 1e-9);
  c.dt = 5e-12;
  c.record_stride = 1;
  EXPECT_THROW(simulate(c, moderate()), ValidationError);
}

TEST(Evolve, ZeroDurationReturnsInitialState) {
  const auto full = simulate(SimulationConfig::full(Frame::kInteraction, 0.0), moderate());
  ASSERT_EQ(full.samples.size(), 1u);
  EXPECT_EQ(full.samples[0].qubit[0], 1.0);
  const auto red = simulate(SimulationConfig::reduced(0.0), moderate());
  ASSERT_EQ(red.samples.size(), 1u);
  EXPECT_EQ(red.samples[0].qubit[0], 1.0);
}

TEST(Evolve, PreservesTraceAndHermiticity) {
  auto c = SimulationConfig::full(Frame::kInteraction, 2e-9);
  c.record_stride = 50;
  const auto r = simulate(c, moderate());
  EXPECT_LT(r.max_trace_error, 1e-6);
  EXPECT_LT(r.max_hermiticity_defect, 1e-8);
  EXPECT_GT(r.min_eigenvalue, -1e-6);
  for (const auto& s : r.samples) EXPECT_TRUE(s.physical);
}

TEST(Evolve, PhysicalityAbort) {
  CircuitParams p = moderate();
  p.kappa_a = 1e13;  // kappa dt = 20: RK4 is unstable
  auto c = SimulationConfig::full(Frame::kInteraction, 0.1e-9);
  c.initial_state = BasisState::kResonatorA;
  EXPECT_THROW(simulate(c, p), PhysicalityError);
}

// Oracle: P_e(t) = exp(-Gamma t) with Gamma = 1/T1 at T = 0.
TEST(Evolve, AnalyticSingleQubitDecay) {
  CircuitParams p = CircuitParams::reference_device();
  p.temperature = 0.0;
  p.gphi.fill(0.0);
  p.gamma.fill(0.0);
  p.gamma[0] = 1.0 / 10e-9;
  auto full = SimulationConfig::full(Frame::kInteraction, 20e-9);
  full.n_max = 1;
  auto red = SimulationConfig::reduced(20e-9);
  for (const auto& config : {full, red}) {
    const auto r = simulate(config, p);
    double worst = 0.0;
    for (const auto& s : r.samples) {
      worst = std::max(worst, std::abs(s.qubit[0] - std::exp(-p.gamma[0] * s.time)));
      worst = std::max(worst, std::abs(s.ground - (1.0 - std::exp(-p.gamma[0] * s.time))));
    }
    EXPECT_LT(worst, 1e-6) << frame_name(config.frame);
  }
}

TEST(Evolve, Rk4ConvergenceOrder) {
  const CircuitParams p = moderate();
  auto run = [&](double dt) {
    SimulationConfig c;
    c.frame = Frame::kLab;
    c.n_max = 1;
    c.t_final = 0.2e-9;
    c.dt = dt;
    c.record_stride = static_cast<int>(std::lround(c.t_final / dt));
    return simulate(c, p).final();
  };
  const Sample ref = run(0.0625e-12);
  std::vector<double> h, err;
  for (double dt : {2e-12, 1e-12, 0.5e-12}) {
    const Sample s = run(dt);
    double e = 0.0;
    for (int q = 0; q < 4; ++q) e = std::max(e, std::abs(s.qubit[q] - ref.qubit[q]));
    e = std::max(e, std::abs(s.resonator_a - ref.resonator_a));
    h.push_back(dt);
    err.push_back(e);
  }
  EXPECT_GE(oracle::log_log_slope(h, err), 3.5);
}

TEST(EvolveReduced, RejectsStatesOutsideBlock) {
  const HilbertLayout layout = HilbertLayout::circuit(2);
  std::array<int, 6> two{};
  two[4] = 2;
  const auto rho = DenseOperator::pure_state(layout, layout.index_of(two));
  EXPECT_THROW(evolve_reduced(rho, SimulationConfig::reduced(1e-9), moderate()),
               ValidationError);
}

// Oracle: hand-written 7-state master equation under RK4 at 1 ps.
TEST(EvolveReduced, MatchesHandWrittenSevenStateModel) {
  const CircuitParams p = moderate();
  const auto expected = oracle::reduced_rk4(p, 100e-9, 1e-12, 1000);
  const auto r = simulate(SimulationConfig::reduced(100e-9), p);
  ASSERT_EQ(expected.size(), r.samples.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    const Sample& s = r.samples[i];
    const double got[] = {s.qubit[0], s.qubit[1], s.qubit[2], s.qubit[3],
                          s.resonator_a, s.resonator_b, s.ground};
    for (int k = 0; k < 7; ++k) worst = std::max(worst, std::abs(got[k] - expected[i].p[k]));
  }
  EXPECT_LT(worst, 1e-5);
}

// Regression values from the moderate preset at 250 ns.
TEST(EvolveReduced, FrozenModeratePopulations) {
  const auto r = simulate(SimulationConfig::reduced(250e-9), moderate());
  const Sample& s = r.final();
  EXPECT_NEAR(s.qubit[0], 2.35251799e-01, 1e-7);
  EXPECT_NEAR(s.qubit[1], 2.32437110e-01, 1e-7);
  EXPECT_NEAR(s.qubit[2], 2.31431459e-01, 1e-7);
  EXPECT_NEAR(s.qubit[3], 2.33372643e-01, 1e-7);
  EXPECT_NEAR(s.resonator_a, 3.26467667e-02, 1e-7);
  EXPECT_NEAR(s.resonator_b, 3.27552700e-02, 1e-7);
  EXPECT_NEAR(s.trace, 1.0, 1e-12);
}

// Excitation-conserving bridge: the full engine and the reduced engine solve
// the same model, so they agree to integrator accuracy.
TEST(CrossValidation, FullEngineWithRotatingBridgeMatchesReduced) {
  CircuitParams p = moderate();
  p.bridge = Bridge::kRotatingWave;
  const auto full = simulate(SimulationConfig::full(Frame::kInteraction, 20e-9), p);
  const auto red = simulate(SimulationConfig::reduced(20e-9), p);
  ASSERT_EQ(full.samples.size(), red.samples.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < full.samples.size(); ++i) {
    for (int q = 0; q < 4; ++q) {
      worst = std::max(worst, std::abs(full.samples[i].qubit[q] - red.samples[i].qubit[q]));
    }
  }
  EXPECT_LT(worst, 1e-5);
}

TEST(CrossValidation, RotatingBridgeIsCutoffIndependent) {
  CircuitParams p = moderate();
  p.bridge = Bridge::kRotatingWave;
  auto c2 = SimulationConfig::full(Frame::kInteraction, 5e-9);
  auto c3 = c2;
  c3.n_max = 3;
  const auto r2 = simulate(c2, p);
  const auto r3 = simulate(c3, p);
  for (std::size_t i = 0; i < r2.samples.size(); ++i) {
    for (int q = 0; q < 4; ++q) {
      EXPECT_NEAR(r2.samples[i].qubit[q], r3.samples[i].qubit[q], 1e-9);
    }
  }
}

}  // namespace
}  // namespace eetsim
