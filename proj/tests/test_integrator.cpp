#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "unibound/errors.hpp"
#include "unibound/harness.hpp"
#include "unibound/integrator.hpp"
#include "unibound/models.hpp"

using namespace unibound;

TEST(Step, CounterexampleStepsStayWithinEnergyTolerance) {
  const auto sys = build_oscillator(1.0, 1.0, 1.0);
  Tolerances tol;
  State s{-10.0, {24.5}, {-5.0}};
  double dt = 1e-3;
  for (int i = 0; i < 50; ++i) {
    const StepOutcome out = step(sys, s, dt, tol);
    EXPECT_LE(out.energy_residual, tol.energy_tol);
    EXPECT_NEAR(out.state.u[0], oracle::parabola(out.state.t), 1e-8);
    s = out.state;
    dt = std::min(out.dt_next, tol.dt_max);
  }
}

TEST(Step, RestPointIsFixed) {
  const auto sys = build_scalar_ode(1.0, 3.0);
  const StepOutcome out = step(sys, State{0.0, {0.0}, {0.0}}, 0.1, Tolerances{});
  EXPECT_EQ(out.state.u[0], 0.0);
  EXPECT_EQ(out.state.v[0], 0.0);
  EXPECT_EQ(out.energy_residual, 0.0);
}

TEST(Step, EnergyDecreasesWhileMoving) {
  const auto sys = build_scalar_ode(1.0, 3.0);
  State s{0.0, {1.0}, {0.0}};
  double e = sys.classical_energy(s);
  for (int i = 0; i < 40; ++i) {
    const StepOutcome out = step(sys, s, 0.05, Tolerances{});
    const double e_next = sys.classical_energy(out.state);
    EXPECT_LT(e_next, e);
    EXPECT_GT(out.dissipation, 0.0);
    s = out.state;
    e = e_next;
  }
}

TEST(Step, RejectsNonFiniteState) {
  const auto sys = build_scalar_ode(1.0, 3.0);
  EXPECT_THROW(step(sys, State{0.0, {NAN}, {0.0}}, 0.1, Tolerances{}), std::exception);
}

TEST(Tolerances, Validation) {
  Tolerances t;
  EXPECT_NO_THROW(t.validate());
  t.dt_min = 1.0;
  t.dt_max = 0.5;
  EXPECT_THROW(t.validate(), ValidationError);
  t = Tolerances{};
  t.rel_tol = -1.0;
  EXPECT_THROW(t.validate(), ValidationError);
}

TEST(Integrate, GridEndpointsAndOrdering) {
  const auto sys = build_scalar_ode(1.0, 3.0);
  const auto traj = integrate(sys, State{0.0, {2.0}, {0.0}}, 5.0, Tolerances{});
  ASSERT_GE(traj.size(), 2u);
  EXPECT_EQ(traj.samples.front().t, 0.0);
  EXPECT_EQ(traj.samples.back().t, 5.0);
  for (std::size_t i = 1; i < traj.size(); ++i) EXPECT_GT(traj.samples[i].t, traj.samples[i - 1].t);
  EXPECT_EQ(traj.energy_residuals.size(), traj.size() - 1);
}

TEST(Integrate, GeometricGrid) {
  const auto g = geometric_grid(0.0, 10.0, 2.0, 1.0);
  const std::vector<double> expected{0.0, 1.0, 2.0, 4.0, 8.0, 10.0};
  EXPECT_EQ(g, expected);
  const auto back = geometric_grid(0.0, -10.0, 2.0, 1.0);
  EXPECT_EQ(back[1], -1.0);
  EXPECT_EQ(back.back(), -10.0);
}

TEST(Integrate, AgreesWithFixedStepRk4) {
  PdeParams p;
  p.modes = 4;
  p.grid_points = 12;
  p.beta = 2.0;
  const auto sys = build_galerkin_wave(p);
  State s0{0.0, {1.0, -0.5, 0.25, 0.1}, {0.0, 0.3, 0.0, -0.2}};
  const std::vector<double> grid{2.0};
  const auto traj = integrate(sys, s0, 2.0, Tolerances{}, grid);
  const State ref = oracle::rk4(sys, s0, 2.0, 20000);
  for (std::size_t k = 0; k < 4; ++k) {
    EXPECT_NEAR(traj.samples.back().u[k], ref.u[k], 1e-8);
    EXPECT_NEAR(traj.samples.back().v[k], ref.v[k], 1e-8);
  }
}

TEST(Integrate, ErrorShrinksWithTolerance) {
  const auto sys = build_scalar_ode(1.0, 3.0);
  const State s0{0.0, {3.0}, {0.0}};
  const std::vector<double> grid{4.0};
  Tolerances ref_tol;
  ref_tol.rel_tol = 1e-13;
  ref_tol.abs_tol = 1e-15;
  ref_tol.energy_tol = 1e-6;
  const double ref = integrate(sys, s0, 4.0, ref_tol, grid).samples.back().u[0];
  std::vector<double> errors;
  for (double rtol : {1e-5, 1e-6, 1e-7, 1e-8}) {
    Tolerances t;
    t.rel_tol = rtol;
    t.abs_tol = rtol * 1e-2;
    t.energy_tol = 1.0;  // leave step control to the embedded estimate
    const auto traj = integrate(sys, s0, 4.0, t, grid);
    errors.push_back(std::abs(traj.samples.back().u[0] - ref));
  }
  // A fifth-order pair with error-per-step control converges with the tolerance
  // roughly proportionally; demand a decrease by at least a factor 3 per decade overall.
  EXPECT_LT(errors.back(), errors.front() / 27.0);
  for (double e : errors) EXPECT_LT(e, 1e-3);
}

TEST(Integrate, BackwardIntegrationReturnsToStart) {
  // Backward in time the damping pumps energy in, so keep the span short.
  const auto sys = build_scalar_ode(1.0, 3.0);
  const std::vector<double> fwd_grid{0.5, 1.0};
  const auto fwd = integrate(sys, State{0.0, {1.5}, {0.5}}, 1.0, Tolerances{}, fwd_grid);
  const std::vector<double> back_grid{0.5, 0.0};
  const auto back = integrate(sys, fwd.samples.back(), 0.0, Tolerances{}, back_grid);
  EXPECT_NEAR(back.samples.back().u[0], 1.5, 1e-8);
  EXPECT_NEAR(back.samples.back().v[0], 0.5, 1e-8);
  EXPECT_NEAR(back.samples[1].u[0], fwd.samples[1].u[0], 1e-8);
  for (std::size_t i = 1; i < back.size(); ++i) EXPECT_LT(back.samples[i].t, back.samples[i - 1].t);
}

TEST(Integrate, UndampedDriftIsBelowTolerance) {
  PdeParams p;
  p.modes = 6;
  p.grid_points = 18;
  p.b = 0.0;
  p.c = 0.0;
  const auto sys = build_galerkin_wave(p);
  State s0{0.0, {1.0, 0.5, 0.0, 0.2, 0.0, 0.1}, {0.0, 0.0, 1.0, 0.0, 0.0, 0.0}};
  const auto traj = integrate(sys, s0, 20.0, Tolerances{});
  const double e0 = sys.classical_energy(s0);
  for (const auto& s : traj.samples) EXPECT_LE(std::abs(sys.classical_energy(s) - e0) / 20.0, 1e-9 * std::max(1.0, e0));
  EXPECT_LE(traj.max_energy_residual(), 1e-9);
}

TEST(Integrate, ScalarAndKirchhoffResiduals) {
  const auto scalar = build_scalar_ode(1.0, 3.0);
  const auto t1 = integrate(scalar, State{0.0, {10.0}, {0.0}}, 100.0, Tolerances{});
  EXPECT_LE(t1.max_energy_residual(), 1e-8);
  EXPECT_LE(energy_balance(scalar, t1), 1e-8);

  PdeParams p;
  p.modes = 4;
  p.grid_points = 8;
  const auto kir = build_kirchhoff(p, false);
  const auto t2 = integrate(kir, State{0.0, {3.0, -1.0, 0.5, 0.2}, {0.0, 1.0, 0.0, 0.0}}, 50.0, Tolerances{});
  EXPECT_LE(t2.max_energy_residual(), 1e-8);
  EXPECT_LE(energy_balance(kir, t2), 1e-8);
}

TEST(Integrate, EnergyNonIncreasingForDissipativeSystems) {
  PdeParams p;
  p.modes = 8;
  p.grid_points = 24;
  p.mu = -0.5;
  const auto sys = build_galerkin_wave(p);
  State s0{0.0, Vec(8, 0.0), Vec(8, 0.0)};
  for (std::size_t k = 0; k < 8; ++k) s0.u[k] = 5.0 / (k + 1.0);
  const auto traj = integrate(sys, s0, 30.0, Tolerances{});
  for (std::size_t i = 1; i < traj.size(); ++i) {
    const double de = sys.classical_energy(traj.samples[i]) - sys.classical_energy(traj.samples[i - 1]);
    const double dt = traj.samples[i].t - traj.samples[i - 1].t;
    const double scale = std::max(1.0, sys.classical_energy(traj.samples[i - 1]));
    EXPECT_LE(de, Tolerances{}.energy_tol * dt * scale);
  }
}

TEST(Integrate, HugeAmplitudeStartDoesNotUnderflow) {
  const auto sys = build_scalar_ode(1.0, 3.0);
  const std::vector<double> grid{0.01, 1.0};
  const auto traj = integrate(sys, State{0.0, {1e6}, {0.0}}, 1.0, Tolerances{}, grid);
  EXPECT_TRUE(std::isfinite(traj.samples.back().u[0]));
  EXPECT_LE(traj.max_energy_residual(), 1e-8);
}

TEST(Counterexample, MatchesParabola) {
  const CounterexampleResult r = counterexample_regression();
  EXPECT_LE(r.max_deviation, 1e-6);
  EXPECT_NEAR(r.final_state.u[0], -0.5, 1e-6);
  EXPECT_NEAR(r.final_state.v[0], 0.0, 1e-6);
  bool saw_minus_one = false;
  for (const auto& s : r.trajectory.samples) {
    if (s.t == -1.0) {
      saw_minus_one = true;
      EXPECT_NEAR(s.u[0], -0.25, 1e-6);
      EXPECT_NEAR(s.v[0], -0.5, 1e-6);
    }
  }
  EXPECT_TRUE(saw_minus_one);
  EXPECT_LE(r.max_energy_residual, 1e-8);
}

TEST(SolveOde, ExponentialDecay) {
  const OdeRhs rhs = [](double, ConstView y, MutView dy) { dy[0] = -y[0]; };
  const std::vector<double> times{1.0, 2.0};
  const Vec y0{1.0};
  const auto sol = solve_ode(rhs, 0.0, y0, times, 1e-12, 1e-14);
  ASSERT_EQ(sol.values.size(), 2u);
  EXPECT_NEAR(sol.values[1][0], std::exp(-2.0), 1e-11);
}
