#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "unibound/models.hpp"

namespace unibound {

struct Tolerances {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  /// Allowed violation of the energy identity per unit time, relative to
  /// max(1, |E0|) over the step.
  double energy_tol = 1e-9;
  double dt_min = 1e-14;
  double dt_max = 10.0;
  std::size_t max_steps = 50'000'000;

  void validate() const;
};

struct StepOutcome {
  State state;
  double dt_used = 0.0;
  /// |dE0 + int <g, v> dt| / (|dt| * max(1, |E0|)) over the accepted step.
  double energy_residual = 0.0;
  /// int <g(t, v), v> dt over the step (same order as the stepper).
  double dissipation = 0.0;
  /// Step size suggested for the next step.
  double dt_next = 0.0;
  std::size_t rejected = 0;
};

/// Single accepted step of the energy-gated Dormand-Prince 5(4) pair.
/// The sign of dt_proposed selects the direction of integration.
StepOutcome step(const EvolutionSystem& system, const State& state, double dt_proposed,
                 const Tolerances& tol);

struct Trajectory {
  /// Samples on the output grid, ordered in the direction of integration.
  std::vector<State> samples;
  /// One entry per interval between consecutive samples, normalized as in StepOutcome.
  std::vector<double> energy_residuals;
  /// int <g, v> dt per interval.
  std::vector<double> dissipation;
  Tolerances tolerances;
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;
  /// Residual of the energy identity over the whole span, same normalization.
  double cumulative_residual = 0.0;

  std::size_t size() const noexcept { return samples.size(); }
  double max_energy_residual() const;
};

/// Output grid t0, t0 + d, t0 + d r, t0 + d r^2, ..., t1 (d = first_offset, signed by
/// the direction). first_offset <= 0 picks min(1e-4, |t1 - t0| / 1000).
std::vector<double> geometric_grid(double t0, double t1, double ratio = 1.05, double first_offset = 0.0);

/// Integrates from state0 to t_end. `output_times` must lie within the span; the
/// endpoints are always included. An empty grid selects geometric_grid(t0, t_end).
Trajectory integrate(const EvolutionSystem& system, const State& state0, double t_end,
                     const Tolerances& tol, std::span<const double> output_times = {});

/// Maximum over sample intervals of |dE0 + int <g, v>| / (|dt| * max(1, |E0|)),
/// recomputing E0 from the stored states.
double energy_balance(const EvolutionSystem& system, const Trajectory& trajectory);

// Plain adaptive integration of a first-order system y' = f(t, y).

using OdeRhs = std::function<void(double, ConstView, MutView)>;

struct OdeSolution {
  std::vector<double> times;
  std::vector<Vec> values;
  std::size_t steps = 0;
};

OdeSolution solve_ode(const OdeRhs& rhs, double t0, ConstView y0, std::span<const double> output_times,
                      double rel_tol, double abs_tol);

}  // namespace unibound
