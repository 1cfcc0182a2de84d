#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "unibound/certificates.hpp"
#include "unibound/config.hpp"
#include "unibound/integrator.hpp"
#include "unibound/models.hpp"

namespace unibound {

const char* version();

using Logger = std::function<void(const std::string&)>;

EvolutionSystem build_system(const RunConfig& config);

/// Initial data of the configured family scaled by `amplitude`, at t_start.
State initial_state(const RunConfig& config, const EvolutionSystem& system, double amplitude);

enum class Verdict { Pass, Fail, NotApplicable };
std::string to_string(Verdict v);

struct SweepReport {
  std::vector<double> amplitudes;
  std::vector<double> probe_times;
  /// energy[i][j] = E0 at probe_times[j] from amplitudes[i] (NaN for failed cells).
  std::vector<std::vector<double>> energy;
  /// Per probe time: max over amplitudes >= reference of E0 / E0(reference).
  std::vector<double> saturation_ratio;
  double reference_amplitude = 0.0;
  Verdict universal_bound = Verdict::NotApplicable;

  /// One fitted envelope E0 + C1 + 1 <= Gamma t^(-1/gamma_min) + Gamma_star for all amplitudes.
  std::optional<BoundVerdict> small_time_bound;

  /// Decay rate 2/alpha probed on the decay window.
  double decay_rate = 0.0;
  std::vector<std::optional<double>> decay_slopes;
  /// sup over the decay window of E0 t^rate, per amplitude.
  std::vector<std::optional<double>> decay_levels;
  /// max / min of decay_levels over the amplitudes >= reference_amplitude.
  double decay_spread = 0.0;
  Verdict decay = Verdict::NotApplicable;

  std::vector<std::optional<std::string>> errors;
  std::vector<Trajectory> trajectories;
  double max_energy_residual = 0.0;
};

/// Integrates the configured family at every amplitude (cells run concurrently
/// up to config.jobs). Integrator failures are recorded per cell.
SweepReport amplitude_sweep(const RunConfig& config, const Logger& log = {});

struct CounterexampleResult {
  double max_deviation = 0.0;  ///< max |u - (t^2/4 - 1/2)|, |v - t/2| over the output times
  State final_state;
  double max_energy_residual = 0.0;
  Trajectory trajectory;
};

/// Oscillator omega = delta = rho = 1 from (24.5, -5) at t = -10 to t = 0, against
/// the exact solution u = t^2/4 - 1/2.
CounterexampleResult counterexample_regression(const Tolerances& tol = {});

struct RunResult {
  std::filesystem::path directory;
  std::filesystem::path manifest;
  std::vector<std::pair<std::string, Verdict>> verdicts;
  /// Verdicts that contradict the configured expectations.
  std::vector<std::string> mismatches;
  std::vector<std::filesystem::path> files;
};

/// Runs the configured experiment and writes CSV files, SVG plots (optional)
/// and manifest.json into config.output_dir.
RunResult run_experiment(const RunConfig& config, const Logger& log = {});

/// Text summary of a run directory; also writes report.txt and report.svg there.
std::string render_report(const std::filesystem::path& directory);

/// CSV columns of trajectory files.
const std::vector<std::string>& trajectory_columns();

}  // namespace unibound
