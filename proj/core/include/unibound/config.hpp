#pragma once

// Run configuration for the experiment harness.
//
// File format: one `key = value` per line, `#` starts a comment, lists are
// comma-separated. Keys are dotted (`pde.modes`, `tol.rel`); unknown keys are
// rejected. Overrides use the same syntax and are applied in order.

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "unibound/integrator.hpp"
#include "unibound/models.hpp"

namespace unibound {

enum class Experiment { Sweep, Trajectory, Assumptions };
enum class ModelKind { Scalar, Oscillator, Wave, Plate, Kirchhoff };
enum class InitialShape { SingleMode, RandomModal, SpatialConstant };
/// Expected outcome of a verdict; `Any` disables the check.
enum class Expectation { Pass, Fail, Any };

struct RunConfig {
  Experiment experiment = Experiment::Sweep;
  ModelKind model = ModelKind::Scalar;

  double alpha = 1.0;
  double beta = 3.0;
  double omega = 1.0;  ///< oscillator
  double delta = 1.0;  ///< oscillator
  double rho = 1.0;    ///< oscillator

  std::size_t modes = 8;
  std::size_t grid_points = 24;
  Boundary boundary = Boundary::Dirichlet;
  double b = 1.0;
  double c = 1.0;
  double lambda = 0.0;
  double mu = 0.0;
  bool degenerate = false;
  double forcing_amplitude = 0.0;  ///< h0 = amplitude * phi_mode
  std::size_t forcing_mode = 1;
  double forcing_frequency = 0.0;

  InitialShape shape = InitialShape::SingleMode;
  std::size_t initial_mode = 1;
  double initial_velocity = 0.0;  ///< v0 = initial_velocity * u0

  std::vector<double> amplitudes{1.0, 10.0, 100.0, 1e3, 1e4, 1e5, 1e6};
  double t_start = 0.0;
  double t_end = 100.0;
  double grid_ratio = 1.05;
  std::vector<double> probe_times{0.01, 0.1, 1.0, 10.0, 100.0};

  double saturation_decades = 3.0;
  double saturation_limit = 2.0;
  double bound_t_lo = 0.01;
  double bound_t_hi = 1.0;
  double decay_t_lo = 10.0;
  double decay_t_hi = 100.0;
  double decay_stability = 2.0;

  Tolerances tol{};
  double energy_residual_limit = 1e-8;

  double certificate_t_from = 0.01;
  double certificate_fraction = 0.5;

  std::size_t samples = 1000;
  double sample_amplitude_lo = 1e-3;
  double sample_amplitude_hi = 1e3;

  std::filesystem::path output_dir = "run";
  std::uint64_t seed = 12345;
  std::size_t jobs = 0;  ///< 0 = hardware concurrency
  bool plots = true;
  bool exit_on_violation = true;

  Expectation expect_universal_bound = Expectation::Pass;
  Expectation expect_decay = Expectation::Pass;
  Expectation expect_certificate = Expectation::Pass;
  Expectation expect_assumptions = Expectation::Pass;
};

/// Applies one `key=value` assignment. Throws ConfigError naming the key.
void apply_setting(RunConfig& config, std::string_view key, std::string_view value);
/// Same, from a single `key=value` string.
void apply_override(RunConfig& config, std::string_view assignment);

/// Parses configuration text on top of the defaults. `source` labels messages.
RunConfig parse_config(std::string_view text, const std::string& source = "<config>");
/// Reads a configuration file; a missing file is a runtime error carrying the path.
RunConfig load_config(const std::filesystem::path& path);

/// Cross-field validation (ConfigError naming the offending key).
void validate(const RunConfig& config);

/// Every key with its current value, in documentation order.
std::vector<std::pair<std::string, std::string>> config_entries(const RunConfig& config);
/// Text that parses back to the same configuration.
std::string to_text(const RunConfig& config);

std::string to_string(Experiment e);
std::string to_string(ModelKind m);
std::string to_string(Expectation e);

}  // namespace unibound
