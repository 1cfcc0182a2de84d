#include "unibound/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "unibound/errors.hpp"
#include "unibound/io.hpp"

namespace unibound {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double to_double(const std::string& key, const std::string& v) {
  double x = 0.0;
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, x);
  if (ec != std::errc() || ptr != end || !std::isfinite(x)) {
    throw ConfigError(key, "expected a finite number, got '" + v + "'");
  }
  return x;
}

std::uint64_t to_uint(const std::string& key, const std::string& v) {
  std::uint64_t x = 0;
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, x);
  if (ec != std::errc() || ptr != end) throw ConfigError(key, "expected a non-negative integer, got '" + v + "'");
  return x;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(key, "expected true/false, got '" + v + "'");
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  if (trim(v).empty()) return out;
  std::stringstream ss(v);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(to_double(key, trim(cell)));
  return out;
}

template <class E>
E to_enum(const std::string& key, const std::string& v, std::initializer_list<std::pair<const char*, E>> names) {
  for (const auto& [n, e] : names) {
    if (v == n) return e;
  }
  std::string allowed;
  for (const auto& [n, e] : names) allowed += (allowed.empty() ? "" : "|") + std::string(n);
  throw ConfigError(key, "expected one of " + allowed + ", got '" + v + "'");
}

template <class E>
std::string enum_name(E value, std::initializer_list<std::pair<const char*, E>> names) {
  for (const auto& [n, e] : names) {
    if (e == value) return n;
  }
  return "?";
}

const std::initializer_list<std::pair<const char*, Experiment>> kExperiments = {
    {"sweep", Experiment::Sweep}, {"trajectory", Experiment::Trajectory}, {"assumptions", Experiment::Assumptions}};
const std::initializer_list<std::pair<const char*, ModelKind>> kModels = {
    {"scalar", ModelKind::Scalar}, {"oscillator", ModelKind::Oscillator}, {"wave", ModelKind::Wave},
    {"plate", ModelKind::Plate},   {"kirchhoff", ModelKind::Kirchhoff}};
const std::initializer_list<std::pair<const char*, Boundary>> kBoundaries = {{"dirichlet", Boundary::Dirichlet},
                                                                             {"neumann", Boundary::Neumann},
                                                                             {"hinged", Boundary::Hinged},
                                                                             {"clamped", Boundary::Clamped}};
const std::initializer_list<std::pair<const char*, InitialShape>> kShapes = {
    {"single_mode", InitialShape::SingleMode},
    {"random_modal", InitialShape::RandomModal},
    {"spatial_constant", InitialShape::SpatialConstant}};
const std::initializer_list<std::pair<const char*, Expectation>> kExpectations = {
    {"pass", Expectation::Pass}, {"fail", Expectation::Fail}, {"any", Expectation::Any}};

std::string list_text(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + io::format_double(v[i]);
  return out;
}

struct Field {
  const char* key;
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

#define UB_DOUBLE(KEY, MEMBER)                                                              \
  Field {                                                                                   \
    KEY, [](RunConfig& c, const std::string& v) { c.MEMBER = to_double(KEY, v); },          \
        [](const RunConfig& c) { return io::format_double(c.MEMBER); }                      \
  }
#define UB_SIZE(KEY, MEMBER)                                                                \
  Field {                                                                                   \
    KEY, [](RunConfig& c, const std::string& v) { c.MEMBER = to_uint(KEY, v); },            \
        [](const RunConfig& c) { return std::to_string(c.MEMBER); }                         \
  }
#define UB_BOOL(KEY, MEMBER)                                                                \
  Field {                                                                                   \
    KEY, [](RunConfig& c, const std::string& v) { c.MEMBER = to_bool(KEY, v); },            \
        [](const RunConfig& c) { return std::string(c.MEMBER ? "true" : "false"); }         \
  }
#define UB_ENUM(KEY, MEMBER, TABLE)                                                         \
  Field {                                                                                   \
    KEY, [](RunConfig& c, const std::string& v) { c.MEMBER = to_enum(KEY, v, TABLE); },     \
        [](const RunConfig& c) { return enum_name(c.MEMBER, TABLE); }                       \
  }
#define UB_LIST(KEY, MEMBER)                                                                \
  Field {                                                                                   \
    KEY, [](RunConfig& c, const std::string& v) { c.MEMBER = to_list(KEY, v); },            \
        [](const RunConfig& c) { return list_text(c.MEMBER); }                              \
  }

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      UB_ENUM("experiment", experiment, kExperiments),
      UB_ENUM("model", model, kModels),
      UB_DOUBLE("alpha", alpha),
      UB_DOUBLE("beta", beta),
      UB_DOUBLE("omega", omega),
      UB_DOUBLE("delta", delta),
      UB_DOUBLE("rho", rho),
      UB_SIZE("pde.modes", modes),
      UB_SIZE("pde.grid_points", grid_points),
      UB_ENUM("pde.boundary", boundary, kBoundaries),
      UB_DOUBLE("pde.b", b),
      UB_DOUBLE("pde.c", c),
      UB_DOUBLE("pde.lambda", lambda),
      UB_DOUBLE("pde.mu", mu),
      UB_BOOL("pde.degenerate", degenerate),
      UB_DOUBLE("pde.forcing.amplitude", forcing_amplitude),
      UB_SIZE("pde.forcing.mode", forcing_mode),
      UB_DOUBLE("pde.forcing.frequency", forcing_frequency),
      UB_ENUM("initial.shape", shape, kShapes),
      UB_SIZE("initial.mode", initial_mode),
      UB_DOUBLE("initial.velocity", initial_velocity),
      UB_LIST("amplitudes", amplitudes),
      UB_DOUBLE("t_start", t_start),
      UB_DOUBLE("t_end", t_end),
      UB_DOUBLE("grid_ratio", grid_ratio),
      UB_LIST("probe_times", probe_times),
      UB_DOUBLE("sweep.saturation_decades", saturation_decades),
      UB_DOUBLE("sweep.saturation_limit", saturation_limit),
      UB_DOUBLE("bound.t_lo", bound_t_lo),
      UB_DOUBLE("bound.t_hi", bound_t_hi),
      UB_DOUBLE("decay.t_lo", decay_t_lo),
      UB_DOUBLE("decay.t_hi", decay_t_hi),
      UB_DOUBLE("decay.stability_ratio", decay_stability),
      UB_DOUBLE("tol.rel", tol.rel_tol),
      UB_DOUBLE("tol.abs", tol.abs_tol),
      UB_DOUBLE("tol.energy", tol.energy_tol),
      UB_DOUBLE("tol.dt_min", tol.dt_min),
      UB_DOUBLE("tol.dt_max", tol.dt_max),
      UB_SIZE("tol.max_steps", tol.max_steps),
      UB_DOUBLE("verdict.energy_residual_limit", energy_residual_limit),
      UB_DOUBLE("certificate.t_from", certificate_t_from),
      UB_DOUBLE("certificate.epsilon_fraction", certificate_fraction),
      UB_SIZE("assumptions.samples", samples),
      UB_DOUBLE("assumptions.amplitude_lo", sample_amplitude_lo),
      UB_DOUBLE("assumptions.amplitude_hi", sample_amplitude_hi),
      Field{"output_dir", [](RunConfig& c, const std::string& v) { c.output_dir = v; },
            [](const RunConfig& c) { return c.output_dir.string(); }},
      UB_SIZE("seed", seed),
      UB_SIZE("jobs", jobs),
      UB_BOOL("plots", plots),
      UB_BOOL("exit_on_violation", exit_on_violation),
      UB_ENUM("expect.universal_bound", expect_universal_bound, kExpectations),
      UB_ENUM("expect.decay", expect_decay, kExpectations),
      UB_ENUM("expect.certificate", expect_certificate, kExpectations),
      UB_ENUM("expect.assumptions", expect_assumptions, kExpectations),
  };
  return table;
}

#undef UB_DOUBLE
#undef UB_SIZE
#undef UB_BOOL
#undef UB_ENUM
#undef UB_LIST

bool is_pde(ModelKind m) { return m == ModelKind::Wave || m == ModelKind::Plate || m == ModelKind::Kirchhoff; }

}  // namespace

void apply_setting(RunConfig& config, std::string_view key, std::string_view value) {
  const std::string k = trim(key), v = trim(value);
  for (const auto& f : fields()) {
    if (k == f.key) {
      f.set(config, v);
      return;
    }
  }
  throw ConfigError(k, "unknown configuration key");
}

void apply_override(RunConfig& config, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw ConfigError(trim(assignment), "override must have the form key=value");
  }
  apply_setting(config, assignment.substr(0, eq), assignment.substr(eq + 1));
}

RunConfig parse_config(std::string_view text, const std::string& source) {
  RunConfig config;
  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(trim(line), source + ":" + std::to_string(lineno) + ": expected key = value");
    }
    try {
      apply_setting(config, line.substr(0, eq), line.substr(eq + 1));
    } catch (const ConfigError& e) {
      std::string msg = e.what();
      if (msg.rfind(e.key() + ": ", 0) == 0) msg.erase(0, e.key().size() + 2);
      throw ConfigError(e.key(), source + ":" + std::to_string(lineno) + ": " + msg);
    }
  }
  return config;
}

RunConfig load_config(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw std::runtime_error("config file not found: " + path.string());
  return parse_config(io::read_text(path), path.string());
}

void validate(const RunConfig& c) {
  auto need = [](bool ok, const char* key, const std::string& msg) {
    if (!ok) throw ConfigError(key, msg);
  };
  need(c.alpha > 0.0, "alpha", "must be positive");
  need(c.beta > 0.0, "beta", "must be positive");
  if (c.model == ModelKind::Oscillator) {
    need(c.omega > 0.0, "omega", "must be positive");
    need(c.delta > 0.0, "delta", "must be positive");
    need(c.rho >= 0.0, "rho", "must be non-negative");
  }

  if (is_pde(c.model)) {
    need(c.modes >= 1, "pde.modes", "must be at least 1");
    need(c.grid_points >= 2 * c.modes, "pde.grid_points",
         "must be at least 2 * pde.modes so projected nonlinearities are dealiased");
    need(c.b >= 0.0, "pde.b", "must be non-negative");
    need(c.c >= 0.0, "pde.c", "must be non-negative");
    need(c.forcing_amplitude >= 0.0, "pde.forcing.amplitude", "must be non-negative");
    need(c.forcing_mode >= 1 && c.forcing_mode <= c.modes, "pde.forcing.mode", "must lie in 1..pde.modes");
    need(c.initial_mode >= 1 && c.initial_mode <= c.modes, "initial.mode", "must lie in 1..pde.modes");
    if (c.model == ModelKind::Wave) {
      need(c.boundary == Boundary::Dirichlet || c.boundary == Boundary::Neumann, "pde.boundary",
           "the wave model supports dirichlet or neumann");
    }
    if (c.model == ModelKind::Plate) {
      need(c.boundary == Boundary::Hinged, "pde.boundary",
           "the plate model supports the hinged boundary only (clamped is not implemented)");
    }
    if (c.model == ModelKind::Kirchhoff) {
      // The assumptions experiment may sample the Neumann surrogate to exhibit the failure.
      const bool surrogate = c.boundary == Boundary::Neumann && c.experiment == Experiment::Assumptions;
      need(c.boundary != Boundary::Neumann || surrogate, "pde.boundary",
           "Kirchhoff with Neumann conditions is excluded: every constant function is a stationary "
           "solution, so no bound independent of the data can hold (the potential is not coercive on "
           "constants)");
      need(c.boundary == Boundary::Dirichlet || surrogate, "pde.boundary",
           "the Kirchhoff model supports dirichlet only");
    }
    if (c.shape == InitialShape::SpatialConstant) {
      need(c.boundary == Boundary::Neumann, "initial.shape", "spatial_constant requires the neumann boundary");
    }
  } else {
    need(c.shape != InitialShape::SpatialConstant, "initial.shape", "spatial_constant needs a PDE model");
  }

  need(!c.amplitudes.empty(), "amplitudes", "empty amplitude list");
  for (std::size_t i = 0; i < c.amplitudes.size(); ++i) {
    need(c.amplitudes[i] >= 0.0, "amplitudes", "amplitudes must be non-negative");
    if (i > 0) need(c.amplitudes[i] > c.amplitudes[i - 1], "amplitudes", "amplitudes must be strictly increasing");
  }
  need(c.t_end != c.t_start, "t_end", "time span must be non-degenerate");
  const double lo = std::min(c.t_start, c.t_end), hi = std::max(c.t_start, c.t_end);
  for (double p : c.probe_times) need(p >= lo && p <= hi, "probe_times", "probe times must lie within the span");
  need(c.grid_ratio > 1.0, "grid_ratio", "must exceed 1");
  need(c.saturation_decades >= 0.0, "sweep.saturation_decades", "must be non-negative");
  need(c.saturation_limit >= 1.0, "sweep.saturation_limit", "must be at least 1");
  need(c.bound_t_lo > 0.0 && c.bound_t_hi > c.bound_t_lo, "bound.t_lo", "bound window must satisfy 0 < t_lo < t_hi");
  need(c.decay_t_lo > 0.0 && c.decay_t_hi > c.decay_t_lo, "decay.t_lo", "decay window must satisfy 0 < t_lo < t_hi");
  need(c.decay_stability >= 1.0, "decay.stability_ratio", "must be at least 1");
  try {
    c.tol.validate();
  } catch (const ValidationError& e) {
    throw ConfigError("tol", e.what());
  }
  need(c.energy_residual_limit > 0.0, "verdict.energy_residual_limit", "must be positive");
  need(c.certificate_fraction > 0.0 && c.certificate_fraction <= 1.0, "certificate.epsilon_fraction",
       "must lie in (0, 1]");
  need(c.samples >= 1000, "assumptions.samples", "at least 1000 samples are required");
  need(c.sample_amplitude_lo > 0.0 && c.sample_amplitude_hi >= c.sample_amplitude_lo, "assumptions.amplitude_lo",
       "sampling range must satisfy 0 < lo <= hi");
  need(!c.output_dir.empty(), "output_dir", "must not be empty");
}

std::vector<std::pair<std::string, std::string>> config_entries(const RunConfig& config) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& f : fields()) out.emplace_back(f.key, f.get(config));
  return out;
}

std::string to_text(const RunConfig& config) {
  std::string out;
  for (const auto& [k, v] : config_entries(config)) out += k + " = " + v + "\n";
  return out;
}

std::string to_string(Experiment e) { return enum_name(e, kExperiments); }
std::string to_string(ModelKind m) { return enum_name(m, kModels); }
std::string to_string(Expectation e) { return enum_name(e, kExpectations); }

}  // namespace unibound
