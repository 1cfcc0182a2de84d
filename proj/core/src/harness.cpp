#include "unibound/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>
#include "unibound/errors.hpp"
#include "unibound/io.hpp"

namespace unibound {
namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

PdeParams pde_params(const RunConfig& c) {
  PdeParams p;
  p.modes = c.modes;
  p.grid_points = c.grid_points;
  p.boundary = c.boundary;
  p.b = c.b;
  p.c = c.c;
  p.lambda = c.lambda;
  p.mu = c.mu;
  p.alpha = c.alpha;
  p.beta = c.beta;
  if (c.forcing_amplitude > 0.0) {
    const Vec grid = quadrature_grid(c.grid_points);
    p.forcing.grid_values.resize(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) {
      p.forcing.grid_values[j] = c.forcing_amplitude * eigenfunction(c.boundary, c.forcing_mode, grid[j]);
    }
    p.forcing.frequency = c.forcing_frequency;
  }
  return p;
}

bool matches(Verdict v, Expectation e) {
  if (e == Expectation::Any) return true;
  return (e == Expectation::Pass && v == Verdict::Pass) || (e == Expectation::Fail && v == Verdict::Fail);
}

struct PhiSetup {
  double gamma = 0.0;
  double epsilon = 0.0;
};

// Bound-mode modified energy for the CSV column, when the theory applies.
std::optional<PhiSetup> phi_setup(const EvolutionSystem& system, const Trajectory& traj, double fraction) {
  const auto& k = system.declared_constants();
  if (!k || !k->c1) return std::nullopt;
  try {
    const Exponents e = exponents(system.alpha(), system.beta());
    const double eps = fraction * calibrate_epsilon(system, traj, e.gamma_min, EnergyMode::Bound);
    return PhiSetup{e.gamma_min, eps};
  } catch (const RegimeError&) {
    return std::nullopt;
  } catch (const ValidationError&) {
    return std::nullopt;
  }
}

io::CsvTable trajectory_table(const EvolutionSystem& system, const Trajectory& traj, double fraction) {
  const auto setup = phi_setup(system, traj, fraction);
  const auto& k = system.declared_constants();
  const NormSet& n = system.norms();
  io::CsvTable t;
  t.header = trajectory_columns();
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const State& s = traj.samples[i];
    const double e0 = system.classical_energy(s);
    const double ehat = (k && k->c1) ? e0 + *k->c1 + 1.0 : kNaN;
    double phi = kNaN;
    if (setup) phi = energies(system, s, setup->epsilon, setup->gamma, EnergyMode::Bound).phi;
    const double residual = i == 0 ? 0.0 : traj.energy_residuals[i - 1];
    t.rows.push_back({s.t, e0, ehat, phi, n.norm_h(s.v), n.norm_x(s.v), n.norm_y(s.u), residual});
  }
  return t;
}

std::vector<double> output_grid(const RunConfig& c) {
  std::vector<double> grid = geometric_grid(c.t_start, c.t_end, c.grid_ratio);
  grid.insert(grid.end(), c.probe_times.begin(), c.probe_times.end());
  return grid;
}

std::string amplitude_tag(std::size_t i) {
  std::ostringstream ss;
  ss << "trajectory_a" << i << ".csv";
  return ss.str();
}

std::vector<double> envelope(const BoundFit& fit, const std::vector<double>& t) {
  std::vector<double> y;
  for (double x : t) {
    y.push_back(fit.kind == BoundKind::Decay ? fit.gamma * std::pow(x, -fit.rate)
                                             : fit.gamma * std::pow(x, -fit.rate) + fit.gamma_star);
  }
  return y;
}

std::vector<double> window(const std::vector<double>& t, double lo, double hi) {
  std::vector<double> out;
  for (double x : t) {
    if (x >= lo && x <= hi) out.push_back(x);
  }
  return out;
}

class Outputs {
 public:
  explicit Outputs(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

  void csv(const std::string& name, const io::CsvTable& table) {
    io::write_csv(dir_ / name, table);
    files_.push_back(name);
  }
  void text(const std::string& name, const std::string& body) {
    io::write_text(dir_ / name, body);
    files_.push_back(name);
  }
  void svg(const std::string& name, const std::string& title, const std::vector<io::PlotSeries>& series) {
    io::write_loglog_svg(dir_ / name, title, "t", "energy", series);
    files_.push_back(name);
  }
  const fs::path& dir() const { return dir_; }
  const std::vector<std::string>& files() const { return files_; }

 private:
  fs::path dir_;
  std::vector<std::string> files_;
};

json config_json(const RunConfig& c) {
  json j = json::object();
  for (const auto& [k, v] : config_entries(c)) j[k] = v;
  return j;
}

}  // namespace

const char* version() { return "0.1.0"; }

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::NotApplicable: return "n/a";
  }
  return "?";
}

const std::vector<std::string>& trajectory_columns() {
  static const std::vector<std::string> cols = {"t",        "E0",       "Ehat",     "Phi",
                                                "norm_H_v", "norm_X_v", "norm_Y_u", "energy_residual"};
  return cols;
}

EvolutionSystem build_system(const RunConfig& c) {
  switch (c.model) {
    case ModelKind::Scalar: return build_scalar_ode(c.alpha, c.beta);
    case ModelKind::Oscillator: return build_oscillator(c.omega, c.delta, c.rho);
    case ModelKind::Wave: return build_galerkin_wave(pde_params(c));
    case ModelKind::Plate: return build_galerkin_plate(pde_params(c));
    case ModelKind::Kirchhoff:
      if (c.boundary == Boundary::Neumann) return build_kirchhoff_neumann_surrogate(pde_params(c));
      return build_kirchhoff(pde_params(c), c.degenerate);
  }
  throw ValidationError("unknown model");
}

State initial_state(const RunConfig& c, const EvolutionSystem& system, double amplitude) {
  State s;
  s.t = c.t_start;
  Vec shape(system.dim(), 0.0);
  if (system.dim() == 1) {
    shape[0] = 1.0;
  } else {
    switch (c.shape) {
      case InitialShape::SingleMode:
        shape.at(c.initial_mode - 1) = 1.0;
        break;
      case InitialShape::RandomModal: {
        std::mt19937_64 rng(c.seed);
        std::normal_distribution<double> normal(0.0, 1.0);
        double nrm = 0.0;
        for (std::size_t k = 0; k < shape.size(); ++k) {
          shape[k] = normal(rng) / std::pow(static_cast<double>(k + 1), 2.0);
          nrm += shape[k] * shape[k];
        }
        nrm = std::sqrt(nrm);
        for (auto& x : shape) x /= nrm;
        break;
      }
      case InitialShape::SpatialConstant:
        // The first Neumann mode is 1/sqrt(pi): the constant function 1 has coefficient sqrt(pi).
        shape[0] = std::sqrt(M_PI);
        break;
    }
  }
  s.u.resize(shape.size());
  s.v.resize(shape.size());
  for (std::size_t i = 0; i < shape.size(); ++i) {
    s.u[i] = amplitude * shape[i];
    s.v[i] = c.initial_velocity * amplitude * shape[i];
  }
  return s;
}

SweepReport amplitude_sweep(const RunConfig& c, const Logger& log) {
  validate(c);
  const EvolutionSystem system = build_system(c);
  const std::vector<double> grid = output_grid(c);

  SweepReport r;
  r.amplitudes = c.amplitudes;
  r.probe_times = c.probe_times;
  const std::size_t n = c.amplitudes.size();
  r.energy.assign(n, std::vector<double>(c.probe_times.size(), kNaN));
  r.errors.assign(n, std::nullopt);
  r.trajectories.assign(n, Trajectory{});
  r.decay_slopes.assign(n, std::nullopt);
  r.decay_levels.assign(n, std::nullopt);
  r.decay_rate = 2.0 / c.alpha;

  std::mutex log_mutex;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        Trajectory traj = integrate(system, initial_state(c, system, c.amplitudes[i]), c.t_end, c.tol, grid);
        for (std::size_t j = 0; j < c.probe_times.size(); ++j) {
          for (const auto& s : traj.samples) {
            if (s.t == c.probe_times[j]) {
              r.energy[i][j] = system.classical_energy(s);
              break;
            }
          }
        }
        r.trajectories[i] = std::move(traj);
      } catch (const std::exception& e) {
        r.errors[i] = e.what();
      }
      if (log) {
        std::lock_guard lock(log_mutex);
        log("amplitude " + io::format_double(c.amplitudes[i]) +
            (r.errors[i] ? ": failed: " + *r.errors[i] : ": done"));
      }
    }
  };
  std::size_t jobs = c.jobs ? c.jobs : std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min(jobs, n);
  std::vector<std::thread> pool;
  for (std::size_t k = 1; k < jobs; ++k) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  // Saturation ratios against the largest amplitude at least `decades` below the top.
  const double threshold = c.amplitudes.back() / std::pow(10.0, c.saturation_decades);
  std::size_t ref = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (c.amplitudes[i] <= threshold * (1.0 + 1e-12)) ref = i;
  }
  r.reference_amplitude = c.amplitudes[ref];
  bool universal = true;
  for (std::size_t j = 0; j < c.probe_times.size(); ++j) {
    const double base = r.energy[ref][j];
    double top = 0.0;
    bool ok = std::isfinite(base);
    for (std::size_t i = ref; i < n; ++i) {
      if (!std::isfinite(r.energy[i][j])) ok = false;
      else top = std::max(top, r.energy[i][j]);
    }
    double ratio = kNaN;
    if (ok) ratio = base > 0.0 ? top / base : (top > 0.0 ? HUGE_VAL : 1.0);
    r.saturation_ratio.push_back(ratio);
    if (!(ratio <= c.saturation_limit)) universal = false;
  }
  r.universal_bound = c.probe_times.empty() ? Verdict::NotApplicable : (universal ? Verdict::Pass : Verdict::Fail);

  std::vector<EnergySeries> series;
  bool decay_ok = true;
  double lo = HUGE_VAL, hi = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (r.errors[i]) {
      if (i >= ref) decay_ok = false;
      continue;
    }
    series.push_back(energy_series(system, r.trajectories[i], c.amplitudes[i]));
    r.max_energy_residual = std::max(r.max_energy_residual, r.trajectories[i].max_energy_residual());
    const auto& es = series.back();
    try {
      r.decay_slopes[i] = fit_decay_exponent(es.t, es.e0, c.decay_t_lo, c.decay_t_hi).slope;
    } catch (const ValidationError&) {
    }
    try {
      const double level = fit_bound(std::span(&es, 1), decay_spec(r.decay_rate, c.decay_t_lo, c.decay_t_hi)).level();
      r.decay_levels[i] = level;
      if (i >= ref) {
        lo = std::min(lo, level);
        hi = std::max(hi, level);
      }
    } catch (const ValidationError&) {
      if (i >= ref) decay_ok = false;
    }
  }
  if (decay_ok && hi >= lo) {
    r.decay_spread = lo > 0.0 ? hi / lo : (hi > 0.0 ? HUGE_VAL : 1.0);
    r.decay = std::isfinite(hi) && r.decay_spread <= c.decay_stability ? Verdict::Pass : Verdict::Fail;
  } else {
    r.decay_spread = kNaN;
    r.decay = series.empty() ? Verdict::NotApplicable : Verdict::Fail;
  }

  const auto& k = system.declared_constants();
  if (!series.empty() && k && k->c1) {
    try {
      BoundSpec spec = small_time_spec(exponents(c.alpha, c.beta), c.bound_t_lo, c.bound_t_hi, *k->c1);
      spec.stability_limit = c.saturation_limit;
      r.small_time_bound = verify_bound(series, spec);
    } catch (const RegimeError&) {
    } catch (const ValidationError&) {
    }
  }
  return r;
}

CounterexampleResult counterexample_regression(const Tolerances& tol) {
  const EvolutionSystem system = build_oscillator(1.0, 1.0, 1.0);
  State s0{-10.0, {24.5}, {-5.0}};
  std::vector<double> grid;
  for (int i = 0; i <= 40; ++i) grid.push_back(-10.0 + 0.25 * i);
  CounterexampleResult r;
  r.trajectory = integrate(system, s0, 0.0, tol, grid);
  for (const auto& s : r.trajectory.samples) {
    const double u = s.t * s.t / 4.0 - 0.5, v = s.t / 2.0;
    r.max_deviation = std::max({r.max_deviation, std::abs(s.u[0] - u), std::abs(s.v[0] - v)});
  }
  r.final_state = r.trajectory.samples.back();
  r.max_energy_residual = r.trajectory.max_energy_residual();
  return r;
}

RunResult run_experiment(const RunConfig& c, const Logger& log) {
  validate(c);
  const auto started = std::chrono::steady_clock::now();
  Outputs out(c.output_dir);
  RunResult result;
  result.directory = c.output_dir;
  auto verdict = [&](const std::string& name, Verdict v, Expectation e) {
    result.verdicts.emplace_back(name, v);
    if (!matches(v, e)) result.mismatches.push_back(name + ": " + to_string(v) + " (expected " + to_string(e) + ")");
  };
  const EvolutionSystem system = build_system(c);
  json extra = json::object();

  if (c.experiment == Experiment::Sweep) {
    const SweepReport r = amplitude_sweep(c, log);
    io::CsvTable energy;
    energy.header.push_back("amplitude");
    for (double p : r.probe_times) {
      std::ostringstream h;
      h << "E0_t=" << p;
      energy.header.push_back(h.str());
    }
    for (std::size_t i = 0; i < r.amplitudes.size(); ++i) {
      std::vector<double> row{r.amplitudes[i]};
      row.insert(row.end(), r.energy[i].begin(), r.energy[i].end());
      energy.rows.push_back(std::move(row));
    }
    out.csv("sweep_energy.csv", energy);

    io::CsvTable sat{{"probe_time", "saturation_ratio"}, {}};
    for (std::size_t j = 0; j < r.probe_times.size(); ++j) sat.rows.push_back({r.probe_times[j], r.saturation_ratio[j]});
    out.csv("saturation.csv", sat);

    io::CsvTable decay{{"amplitude", "slope", "sup_E0_t_rate"}, {}};
    for (std::size_t i = 0; i < r.amplitudes.size(); ++i) {
      decay.rows.push_back({r.amplitudes[i], r.decay_slopes[i].value_or(kNaN), r.decay_levels[i].value_or(kNaN)});
    }
    out.csv("decay.csv", decay);

    std::vector<io::PlotSeries> plot;
    std::vector<double> all_t;
    for (std::size_t i = 0; i < r.amplitudes.size(); ++i) {
      if (r.errors[i]) continue;
      const auto table = trajectory_table(system, r.trajectories[i], c.certificate_fraction);
      out.csv(amplitude_tag(i), table);
      plot.push_back({"A=" + io::format_double(r.amplitudes[i]), table.column("t"), table.column("E0"), false});
      if (all_t.empty()) all_t = table.column("t");
    }
    if (r.small_time_bound) {
      const auto t = window(all_t, c.bound_t_lo, c.bound_t_hi);
      plot.push_back({"small-time envelope", t, envelope(r.small_time_bound->fit, t), true});
    }
    for (std::size_t i = 0; i < r.amplitudes.size(); ++i) {
      if (r.decay_levels[i] && i + 1 == r.amplitudes.size()) {
        BoundFit f;
        f.kind = BoundKind::Decay;
        f.rate = r.decay_rate;
        f.gamma = *r.decay_levels[i];
        const auto t = window(all_t, c.decay_t_lo, c.decay_t_hi);
        plot.push_back({"decay envelope", t, envelope(f, t), true});
      }
    }
    if (c.plots) out.svg("sweep_energy.svg", "E0(t) across amplitudes", plot);

    verdict("universal_bound", r.universal_bound, c.expect_universal_bound);
    verdict("decay_2_over_alpha", r.decay, c.expect_decay);
    const Verdict identity = r.max_energy_residual <= c.energy_residual_limit ? Verdict::Pass : Verdict::Fail;
    result.verdicts.emplace_back("energy_identity", identity);
    if (r.small_time_bound) result.verdicts.emplace_back("small_time_bound", r.small_time_bound->stable ? Verdict::Pass : Verdict::Fail);

    extra["reference_amplitude"] = r.reference_amplitude;
    extra["saturation_ratio"] = r.saturation_ratio;
    extra["decay_spread"] = r.decay_spread;
    extra["max_energy_residual"] = r.max_energy_residual;
    json errs = json::array();
    for (std::size_t i = 0; i < r.errors.size(); ++i) {
      if (r.errors[i]) errs.push_back({{"amplitude", r.amplitudes[i]}, {"error", *r.errors[i]}});
    }
    extra["cell_errors"] = errs;
    if (r.small_time_bound) {
      extra["small_time_bound"] = {{"Gamma", r.small_time_bound->fit.gamma},
                                   {"Gamma_star", r.small_time_bound->fit.gamma_star},
                                   {"rate", r.small_time_bound->fit.rate},
                                   {"stability_ratio", r.small_time_bound->stability_ratio}};
    }
  } else if (c.experiment == Experiment::Trajectory) {
    const double amplitude = c.amplitudes.back();
    const Trajectory traj = integrate(system, initial_state(c, system, amplitude), c.t_end, c.tol, output_grid(c));
    if (log) log("integrated " + std::to_string(traj.accepted_steps) + " steps");
    const auto table = trajectory_table(system, traj, c.certificate_fraction);
    out.csv("trajectory.csv", table);

    const Verdict identity = traj.max_energy_residual() <= c.energy_residual_limit ? Verdict::Pass : Verdict::Fail;
    Verdict cert = Verdict::NotApplicable;
    std::vector<io::PlotSeries> plot{{"E0", table.column("t"), table.column("E0"), false},
                                     {"Phi", table.column("t"), table.column("Phi"), false}};
    try {
      const Exponents e = exponents(system.alpha(), system.beta());
      CertifyOptions opts;
      opts.t_from = c.certificate_t_from;
      opts.epsilon_fraction = c.certificate_fraction;
      const CertificateReport rep = certify(system, traj, e.gamma_min, opts);
      const auto& q = rep.inequality;
      io::CsvTable ct{{"t", "Phi", "Phi_dot", "residual", "base_form_residual", "normalized"}, {}};
      for (std::size_t i = 0; i < q.t.size(); ++i) {
        ct.rows.push_back({q.t[i], q.phi[i], q.phi_dot[i], q.residual[i], q.base_form_residual[i], q.normalized[i]});
      }
      out.csv("certificate.csv", ct);
      cert = (rep.epsilon > 0.0 && rep.sandwich && q.holds) ? Verdict::Pass : Verdict::Fail;
      extra["certificate"] = {{"gamma", rep.gamma}, {"epsilon", rep.epsilon}, {"sandwich", rep.sandwich},
                              {"inequality_holds", q.holds}, {"checked", q.checked}};

      const EnergySeries es = energy_series(system, traj, amplitude);
      try {
        const BoundFit f = fit_bound(std::span(&es, 1), decay_spec(2.0 / system.alpha(), c.decay_t_lo, c.decay_t_hi));
        const auto t = window(table.column("t"), c.decay_t_lo, c.decay_t_hi);
        plot.push_back({"D t^-" + io::format_double(f.rate), t, envelope(f, t), true});
      } catch (const ValidationError&) {
      }
    } catch (const RegimeError& ex) {
      extra["certificate"] = {{"skipped", ex.what()}};
    } catch (const ConstantsError& ex) {
      extra["certificate"] = {{"skipped", ex.what()}};
    }
    if (c.plots) out.svg("energy.svg", "E0 and modified energy", plot);
    verdict("certificate", cert, c.expect_certificate);
    result.verdicts.emplace_back("energy_identity", identity);
    extra["amplitude"] = amplitude;
    extra["max_energy_residual"] = traj.max_energy_residual();
    extra["accepted_steps"] = traj.accepted_steps;
    extra["rejected_steps"] = traj.rejected_steps;
  } else {
    AssumptionOptions opts;
    opts.sample_count = c.samples;
    opts.amplitude_lo = c.sample_amplitude_lo;
    opts.amplitude_hi = c.sample_amplitude_hi;
    opts.seed = c.seed;
    const AssumptionReport rep = verify_assumptions(system, opts);
    json checks = json::array();
    bool all = true;
    for (const auto& ch : rep.checks) {
      const bool holds = ch.holds_declared.value_or(ch.holds_homogeneous);
      all = all && holds;
      result.verdicts.emplace_back(ch.name, holds ? Verdict::Pass : Verdict::Fail);
      json j = {{"name", ch.name},
                {"holds_homogeneous", ch.holds_homogeneous},
                {"fitted_multiplier", ch.fitted_multiplier}};
      j["holds_declared"] = ch.holds_declared ? json(*ch.holds_declared) : json(nullptr);
      j["fitted_additive"] = ch.fitted_additive ? json(*ch.fitted_additive) : json(nullptr);
      j["worst_sample"] = ch.worst_sample ? json(*ch.worst_sample) : json(nullptr);
      j["worst_violation"] = ch.worst_violation;
      checks.push_back(j);
    }
    out.text("assumptions.json", json({{"samples", rep.samples},
                                        {"amplitude_lo", rep.amplitude_lo},
                                        {"amplitude_hi", rep.amplitude_hi},
                                        {"checks", checks}})
                                     .dump(2) +
                                     "\n");
    verdict("assumptions", all ? Verdict::Pass : Verdict::Fail, c.expect_assumptions);
  }

  json manifest;
  manifest["config"] = config_json(c);
  manifest["seed"] = c.seed;
  manifest["versions"] = {{"unibound", version()}, {"compiler", __VERSION__}};
  json verdicts = json::object();
  for (const auto& [name, v] : result.verdicts) verdicts[name] = to_string(v);
  manifest["verdicts"] = verdicts;
  manifest["expectation_mismatches"] = result.mismatches;
  manifest["details"] = extra;
  json files = json::array();
  for (const auto& f : out.files()) {
    files.push_back({{"path", f}, {"sha256", io::sha256_file(out.dir() / f)}});
    result.files.push_back(out.dir() / f);
  }
  manifest["files"] = files;
  manifest["wall_time_s"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  result.manifest = out.dir() / "manifest.json";
  io::write_text(result.manifest, manifest.dump(2) + "\n");
  return result;
}

std::string render_report(const fs::path& directory) {
  const fs::path manifest_path = directory / "manifest.json";
  if (!fs::exists(manifest_path)) throw std::runtime_error("no run manifest at " + manifest_path.string());
  const json m = json::parse(io::read_text(manifest_path));

  std::ostringstream ss;
  ss << "run directory: " << directory.string() << "\n";
  const auto& cfg = m.at("config");
  ss << "experiment: " << cfg.value("experiment", "?") << ", model: " << cfg.value("model", "?")
     << ", seed: " << m.value("seed", 0) << "\n";
  ss << "wall time: " << m.value("wall_time_s", 0.0) << " s\n";
  ss << "verdicts:\n";
  for (const auto& [k, v] : m.at("verdicts").items()) ss << "  " << k << ": " << v.get<std::string>() << "\n";
  if (m.contains("expectation_mismatches") && !m["expectation_mismatches"].empty()) {
    ss << "expectation mismatches:\n";
    for (const auto& x : m["expectation_mismatches"]) ss << "  " << x.get<std::string>() << "\n";
  }
  std::vector<io::PlotSeries> plot;
  ss << "files:\n";
  for (const auto& f : m.at("files")) {
    const std::string p = f.at("path").get<std::string>();
    const bool intact = fs::exists(directory / p) && io::sha256_file(directory / p) == f.at("sha256").get<std::string>();
    ss << "  " << p << (intact ? "" : "  [MISSING OR MODIFIED]") << "\n";
    if (intact && p.size() > 4 && p.rfind("trajectory", 0) == 0 && p.substr(p.size() - 4) == ".csv") {
      const auto table = io::read_csv(directory / p);
      plot.push_back({p.substr(0, p.size() - 4), table.column("t"), table.column("E0"), false});
    }
  }
  const std::string text = ss.str();
  io::write_text(directory / "report.txt", text);
  io::write_loglog_svg(directory / "report.svg", "E0(t)", "t", "E0", plot);
  return text;
}

}  // namespace unibound
