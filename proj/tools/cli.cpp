#include "cli.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "unibound/certificates.hpp"
#include "unibound/config.hpp"
#include "unibound/errors.hpp"
#include "unibound/harness.hpp"
#include "unibound/io.hpp"

namespace unibound::cli {
namespace {

struct Globals {
  std::string config_path;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> jobs;
  std::string out;
  int verbosity = 0;
};

RunConfig resolve(const Globals& g, Experiment experiment) {
  RunConfig c = g.config_path.empty() ? RunConfig{} : load_config(g.config_path);
  c.experiment = experiment;
  for (const auto& o : g.overrides) apply_override(c, o);
  if (g.seed) c.seed = *g.seed;
  if (g.jobs) c.jobs = *g.jobs;
  if (!g.out.empty()) c.output_dir = g.out;
  validate(c);
  return c;
}

int run_harness(const Globals& g, Experiment experiment, std::ostream& err) {
  const RunConfig c = resolve(g, experiment);
  Logger log;
  if (g.verbosity > 0) log = [&err](const std::string& m) { err << "unibound: " << m << "\n"; };
  const RunResult r = run_experiment(c, log);
  for (const auto& [name, v] : r.verdicts) err << name << ": " << to_string(v) << "\n";
  err << "manifest: " << r.manifest.string() << "\n";
  if (!r.mismatches.empty()) {
    for (const auto& m : r.mismatches) err << "expectation mismatch: " << m << "\n";
    if (c.exit_on_violation) return kViolation;
  }
  return kOk;
}

int fit_decay(const Globals& g, const std::string& csv, const std::string& column, double t_lo, double t_hi,
              std::ostream& err) {
  const auto table = io::read_csv(csv);
  const DecayFit f = fit_decay_exponent(table.column("t"), table.column(column), t_lo, t_hi);
  err << "slope: " << io::format_double(f.slope) << " (stderr " << io::format_double(f.stderr_slope) << ", "
      << f.samples << " samples)\n";
  if (!g.out.empty()) {
    const nlohmann::ordered_json j = {{"csv", csv},       {"column", column},
                                      {"t_lo", t_lo},     {"t_hi", t_hi},
                                      {"slope", f.slope}, {"stderr_slope", f.stderr_slope},
                                      {"intercept", f.intercept}, {"samples", f.samples}};
    io::write_text(std::filesystem::path(g.out) / "fit_decay.json", j.dump(2) + "\n");
  }
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& err) {
  CLI::App app{"Universal energy bounds and decay for damped second-order evolution equations", "unibound"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config_path, "key=value configuration file");
  app.add_option("--set", g.overrides, "override key=value (repeatable, last wins)")->take_all();
  app.add_option("--seed", g.seed, "random seed");
  app.add_option("--jobs", g.jobs, "parallel sweep cells (0 = all cores)");
  app.add_option("--out", g.out, "output directory");
  app.add_flag("-v,--verbose", g.verbosity, "progress messages on stderr");

  auto* simulate = app.add_subcommand("simulate", "single trajectory with certificates")->fallthrough();
  auto* sweep = app.add_subcommand("sweep", "amplitude sweep probing universality")->fallthrough();
  auto* verify = app.add_subcommand("verify-assumptions", "sample the structural inequalities")->fallthrough();
  verify->alias("verify");

  std::string csv, column = "E0";
  double t_lo = 0.0, t_hi = 0.0;
  auto* fit = app.add_subcommand("fit-decay", "log-log slope of an energy column")->fallthrough();
  fit->alias("fit");
  fit->add_option("--csv", csv, "CSV file with a t column")->required();
  fit->add_option("--column", column, "energy column")->capture_default_str();
  fit->add_option("--t-lo", t_lo, "window start")->required();
  fit->add_option("--t-hi", t_hi, "window end")->required();

  std::string run_dir;
  auto* report = app.add_subcommand("report", "summarize a run directory")->fallthrough();
  report->add_option("dir", run_dir, "run directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, err, err);
    return code == 0 ? kOk : kRuntimeError;
  }

  try {
    if (*simulate) return run_harness(g, Experiment::Trajectory, err);
    if (*sweep) return run_harness(g, Experiment::Sweep, err);
    if (*verify) return run_harness(g, Experiment::Assumptions, err);
    if (*fit) return fit_decay(g, csv, column, t_lo, t_hi, err);
    if (*report) {
      if (!std::filesystem::is_directory(run_dir)) {
        err << "unibound: error: run directory not found: " << run_dir << "\n";
        return kRuntimeError;
      }
      err << render_report(run_dir);
      return kOk;
    }
  } catch (const std::exception& e) {
    err << "unibound: error: " << e.what() << "\n";
    return kRuntimeError;
  }
  return kRuntimeError;
}

}  // namespace unibound::cli
