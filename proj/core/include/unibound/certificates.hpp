#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "unibound/integrator.hpp"
#include "unibound/models.hpp"

namespace unibound {

/// Energy exponents of the bound/decay estimates in the regime 0 < alpha < beta.
struct Exponents {
  double gamma_min = 0.0;  ///< min{alpha/2, (beta-alpha)/((alpha+1)(beta+2))}
  double gamma_max = 0.0;  ///< max of the same two quantities
  double bound_rate = 0.0;         ///< 1 / gamma_min
  double decay_rate = 0.0;         ///< 1 / gamma_max
  double strong_decay_rate = 0.0;  ///< 2 / alpha
};

/// Throws RegimeError unless 0 < alpha < beta.
Exponents exponents(double alpha, double beta);

/// Psi(t) = (1/(gamma rho t))^(1/gamma) + (M/rho)^(1/(1+gamma)), the explicit
/// super-solution of Phi' <= -rho Phi^(1+gamma) + M.
double comparison_majorant(double gamma, double rho, double M, double t);

struct ComparisonOptions {
  double t_lo = 0.01;
  double t_hi = 100.0;
  double ratio = 1.02;  ///< geometric sampling of [t_lo, t_hi]
  double rel_tol = 1e-11;
  double abs_tol = 1e-14;
};

/// Integrates Phi' = -rho Phi^(1+gamma) + M from Phi(0) = phi0 and returns
/// max over the sampled span of Phi(t) - Psi(t).
double comparison_oracle(double gamma, double rho, double M, double phi0,
                         const ComparisonOptions& options = {});

/// Which energy the modified functional perturbs.
enum class EnergyMode {
  Bound,  ///< base = E0 + C1 + 1 (small-time universal bound)
  Decay,  ///< base = E0 (large-time universal decay)
};

struct Energies {
  double e0 = 0.0;
  double ehat = 0.0;  ///< E0 + C1 + 1 in Bound mode; equals e0 in Decay mode
  double phi = 0.0;   ///< base + eps base^gamma <u, v>
  double cross = 0.0; ///< <u, v>

  double base(EnergyMode mode) const { return mode == EnergyMode::Bound ? ehat : e0; }
};

/// Energies at one state. Bound mode needs a declared C1 (ConstantsError otherwise,
/// also when E0 + C1 + 1 < 1).
Energies energies(const EvolutionSystem& system, const State& state, double epsilon, double gamma,
                  EnergyMode mode);

/// Analytic time derivative of the modified energy along the flow:
///   -<g,v>(1 + gamma eps base^(gamma-1) <u,v>) + eps base^gamma (|v|^2 - <grad F, u>)
///   - eps base^gamma <g, u>.
double phi_derivative(const EvolutionSystem& system, const State& state, double epsilon, double gamma,
                      EnergyMode mode);

struct CalibrationOptions {
  double epsilon_max = 1.0;
  double relative_precision = 0.01;
};

/// Largest eps (to 1% relative) with base/2 <= Phi <= 3 base/2 on every sample.
double calibrate_epsilon(const EvolutionSystem& system, const Trajectory& trajectory, double gamma,
                         EnergyMode mode, const CalibrationOptions& options = {});

/// True when base/2 <= Phi <= 3 base/2 holds at every sample.
bool sandwich_holds(const EvolutionSystem& system, const Trajectory& trajectory, double epsilon,
                    double gamma, EnergyMode mode);

/// Verdict tolerance: violated amount <= rel * dominant + abs.
struct VerdictTolerance {
  double rel = 1e-9;
  double abs = 1e-12;
};

struct InequalityReport {
  std::vector<double> t;
  std::vector<double> phi;
  std::vector<double> phi_dot;
  /// Phi' + eps k (2/3)^(gamma+1) Phi^(gamma+1) - K   (k = delta2/8, K = 3C3/2 + 2 in
  /// Bound mode; k = delta2/4, K = 0 in Decay mode).
  std::vector<double> residual;
  /// Same with base^(gamma+1) in place of (2/3)^(gamma+1) Phi^(gamma+1).
  std::vector<double> base_form_residual;
  /// Residual divided by the dominant term.
  std::vector<double> normalized;
  bool holds = true;
  std::size_t checked = 0;
  std::optional<std::size_t> worst;
};

/// Differential inequality for the modified energy on samples with t >= t_from.
/// Decay mode skips samples at and after the first vanishing energy.
InequalityReport differential_inequality_residual(const EvolutionSystem& system,
                                                  const Trajectory& trajectory, double epsilon,
                                                  double gamma, EnergyMode mode, double t_from = 0.0,
                                                  const VerdictTolerance& tolerance = {});

/// Energy samples of one trajectory, labelled by the amplitude of its initial data.
struct EnergySeries {
  double amplitude = 0.0;
  std::vector<double> t;
  std::vector<double> e0;
};

EnergySeries energy_series(const EvolutionSystem& system, const Trajectory& trajectory, double amplitude = 0.0);

enum class BoundKind {
  SmallTime,  ///< E0 + C1 + 1 <= Gamma t^(-rate) + Gamma_star
  Decay,      ///< E0 <= D t^(-rate)
};

struct BoundSpec {
  BoundKind kind = BoundKind::SmallTime;
  double rate = 0.0;
  double t_lo = 0.0;
  double t_hi = 0.0;
  double c1 = 0.0;  ///< additive constant in the small-time form
  double t_ref = 1.0;  ///< the small-time fit minimizes Gamma t_ref^(-rate) + Gamma_star
  double stability_limit = 2.0;
};

BoundSpec small_time_spec(const Exponents& e, double t_lo, double t_hi, double c1 = 0.0);
BoundSpec decay_spec(double rate, double t_lo, double t_hi);

struct BoundFit {
  double gamma = 0.0;       ///< Gamma (small time) or D (decay)
  double gamma_star = 0.0;  ///< Gamma_star (small time only)
  std::size_t samples = 0;
  /// Value of the fitted envelope at t_ref (small time) or D (decay).
  double level() const;
  double t_ref = 1.0;
  double rate = 0.0;
  BoundKind kind = BoundKind::SmallTime;
};

struct BoundVerdict {
  BoundFit fit;                       ///< fit over all series
  std::optional<BoundFit> reduced;    ///< fit without the largest amplitude
  double stability_ratio = 1.0;       ///< level(all) / level(reduced)
  bool stable = true;
  std::string detail;
};

/// Minimax fit of a one-sided envelope on the window, plus a universality probe:
/// the fit is repeated without the largest-amplitude series and the envelope
/// levels must agree within spec.stability_limit.
BoundVerdict verify_bound(std::span<const EnergySeries> series, const BoundSpec& spec);

/// Smallest envelope covering the samples (no stability probe).
BoundFit fit_bound(std::span<const EnergySeries> series, const BoundSpec& spec);

struct DecayFit {
  double slope = 0.0;
  double stderr_slope = 0.0;
  double intercept = 0.0;
  std::size_t samples = 0;
};

/// Least-squares slope of log E0 against log t on [t_lo, t_hi]. Needs at least 10
/// samples in the window; a vanishing energy inside the window refuses the fit.
DecayFit fit_decay_exponent(std::span<const double> t, std::span<const double> e0, double t_lo, double t_hi);

struct AssumptionCheck {
  std::string name;
  /// Whether the inequality holds on all samples at the declared constants
  /// (nullopt when the system declares none for it).
  std::optional<bool> holds_declared;
  /// Whether it holds with all additive constants set to zero and the
  /// multiplicative constant at its fitted value (> 0 required for delta-type).
  bool holds_homogeneous = false;
  /// Tightest multiplicative constant with the additive constant fixed to 0.
  double fitted_multiplier = 0.0;
  /// Tightest additive constant with the declared multiplier (if declared).
  std::optional<double> fitted_additive;
  /// Index of the sample with the largest violation at declared constants.
  std::optional<std::size_t> worst_sample;
  double worst_violation = 0.0;
};

struct AssumptionReport {
  std::size_t samples = 0;
  double amplitude_lo = 0.0;
  double amplitude_hi = 0.0;
  std::vector<AssumptionCheck> checks;

  const AssumptionCheck& get(const std::string& name) const;
};

struct AssumptionOptions {
  std::size_t sample_count = 1000;
  double amplitude_lo = 1e-3;
  double amplitude_hi = 1e3;
  std::uint64_t seed = 12345;
  double t_max = 10.0;  ///< time samples for the damping are uniform in [0, t_max]
  VerdictTolerance tolerance{};
};

/// Samples states with log-uniform amplitudes (half random directions, half single
/// coordinate directions) and evaluates F2, F3, F4, G2, G3 and the norm inequality.
AssumptionReport verify_assumptions(const EvolutionSystem& system, const AssumptionOptions& options = {});

/// Energies, calibrated epsilon, sandwich and differential inequality for one trajectory.
struct CertificateReport {
  EnergyMode mode = EnergyMode::Bound;
  double gamma = 0.0;
  double epsilon = 0.0;
  std::vector<double> t, e0, ehat, phi, cross;
  std::vector<double> sandwich_margin;  ///< min(Phi - base/2, 3 base/2 - Phi) / base
  bool sandwich = true;
  InequalityReport inequality;
};

struct CertifyOptions {
  EnergyMode mode = EnergyMode::Bound;
  double t_from = 0.01;
  /// Fraction of the calibrated epsilon used for the differential inequality.
  double epsilon_fraction = 0.5;
  CalibrationOptions calibration{};
  VerdictTolerance tolerance{};
};

CertificateReport certify(const EvolutionSystem& system, const Trajectory& trajectory, double gamma,
                          const CertifyOptions& options = {});

}  // namespace unibound
