#include "unibound/certificates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "unibound/errors.hpp"

namespace unibound {
namespace {

constexpr double kVanishing = 1e-300;

void require(bool ok, const char* message) {
  if (!ok) throw ValidationError(message);
}

// base^gamma with the vanishing-energy convention.
double power_of_base(double base, double gamma) { return base > kVanishing ? std::pow(base, gamma) : 0.0; }

const AssumptionConstants& constants_of(const EvolutionSystem& system) {
  if (!system.declared_constants()) {
    throw ConstantsError("system '" + system.name() + "' declares no assumption constants");
  }
  return *system.declared_constants();
}

struct Sample {
  double base;
  double cross;
};

std::vector<Sample> base_samples(const EvolutionSystem& system, const Trajectory& trajectory, double gamma,
                                 EnergyMode mode) {
  std::vector<Sample> out;
  out.reserve(trajectory.size());
  for (const auto& s : trajectory.samples) {
    const Energies e = energies(system, s, 0.0, gamma, mode);
    out.push_back({e.base(mode), e.cross});
  }
  return out;
}

bool sandwich_ok(std::span<const Sample> samples, double epsilon, double gamma) {
  for (const auto& s : samples) {
    if (s.base <= kVanishing) continue;
    const double phi = s.base + epsilon * std::pow(s.base, gamma) * s.cross;
    if (phi < 0.5 * s.base || phi > 1.5 * s.base) return false;
  }
  return true;
}

std::vector<std::pair<double, double>> window_points(std::span<const EnergySeries> series, double t_lo,
                                                     double t_hi) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& s : series) {
    require(s.t.size() == s.e0.size(), "energy series with mismatched lengths");
    for (std::size_t i = 0; i < s.t.size(); ++i) {
      if (s.t[i] >= t_lo && s.t[i] <= t_hi && s.t[i] > 0.0) pts.emplace_back(s.t[i], s.e0[i]);
    }
  }
  return pts;
}

}  // namespace

Exponents exponents(double alpha, double beta) {
  require(std::isfinite(alpha) && std::isfinite(beta), "exponents must be finite");
  require(alpha > 0.0, "alpha must be positive");
  if (!(alpha < beta)) {
    throw RegimeError("alpha >= beta: universal bound/decay estimates do not apply in this regime");
  }
  const double first = alpha / 2.0;
  const double second = (beta - alpha) / ((alpha + 1.0) * (beta + 2.0));
  Exponents e;
  e.gamma_min = std::min(first, second);
  e.gamma_max = std::max(first, second);
  e.bound_rate = 1.0 / e.gamma_min;
  e.decay_rate = 1.0 / e.gamma_max;
  e.strong_decay_rate = 2.0 / alpha;
  return e;
}

double comparison_majorant(double gamma, double rho, double M, double t) {
  require(gamma > 0.0 && std::isfinite(gamma), "gamma must be positive");
  require(rho > 0.0 && std::isfinite(rho), "rho must be positive");
  require(M >= 0.0 && std::isfinite(M), "M must be non-negative");
  require(t > 0.0 && std::isfinite(t), "the majorant is defined for t > 0 only");
  return std::pow(1.0 / (gamma * rho * t), 1.0 / gamma) + std::pow(M / rho, 1.0 / (1.0 + gamma));
}

double comparison_oracle(double gamma, double rho, double M, double phi0, const ComparisonOptions& o) {
  require(phi0 >= 0.0 && std::isfinite(phi0), "phi0 must be non-negative");
  require(o.t_lo > 0.0 && o.t_hi > o.t_lo && o.ratio > 1.0, "invalid comparison window");
  // Validates gamma, rho, M as a side effect.
  (void)comparison_majorant(gamma, rho, M, o.t_lo);

  std::vector<double> times;
  for (double t = o.t_lo; t < o.t_hi; t *= o.ratio) times.push_back(t);
  times.push_back(o.t_hi);

  OdeRhs rhs = [gamma, rho, M](double, ConstView y, MutView dy) {
    const double phi = std::max(y[0], 0.0);
    dy[0] = -rho * std::pow(phi, 1.0 + gamma) + M;
  };
  const double y0[1] = {phi0};
  const OdeSolution sol = solve_ode(rhs, 0.0, y0, times, o.rel_tol, o.abs_tol);

  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < sol.times.size(); ++i) {
    worst = std::max(worst, sol.values[i][0] - comparison_majorant(gamma, rho, M, sol.times[i]));
  }
  return worst;
}

Energies energies(const EvolutionSystem& system, const State& state, double epsilon, double gamma,
                  EnergyMode mode) {
  require(epsilon >= 0.0, "epsilon must be non-negative");
  Energies e;
  e.e0 = system.classical_energy(state);
  e.cross = system.pairing(state.u, state.v);
  if (mode == EnergyMode::Bound) {
    const auto& k = constants_of(system);
    if (!k.c1) throw ConstantsError("bound-mode energy needs a declared C1");
    e.ehat = e.e0 + *k.c1 + 1.0;
    if (e.ehat < 1.0 - 1e-12 * std::max(1.0, std::abs(e.e0))) {
      throw ConstantsError("E0 + C1 + 1 < 1: declared C1 is inconsistent with the potential");
    }
  } else {
    e.ehat = e.e0;
  }
  const double base = e.base(mode);
  e.phi = base + epsilon * power_of_base(base, gamma) * e.cross;
  return e;
}

double phi_derivative(const EvolutionSystem& system, const State& state, double epsilon, double gamma,
                      EnergyMode mode) {
  const Energies e = energies(system, state, epsilon, gamma, mode);
  const double base = e.base(mode);
  const Vec g = system.damping(state.t, state.v);
  const Vec grad = system.grad_potential(state.u);
  const double gv = system.pairing(g, state.v);
  if (epsilon == 0.0 || base <= kVanishing) return -gv;
  const double gu = system.pairing(g, state.u);
  const double vv = system.pairing(state.v, state.v);
  const double fu = system.pairing(grad, state.u);
  const double bg = std::pow(base, gamma);
  return -gv * (1.0 + gamma * epsilon * (bg / base) * e.cross) + epsilon * bg * (vv - fu) - epsilon * bg * gu;
}

double calibrate_epsilon(const EvolutionSystem& system, const Trajectory& trajectory, double gamma,
                         EnergyMode mode, const CalibrationOptions& options) {
  require(!trajectory.samples.empty(), "empty trajectory");
  require(options.epsilon_max > 0.0 && options.relative_precision > 0.0, "invalid calibration options");
  const auto samples = base_samples(system, trajectory, gamma, mode);
  if (sandwich_ok(samples, options.epsilon_max, gamma)) return options.epsilon_max;

  double hi = options.epsilon_max;
  double lo = hi / 2.0;
  while (!sandwich_ok(samples, lo, gamma)) {
    hi = lo;
    lo /= 2.0;
    if (lo < std::numeric_limits<double>::min()) return 0.0;
  }
  while (hi > lo * (1.0 + options.relative_precision)) {
    const double mid = 0.5 * (lo + hi);
    (sandwich_ok(samples, mid, gamma) ? lo : hi) = mid;
  }
  return lo;
}

bool sandwich_holds(const EvolutionSystem& system, const Trajectory& trajectory, double epsilon, double gamma,
                    EnergyMode mode) {
  return sandwich_ok(base_samples(system, trajectory, gamma, mode), epsilon, gamma);
}

InequalityReport differential_inequality_residual(const EvolutionSystem& system, const Trajectory& trajectory,
                                                  double epsilon, double gamma, EnergyMode mode, double t_from,
                                                  const VerdictTolerance& tolerance) {
  const auto& k = constants_of(system);
  if (!k.delta2) throw ConstantsError("differential inequality needs a declared delta2");
  double rate = 0.0, offset = 0.0;
  if (mode == EnergyMode::Bound) {
    if (!k.c3) throw ConstantsError("bound-mode differential inequality needs a declared C3");
    rate = *k.delta2 / 8.0;
    offset = 1.5 * *k.c3 + 2.0;
  } else {
    rate = *k.delta2 / 4.0;
  }
  const double shrink = std::pow(2.0 / 3.0, gamma + 1.0);

  InequalityReport r;
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < trajectory.samples.size(); ++i) {
    const State& s = trajectory.samples[i];
    if (s.t < t_from) continue;
    const Energies e = energies(system, s, epsilon, gamma, mode);
    const double base = e.base(mode);
    // After the energy vanishes the decay claim is trivial.
    if (mode == EnergyMode::Decay && base <= kVanishing) break;

    const double phi_dot = phi_derivative(system, s, epsilon, gamma, mode);
    const double phi_term = epsilon * rate * shrink * std::pow(std::max(e.phi, 0.0), gamma + 1.0);
    const double base_term = epsilon * rate * std::pow(std::max(base, 0.0), gamma + 1.0);
    const double residual = phi_dot + phi_term - offset;
    const double dominant = std::max({std::abs(phi_dot), phi_term, offset, base_term});

    r.t.push_back(s.t);
    r.phi.push_back(e.phi);
    r.phi_dot.push_back(phi_dot);
    r.residual.push_back(residual);
    r.base_form_residual.push_back(phi_dot + base_term - offset);
    r.normalized.push_back(dominant > 0.0 ? residual / dominant : residual);
    ++r.checked;
    if (residual > tolerance.rel * dominant + tolerance.abs) r.holds = false;
    if (r.normalized.back() > worst) {
      worst = r.normalized.back();
      r.worst = r.t.size() - 1;
    }
  }
  return r;
}

EnergySeries energy_series(const EvolutionSystem& system, const Trajectory& trajectory, double amplitude) {
  EnergySeries s;
  s.amplitude = amplitude;
  for (const auto& st : trajectory.samples) {
    s.t.push_back(st.t);
    s.e0.push_back(system.classical_energy(st));
  }
  return s;
}

BoundSpec small_time_spec(const Exponents& e, double t_lo, double t_hi, double c1) {
  BoundSpec s;
  s.kind = BoundKind::SmallTime;
  s.rate = e.bound_rate;
  s.t_lo = t_lo;
  s.t_hi = t_hi;
  s.c1 = c1;
  s.t_ref = t_hi;
  return s;
}

BoundSpec decay_spec(double rate, double t_lo, double t_hi) {
  BoundSpec s;
  s.kind = BoundKind::Decay;
  s.rate = rate;
  s.t_lo = t_lo;
  s.t_hi = t_hi;
  return s;
}

double BoundFit::level() const {
  if (kind == BoundKind::Decay) return gamma;
  return gamma * std::pow(t_ref, -rate) + gamma_star;
}

BoundFit fit_bound(std::span<const EnergySeries> series, const BoundSpec& spec) {
  require(spec.rate > 0.0 && std::isfinite(spec.rate), "bound rate must be positive");
  require(spec.t_lo > 0.0 && spec.t_hi >= spec.t_lo, "invalid bound window");
  const auto pts = window_points(series, spec.t_lo, spec.t_hi);
  if (pts.empty()) throw ValidationError("empty window: no samples inside the bound window");

  BoundFit fit;
  fit.kind = spec.kind;
  fit.rate = spec.rate;
  fit.t_ref = spec.t_ref;
  fit.samples = pts.size();

  if (spec.kind == BoundKind::Decay) {
    double d = 0.0;
    for (const auto& [t, e] : pts) d = std::max(d, e * std::pow(t, spec.rate));
    fit.gamma = d;
    return fit;
  }

  // Minimize Gamma w + Gamma_star subject to Gamma s_i + Gamma_star >= y_i, both >= 0.
  std::vector<double> s(pts.size()), y(pts.size());
  double g_hi = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    s[i] = std::pow(pts[i].first, -spec.rate);
    y[i] = pts[i].second + spec.c1 + 1.0;
    g_hi = std::max(g_hi, y[i] / s[i]);
  }
  const double w = std::pow(spec.t_ref, -spec.rate);
  auto star = [&](double g) {
    double m = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) m = std::max(m, y[i] - g * s[i]);
    return m;
  };
  auto objective = [&](double g) { return g * w + star(g); };

  double lo = 0.0, hi = g_hi;
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
  double f1 = objective(x1), f2 = objective(x2);
  for (int it = 0; it < 300 && hi - lo > 1e-15 * std::max(1.0, g_hi); ++it) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - phi * (hi - lo);
      f1 = objective(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + phi * (hi - lo);
      f2 = objective(x2);
    }
  }
  double g = 0.5 * (lo + hi);
  // Endpoints can be optimal for a piecewise-linear objective.
  for (double cand : {0.0, g_hi}) {
    if (objective(cand) < objective(g)) g = cand;
  }
  fit.gamma = g;
  fit.gamma_star = star(g);
  return fit;
}

BoundVerdict verify_bound(std::span<const EnergySeries> series, const BoundSpec& spec) {
  require(!series.empty(), "no energy series");
  BoundVerdict v;
  v.fit = fit_bound(series, spec);
  if (series.size() < 2) {
    v.detail = "single trajectory: universality not probed";
    return v;
  }
  std::vector<EnergySeries> sorted(series.begin(), series.end());
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const EnergySeries& a, const EnergySeries& b) { return a.amplitude < b.amplitude; });
  sorted.pop_back();
  v.reduced = fit_bound(sorted, spec);
  const double top = v.fit.level();
  const double rest = v.reduced->level();
  if (rest > 0.0) {
    v.stability_ratio = top / rest;
  } else {
    v.stability_ratio = top > 0.0 ? std::numeric_limits<double>::infinity() : 1.0;
  }
  v.stable = v.stability_ratio <= spec.stability_limit;
  v.detail = v.stable ? "envelope stable under the largest amplitude"
                      : "envelope grows with the largest amplitude";
  return v;
}

DecayFit fit_decay_exponent(std::span<const double> t, std::span<const double> e0, double t_lo, double t_hi) {
  require(t.size() == e0.size(), "time and energy columns differ in length");
  require(t_lo > 0.0 && t_hi > t_lo, "invalid fit window");
  std::vector<double> x, y;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < t_lo || t[i] > t_hi) continue;
    if (!(e0[i] > kVanishing)) {
      throw ValidationError("energy vanishes inside the fit window; decay exponent undefined");
    }
    x.push_back(std::log(t[i]));
    y.push_back(std::log(e0[i]));
  }
  if (x.size() < 10) throw ValidationError("decay fit needs at least 10 samples in the window");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  require(sxx > 0.0, "fit window has no time spread");
  DecayFit f;
  f.samples = x.size();
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double sse = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (f.intercept + f.slope * x[i]);
    sse += r * r;
  }
  f.stderr_slope = x.size() > 2 ? std::sqrt(sse / (n - 2.0) / sxx) : 0.0;
  return f;
}

const AssumptionCheck& AssumptionReport::get(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return c;
  }
  throw ValidationError("no assumption check named " + name);
}

AssumptionReport verify_assumptions(const EvolutionSystem& system, const AssumptionOptions& o) {
  require(o.sample_count >= 1000, "verify_assumptions needs at least 1000 samples");
  require(o.amplitude_lo > 0.0 && o.amplitude_hi >= o.amplitude_lo, "invalid amplitude range");

  const std::size_t dim = system.dim();
  const double alpha = system.alpha(), beta = system.beta();
  const NormSet& norms = system.norms();
  const AssumptionConstants declared = system.declared_constants().value_or(AssumptionConstants{});

  std::mt19937_64 rng(o.seed);
  std::uniform_real_distribution<double> log_amp(std::log(o.amplitude_lo), std::log(o.amplitude_hi));
  std::uniform_real_distribution<double> time_dist(0.0, o.t_max);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::bernoulli_distribution coin(0.5);

  auto direction = [&](std::size_t i) {
    Vec d(dim, 0.0);
    if (i % 2 == 1) {
      d[(i / 2) % dim] = coin(rng) ? 1.0 : -1.0;
    } else {
      double nrm = 0.0;
      while (nrm == 0.0) {
        for (auto& x : d) x = normal(rng);
        nrm = norms.norm_h(d);
      }
      for (auto& x : d) x /= nrm;
    }
    return d;
  };

  // Per-check accumulators. Each sample contributes (lhs, rhs_scale) pairs.
  struct Acc {
    AssumptionCheck check;
    double fit = 0.0;
    bool fit_init = false;
    double additive = 0.0;
  };
  auto named = [](const char* name) {
    Acc a;
    a.check.name = name;
    return a;
  };
  Acc f2 = named("F2"), f3 = named("F3"), f4 = named("F4"), g2 = named("G2"), g3 = named("G3"),
      nr = named("norms");
  double f3_lower = -std::numeric_limits<double>::infinity();  // from samples with F < 0
  bool f3_zero_ok = true;

  auto violation = [&](Acc& acc, double amount, double dominant, std::size_t i) {
    const double allowed = o.tolerance.rel * dominant + o.tolerance.abs;
    if (amount > allowed) {
      acc.check.holds_declared = false;
    } else if (!acc.check.holds_declared.has_value()) {
      acc.check.holds_declared = true;
    }
    const double normalized = dominant > 0.0 ? amount / dominant : amount;
    if (!acc.check.worst_sample || normalized > acc.check.worst_violation) {
      acc.check.worst_sample = i;
      acc.check.worst_violation = normalized;
    }
  };
  auto fit_min = [](Acc& acc, double value) {
    acc.fit = acc.fit_init ? std::min(acc.fit, value) : value;
    acc.fit_init = true;
  };
  auto fit_max = [](Acc& acc, double value) {
    acc.fit = acc.fit_init ? std::max(acc.fit, value) : value;
    acc.fit_init = true;
  };

  for (std::size_t i = 0; i < o.sample_count; ++i) {
    const double amp_u = std::exp(log_amp(rng));
    const double amp_v = std::exp(log_amp(rng));
    Vec u = direction(i), v = direction(i + 1);
    for (auto& x : u) x *= amp_u;
    for (auto& x : v) x *= amp_v;
    const double t = time_dist(rng);

    const double F = system.potential(u);
    const Vec grad = system.grad_potential(u);
    const Vec g = system.damping(t, v);
    const double hu = norms.norm_h(u), xu = norms.norm_x(u), yu = norms.norm_y(u);
    const double xv = norms.norm_x(v);

    // F2: F >= delta1 |u|_Y^(beta+2) - C1
    const double y_pow = std::pow(yu, beta + 2.0);
    if (y_pow > 0.0) fit_min(f2, F / y_pow);
    if (declared.delta1 && declared.c1) {
      violation(f2, *declared.delta1 * y_pow - *declared.c1 - F,
                std::max({std::abs(F), *declared.delta1 * y_pow, *declared.c1}), i);
    }
    if (declared.delta1) f2.additive = std::max(f2.additive, *declared.delta1 * y_pow - F);

    // F3: <grad F, u> >= delta2 F - C2
    const double gfu = system.pairing(grad, u);
    if (F > 0.0) {
      fit_min(f3, gfu / F);
    } else if (F < 0.0) {
      f3_lower = std::max(f3_lower, gfu / F);
    } else if (gfu < 0.0) {
      f3_zero_ok = false;
    }
    if (declared.delta2 && declared.c2) {
      violation(f3, *declared.delta2 * F - *declared.c2 - gfu,
                std::max({std::abs(gfu), std::abs(*declared.delta2 * F), *declared.c2}), i);
    }
    if (declared.delta2) f3.additive = std::max(f3.additive, *declared.delta2 * F - gfu);

    // F4: F >= delta4 |u|_H^2
    if (hu > 0.0) fit_min(f4, F / (hu * hu));
    if (declared.delta4) {
      violation(f4, *declared.delta4 * hu * hu - F, std::max(std::abs(F), *declared.delta4 * hu * hu), i);
    }

    // G2: <g(t,v), v> >= delta3 |v|_X^(alpha+2) - C3
    const double gv = system.pairing(g, v);
    const double xv_pow = std::pow(xv, alpha + 2.0);
    if (xv_pow > 0.0) fit_min(g2, gv / xv_pow);
    if (declared.delta3 && declared.c3) {
      violation(g2, *declared.delta3 * xv_pow - *declared.c3 - gv,
                std::max({std::abs(gv), *declared.delta3 * xv_pow, *declared.c3}), i);
    }
    if (declared.delta3) g2.additive = std::max(g2.additive, *declared.delta3 * xv_pow - gv);

    // G3: |g(t,v)|_X' <= D4 |v|_X^(alpha+1) + C4
    const double gdual = norms.norm_x_dual(g);
    const double xv_pow1 = std::pow(xv, alpha + 1.0);
    if (xv_pow1 > 0.0) fit_max(g3, gdual / xv_pow1);
    if (declared.d4 && declared.c4) {
      violation(g3, gdual - *declared.d4 * xv_pow1 - *declared.c4,
                std::max({gdual, *declared.d4 * xv_pow1, *declared.c4}), i);
    }
    if (declared.d4) g3.additive = std::max(g3.additive, gdual - *declared.d4 * xv_pow1);

    // |u|_X^(alpha+2) <= C5 (|u|_H^2 + |u|_Y^(beta+2))
    const double lhs = std::pow(xu, alpha + 2.0);
    const double rhs = hu * hu + y_pow;
    if (rhs > 0.0) fit_max(nr, lhs / rhs);
    if (declared.c5) violation(nr, lhs - *declared.c5 * rhs, std::max(lhs, *declared.c5 * rhs), i);
  }

  const double tiny = o.tolerance.abs;
  f2.check.fitted_multiplier = f2.fit;
  f2.check.holds_homogeneous = f2.fit > tiny;
  if (declared.delta1) f2.check.fitted_additive = std::max(f2.additive, 0.0);

  f3.check.fitted_multiplier = f3.fit_init ? f3.fit : 0.0;
  f3.check.holds_homogeneous = f3.fit_init && f3.fit > tiny && f3_lower <= f3.fit && f3_zero_ok;
  if (declared.delta2) f3.check.fitted_additive = std::max(f3.additive, 0.0);

  f4.check.fitted_multiplier = f4.fit;
  f4.check.holds_homogeneous = f4.fit > tiny;

  g2.check.fitted_multiplier = g2.fit;
  g2.check.holds_homogeneous = g2.fit > tiny;
  if (declared.delta3) g2.check.fitted_additive = std::max(g2.additive, 0.0);

  g3.check.fitted_multiplier = g3.fit;
  g3.check.holds_homogeneous = std::isfinite(g3.fit);
  if (declared.d4) g3.check.fitted_additive = std::max(g3.additive, 0.0);

  nr.check.fitted_multiplier = nr.fit;
  nr.check.holds_homogeneous = std::isfinite(nr.fit);

  AssumptionReport report;
  report.samples = o.sample_count;
  report.amplitude_lo = o.amplitude_lo;
  report.amplitude_hi = o.amplitude_hi;
  for (Acc* a : {&f2, &f3, &f4, &g2, &g3, &nr}) report.checks.push_back(std::move(a->check));
  return report;
}

CertificateReport certify(const EvolutionSystem& system, const Trajectory& trajectory, double gamma,
                          const CertifyOptions& options) {
  CertificateReport r;
  r.mode = options.mode;
  r.gamma = gamma;
  const double eps_star = calibrate_epsilon(system, trajectory, gamma, options.mode, options.calibration);
  r.epsilon = options.epsilon_fraction * eps_star;
  for (const auto& s : trajectory.samples) {
    const Energies e = energies(system, s, r.epsilon, gamma, options.mode);
    const double base = e.base(options.mode);
    r.t.push_back(s.t);
    r.e0.push_back(e.e0);
    r.ehat.push_back(e.ehat);
    r.phi.push_back(e.phi);
    r.cross.push_back(e.cross);
    const double margin = base > kVanishing ? std::min(e.phi - 0.5 * base, 1.5 * base - e.phi) / base : 0.5;
    r.sandwich_margin.push_back(margin);
    if (margin < 0.0) r.sandwich = false;
  }
  r.inequality = differential_inequality_residual(system, trajectory, r.epsilon, gamma, options.mode,
                                                  options.t_from, options.tolerance);
  return r;
}

}  // namespace unibound
