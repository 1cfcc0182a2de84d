#include "unibound/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "unibound/errors.hpp"
#include "unibound/io.hpp"

namespace unibound {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                 a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

constexpr double kSafety = 0.9;
constexpr double kMinFactor = 0.2;
constexpr double kMaxFactor = 5.0;

bool all_finite(ConstView y) {
  return std::all_of(y.begin(), y.end(), [](double x) { return std::isfinite(x); });
}

// One explicit Dormand-Prince stage sweep. `k1` holds f(t, y) on entry and
// f(t + h, ynew) (FSAL) on exit through k7.
template <class Rhs>
class DormandPrince {
 public:
  DormandPrince(Rhs rhs, std::size_t n)
      : rhs_(std::move(rhs)), n_(n), k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n),
        ynew(n), err(n) {}

  void eval(double t, ConstView y, MutView dy) { rhs_(t, y, dy); }

  void attempt(double t, ConstView y, double h) {
    for (std::size_t i = 0; i < n_; ++i) tmp[i] = y[i] + h * a21 * k1[i];
    rhs_(t + c2 * h, tmp, k2);
    for (std::size_t i = 0; i < n_; ++i) tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    rhs_(t + c3 * h, tmp, k3);
    for (std::size_t i = 0; i < n_; ++i) tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    rhs_(t + c4 * h, tmp, k4);
    for (std::size_t i = 0; i < n_; ++i) {
      tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    }
    rhs_(t + c5 * h, tmp, k5);
    for (std::size_t i = 0; i < n_; ++i) {
      tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    }
    rhs_(t + h, tmp, k6);
    for (std::size_t i = 0; i < n_; ++i) {
      ynew[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
    }
    rhs_(t + h, ynew, k7);
    for (std::size_t i = 0; i < n_; ++i) {
      err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
    }
  }

  // RMS of the error over the first `count` components.
  double error_norm(ConstView y, std::size_t count, double rel_tol, double abs_tol) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
      const double sc = abs_tol + rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      const double r = err[i] / sc;
      acc += r * r;
    }
    return std::sqrt(acc / static_cast<double>(count));
  }

  void accept() { std::swap(k1, k7); }

  // Hairer-Wanner starting step estimate.
  double initial_step(double t, ConstView y, std::size_t count, double rel_tol, double abs_tol,
                      double direction) {
    double d0 = 0.0, d1 = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
      const double sc = abs_tol + rel_tol * std::abs(y[i]);
      d0 += (y[i] / sc) * (y[i] / sc);
      d1 += (k1[i] / sc) * (k1[i] / sc);
    }
    d0 = std::sqrt(d0 / count);
    d1 = std::sqrt(d1 / count);
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    for (std::size_t i = 0; i < n_; ++i) tmp[i] = y[i] + direction * h0 * k1[i];
    rhs_(t + direction * h0, tmp, k2);
    double d2 = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
      const double sc = abs_tol + rel_tol * std::abs(y[i]);
      const double r = (k2[i] - k1[i]) / sc;
      d2 += r * r;
    }
    d2 = std::sqrt(d2 / count) / h0;
    const double dmax = std::max(d1, d2);
    const double h1 = dmax <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dmax, 0.2);
    const double h = std::min(100.0 * h0, h1);
    return std::isfinite(h) && h > 0.0 ? h : 1e-6;
  }

  Rhs rhs_;
  std::size_t n_;
  Vec k1, k2, k3, k4, k5, k6, k7, tmp, ynew, err;
};

std::string describe(const State& s, const EvolutionSystem& system) {
  std::ostringstream os;
  os.precision(6);
  os << "t=" << s.t << " |u|_H=" << system.norms().norm_h(s.u) << " |v|_H=" << system.norms().norm_h(s.v);
  return os.str();
}

// Augmented state y = [u, v, D] with D' = <g(t, v), v>.
class EnergyStepper {
 public:
  struct Rhs {
    const EvolutionSystem* system;
    std::size_t dim;
    Vec* grad;
    Vec* damp;
    void operator()(double t, ConstView y, MutView dy) const {
      ConstView u = y.subspan(0, dim);
      ConstView v = y.subspan(dim, dim);
      system->grad_potential(u, *grad);
      system->damping(t, v, *damp);
      for (std::size_t i = 0; i < dim; ++i) {
        dy[i] = v[i];
        dy[dim + i] = -(*grad)[i] - (*damp)[i];
      }
      dy[2 * dim] = system->pairing(*damp, v);
    }
  };

  EnergyStepper(const EvolutionSystem& system, const Tolerances& tol, const State& start)
      : system_(system), tol_(tol), dim_(system.dim()), grad_(dim_), damp_(dim_),
        rk_(Rhs{&system_, dim_, &grad_, &damp_}, 2 * dim_ + 1), y_(2 * dim_ + 1), t_(start.t) {
    if (start.u.size() != dim_ || start.v.size() != dim_) {
      throw ValidationError("state dimension does not match the system");
    }
    std::copy(start.u.begin(), start.u.end(), y_.begin());
    std::copy(start.v.begin(), start.v.end(), y_.begin() + static_cast<std::ptrdiff_t>(dim_));
    if (!all_finite(y_) || !std::isfinite(t_)) {
      throw DivergenceError("non-finite initial state at " + describe(start, system_));
    }
    energy_ = system_.classical_energy(start.u, start.v);
    rk_.eval(t_, y_, rk_.k1);

    const double amplitude =
        std::max({1.0, system_.norms().norm_h(start.u), system_.norms().norm_h(start.v)});
    dt_min_ = tol_.dt_min * std::pow(amplitude, -(1.0 + system_.alpha() / 2.0));
  }

  double initial_step(double direction) {
    // The estimate collapses when a component starts at zero next to a huge derivative.
    const double h = rk_.initial_step(t_, y_, 2 * dim_, tol_.rel_tol, tol_.abs_tol, direction);
    return std::min(tol_.dt_max, std::max(h, 1e3 * dt_min_));
  }

  double time() const { return t_; }
  double energy() const { return energy_; }
  double dt_min() const { return dt_min_; }

  State state() const {
    State s;
    s.t = t_;
    s.u.assign(y_.begin(), y_.begin() + static_cast<std::ptrdiff_t>(dim_));
    s.v.assign(y_.begin() + static_cast<std::ptrdiff_t>(dim_), y_.begin() + static_cast<std::ptrdiff_t>(2 * dim_));
    return s;
  }

  struct Accepted {
    double h = 0.0;
    double dissipation = 0.0;
    double residual = 0.0;  // normalized per unit time
    double h_next = 0.0;
    std::size_t rejected = 0;
  };

  // Takes one accepted step of signed size at most |h|.
  Accepted advance(double h) {
    Accepted out;
    h = std::copysign(std::min(std::abs(h), tol_.dt_max), h);
    bool rejected_before = false;
    for (;;) {
      if (std::abs(h) < dt_min_) {
        throw StiffnessError("step size " + io::format_double(std::abs(h)) + " fell below dt_min " +
                             io::format_double(dt_min_) + " at " + describe(state(), system_));
      }
      y_[2 * dim_] = 0.0;
      rk_.attempt(t_, y_, h);
      if (!all_finite(rk_.ynew)) {
        ++out.rejected;
        rejected_before = true;
        h *= kMinFactor;
        if (std::abs(h) < dt_min_) {
          throw DivergenceError("non-finite state produced near " + describe(state(), system_));
        }
        continue;
      }
      const double err = rk_.error_norm(y_, 2 * dim_, tol_.rel_tol, tol_.abs_tol);
      ConstView unew(rk_.ynew.data(), dim_);
      ConstView vnew(rk_.ynew.data() + dim_, dim_);
      const double energy_new = system_.classical_energy(unew, vnew);
      const double dissipation = rk_.ynew[2 * dim_];
      const double scale = std::max({1.0, std::abs(energy_), std::abs(energy_new)});
      const double residual = std::abs(energy_new - energy_ + dissipation);
      const double roundoff = 64.0 * kEps * (scale + std::abs(energy_) + std::abs(energy_new) + std::abs(dissipation));
      const double allowed = tol_.energy_tol * std::abs(h) * scale + roundoff;

      const bool error_ok = err <= 1.0;
      const bool energy_ok = residual <= allowed && std::isfinite(energy_new);
      if (error_ok && energy_ok) {
        double factor = err > 0.0 ? kSafety * std::pow(err, -0.2) : kMaxFactor;
        if (residual > roundoff) {
          factor = std::min(factor, kSafety * std::pow(allowed / residual, 0.2));
        }
        factor = std::clamp(factor, kMinFactor, rejected_before ? 1.0 : kMaxFactor);

        t_ += h;
        std::copy(rk_.ynew.begin(), rk_.ynew.end(), y_.begin());
        rk_.accept();
        out.h = h;
        out.dissipation = dissipation;
        out.residual = residual / (std::abs(h) * scale);
        out.h_next = h * factor;
        energy_ = energy_new;
        return out;
      }
      ++out.rejected;
      rejected_before = true;
      double factor = 1.0;
      if (!error_ok) factor = std::max(kMinFactor, kSafety * std::pow(err, -0.2));
      if (!energy_ok) factor = std::min(factor, 0.5);
      h *= factor;
    }
  }

 private:
  const EvolutionSystem& system_;
  Tolerances tol_;
  std::size_t dim_;
  Vec grad_, damp_;
  DormandPrince<Rhs> rk_;
  Vec y_;
  double t_;
  double energy_ = 0.0;
  double dt_min_ = 0.0;
};

// Compensated running sum.
struct KahanSum {
  double sum = 0.0, carry = 0.0;
  void add(double x) {
    const double y = x - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

double interval_residual(double e_a, double e_b, double dissipation, double dt) {
  const double scale = std::max({1.0, std::abs(e_a), std::abs(e_b)});
  return std::abs(e_b - e_a + dissipation) / (std::abs(dt) * scale);
}

}  // namespace

void Tolerances::validate() const {
  auto positive = [](double x, const char* what) {
    if (!(x > 0.0) || !std::isfinite(x)) throw ValidationError(std::string(what) + " must be positive");
  };
  positive(rel_tol, "rel_tol");
  positive(abs_tol, "abs_tol");
  positive(energy_tol, "energy_tol");
  positive(dt_min, "dt_min");
  positive(dt_max, "dt_max");
  if (dt_min > dt_max) throw ValidationError("dt_min must not exceed dt_max");
  if (max_steps == 0) throw ValidationError("max_steps must be positive");
}

double Trajectory::max_energy_residual() const {
  double m = 0.0;
  for (double r : energy_residuals) m = std::max(m, r);
  return m;
}

StepOutcome step(const EvolutionSystem& system, const State& state, double dt_proposed,
                 const Tolerances& tol) {
  tol.validate();
  const double mag = std::abs(dt_proposed);
  if (!(mag >= tol.dt_min && mag <= tol.dt_max)) {
    throw ValidationError("dt_proposed must lie in [dt_min, dt_max]");
  }
  EnergyStepper stepper(system, tol, state);
  const auto acc = stepper.advance(dt_proposed);
  StepOutcome out;
  out.state = stepper.state();
  out.dt_used = acc.h;
  out.energy_residual = acc.residual;
  out.dissipation = acc.dissipation;
  out.dt_next = acc.h_next;
  out.rejected = acc.rejected;
  return out;
}

std::vector<double> geometric_grid(double t0, double t1, double ratio, double first_offset) {
  if (!(ratio > 1.0)) throw ValidationError("grid ratio must exceed 1");
  if (!std::isfinite(t0) || !std::isfinite(t1) || t0 == t1) {
    throw ValidationError("time span must be finite and non-degenerate");
  }
  const double span = std::abs(t1 - t0);
  const double dir = t1 > t0 ? 1.0 : -1.0;
  if (first_offset <= 0.0) first_offset = std::min(1e-4, span / 1000.0);
  std::vector<double> grid{t0};
  for (double tau = first_offset; tau < span * (1.0 - 1e-12); tau *= ratio) grid.push_back(t0 + dir * tau);
  grid.push_back(t1);
  return grid;
}

Trajectory integrate(const EvolutionSystem& system, const State& state0, double t_end,
                     const Tolerances& tol, std::span<const double> output_times) {
  tol.validate();
  const double t0 = state0.t;
  if (!std::isfinite(t_end) || t_end == t0) throw ValidationError("time span must be non-degenerate");
  const double dir = t_end > t0 ? 1.0 : -1.0;

  std::vector<double> grid;
  if (output_times.empty()) {
    grid = geometric_grid(t0, t_end);
  } else {
    const double lo = std::min(t0, t_end), hi = std::max(t0, t_end);
    for (double t : output_times) {
      if (!(t >= lo && t <= hi)) throw ValidationError("output time outside the integration span");
    }
    grid.assign(output_times.begin(), output_times.end());
    grid.push_back(t0);
    grid.push_back(t_end);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    if (dir < 0.0) std::reverse(grid.begin(), grid.end());
  }

  EnergyStepper stepper(system, tol, state0);
  Trajectory traj;
  traj.tolerances = tol;
  traj.samples.reserve(grid.size());
  traj.samples.push_back(state0);
  double energy_prev = stepper.energy();
  const double energy_start = energy_prev;
  KahanSum total_dissipation;

  double h = dir * stepper.initial_step(dir);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double target = grid[i];
    KahanSum interval_dissipation;
    while (dir * (target - stepper.time()) > 0.0) {
      if (traj.accepted_steps >= tol.max_steps) {
        throw StiffnessError("step budget exhausted at " + describe(stepper.state(), system));
      }
      const double remaining = target - stepper.time();
      double trial = h;
      bool clipped = false;
      if (std::abs(trial) >= std::abs(remaining) * (1.0 - 1e-12) ||
          std::abs(remaining) - std::abs(trial) < 1e-3 * std::abs(trial)) {
        trial = remaining;
        clipped = true;
      }
      const auto acc = stepper.advance(trial);
      traj.accepted_steps += 1;
      traj.rejected_steps += acc.rejected;
      interval_dissipation.add(acc.dissipation);
      total_dissipation.add(acc.dissipation);
      // A clipped step does not say anything about the natural step size.
      if (!clipped || acc.rejected > 0) h = acc.h_next;
      if (std::abs(target - stepper.time()) <= 4.0 * kEps * std::max(1.0, std::abs(target))) break;
    }
    State s = stepper.state();
    s.t = target;
    const double e = stepper.energy();
    traj.energy_residuals.push_back(
        interval_residual(energy_prev, e, interval_dissipation.sum, target - grid[i - 1]));
    traj.dissipation.push_back(interval_dissipation.sum);
    traj.samples.push_back(std::move(s));
    energy_prev = e;
  }
  traj.cumulative_residual = interval_residual(energy_start, energy_prev, total_dissipation.sum, t_end - t0);
  return traj;
}

double energy_balance(const EvolutionSystem& system, const Trajectory& trajectory) {
  if (trajectory.samples.size() < 2) throw ValidationError("trajectory needs at least two samples");
  if (trajectory.dissipation.size() + 1 != trajectory.samples.size()) {
    throw ValidationError("trajectory dissipation record does not match its samples");
  }
  for (const auto& s : trajectory.samples) {
    if (s.u.size() != system.dim() || s.v.size() != system.dim()) {
      throw ValidationError("trajectory dimension does not match the system");
    }
  }
  double worst = 0.0;
  double e_prev = system.classical_energy(trajectory.samples.front());
  for (std::size_t i = 1; i < trajectory.samples.size(); ++i) {
    const double e = system.classical_energy(trajectory.samples[i]);
    const double dt = trajectory.samples[i].t - trajectory.samples[i - 1].t;
    worst = std::max(worst, interval_residual(e_prev, e, trajectory.dissipation[i - 1], dt));
    e_prev = e;
  }
  return worst;
}

OdeSolution solve_ode(const OdeRhs& rhs, double t0, ConstView y0, std::span<const double> output_times,
                      double rel_tol, double abs_tol) {
  if (y0.empty()) throw ValidationError("empty initial state");
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw ValidationError("tolerances must be positive");
  if (output_times.empty()) throw ValidationError("no output times");
  const double t_end = output_times.back();
  const double dir = t_end >= t0 ? 1.0 : -1.0;

  const std::size_t n = y0.size();
  DormandPrince<const OdeRhs&> rk(rhs, n);
  Vec y(y0.begin(), y0.end());
  double t = t0;
  rk.eval(t, y, rk.k1);

  OdeSolution sol;
  double h = t_end == t0 ? 0.0 : dir * std::min(rk.initial_step(t, y, n, rel_tol, abs_tol, dir), std::abs(t_end - t0));
  for (double target : output_times) {
    if (dir * (target - t) < 0.0) throw ValidationError("output times must be monotone");
    while (dir * (target - t) > 0.0) {
      double trial = h;
      bool clipped = false;
      const double remaining = target - t;
      if (std::abs(trial) >= std::abs(remaining) * (1.0 - 1e-12)) {
        trial = remaining;
        clipped = true;
      }
      bool rejected = false;
      for (;;) {
        if (std::abs(trial) < 1e-300 + 64.0 * kEps * std::abs(t)) {
          throw StiffnessError("step size underflow in solve_ode at t=" + std::to_string(t));
        }
        rk.attempt(t, y, trial);
        const double err = all_finite(rk.ynew) ? rk.error_norm(y, n, rel_tol, abs_tol) : 1e10;
        if (err <= 1.0) {
          double factor = err > 0.0 ? kSafety * std::pow(err, -0.2) : kMaxFactor;
          factor = std::clamp(factor, kMinFactor, rejected ? 1.0 : kMaxFactor);
          t += trial;
          y = rk.ynew;
          rk.accept();
          ++sol.steps;
          if (!clipped || rejected) h = trial * factor;
          break;
        }
        rejected = true;
        clipped = false;
        trial *= std::max(kMinFactor, kSafety * std::pow(err, -0.2));
      }
      if (std::abs(target - t) <= 4.0 * kEps * std::max(1.0, std::abs(target))) t = target;
    }
    sol.times.push_back(target);
    sol.values.push_back(y);
  }
  return sol;
}

}  // namespace unibound
