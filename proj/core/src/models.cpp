#include "unibound/models.hpp"

#include <cmath>
#include <memory>
#include <numbers>
#include <numeric>
#include <sstream>

#include "unibound/errors.hpp"

namespace unibound {
namespace {

constexpr double kPi = std::numbers::pi;

/// |x|^p x, with the value at 0 taken as 0 (C^1 for p > 0).
double signed_pow(double x, double p) {
  if (x == 0.0) return 0.0;
  return std::pow(std::abs(x), p) * x;
}

double dot(ConstView a, ConstView b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double euclid(ConstView a) { return std::sqrt(dot(a, a)); }

void require_finite(double value, const char* what) {
  if (!std::isfinite(value)) {
    throw ValidationError(std::string(what) + " must be finite");
  }
}

void require_positive(double value, const char* what) {
  require_finite(value, what);
  if (value <= 0.0) throw ValidationError(std::string(what) + " must be positive");
}

void require_nonnegative(double value, const char* what) {
  require_finite(value, what);
  if (value < 0.0) throw ValidationError(std::string(what) + " must be non-negative");
}

// Additive constant C such that  a y^(p) - k y^2 >= -C  for all y >= 0, p > 2.
double young_quadratic(double a, double k, double p) {
  if (k <= 0.0) return 0.0;
  const double q = p - 2.0;
  const double y = std::pow(2.0 * k / (a * p), 1.0 / q);
  return k * y * y * q / p;
}

// Additive constant C such that  a y^p - k y >= -C  for all y >= 0, p > 1.
double young_linear(double a, double k, double p) {
  if (k <= 0.0) return 0.0;
  const double y = std::pow(k / (a * p), 1.0 / (p - 1.0));
  return k * y * (p - 1.0) / p;
}

// Modal basis sampled on the quadrature grid, shared by all closures of one system.
struct Galerkin {
  Boundary boundary;
  std::size_t modes;
  std::size_t points;
  double weight;        // pi / M
  Vec basis;            // basis[k * M + j] = e_{k+1}(x_j)
  Vec eigenvalues;      // of the linear operator, per mode

  Galerkin(Boundary bc, std::size_t n, std::size_t m, bool bilaplacian)
      : boundary(bc), modes(n), points(m), weight(kPi / static_cast<double>(m)),
        basis(n * m), eigenvalues(n) {
    const Vec grid = quadrature_grid(m);
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t j = 0; j < m; ++j) basis[k * m + j] = eigenfunction(bc, k + 1, grid[j]);
      const double lin = linear_eigenvalue(bc == Boundary::Hinged ? Boundary::Dirichlet : bc, k + 1);
      eigenvalues[k] = bilaplacian ? lin * lin : lin;
    }
  }

  void to_grid(ConstView modal, MutView grid) const {
    std::fill(grid.begin(), grid.end(), 0.0);
    for (std::size_t k = 0; k < modes; ++k) {
      const double a = modal[k];
      if (a == 0.0) continue;
      const double* row = &basis[k * points];
      for (std::size_t j = 0; j < points; ++j) grid[j] += a * row[j];
    }
  }

  // out_k = sum_j w f_j e_k(x_j)
  void project(ConstView grid, MutView modal) const {
    for (std::size_t k = 0; k < modes; ++k) {
      const double* row = &basis[k * points];
      double acc = 0.0;
      for (std::size_t j = 0; j < points; ++j) acc += grid[j] * row[j];
      modal[k] = weight * acc;
    }
  }

  double power_integral(ConstView grid, double p) const {
    double acc = 0.0;
    for (double x : grid) acc += std::pow(std::abs(x), p);
    return weight * acc;
  }

  double lp_norm(ConstView modal, double p) const {
    Vec grid(points);
    to_grid(modal, grid);
    return std::pow(power_integral(grid, p), 1.0 / p);
  }
};

double time_profile(const Forcing& forcing, double t) {
  return forcing.frequency == 0.0 ? 1.0 : std::cos(forcing.frequency * t);
}

Vec project_forcing(const Galerkin& basis, const Forcing& forcing) {
  Vec modal(basis.modes, 0.0);
  if (!forcing.active()) return modal;
  if (forcing.grid_values.size() != basis.points) {
    throw ValidationError("forcing grid function must have grid_points values");
  }
  for (double h : forcing.grid_values) require_finite(h, "forcing value");
  basis.project(forcing.grid_values, modal);
  return modal;
}

void validate_pde(const PdeParams& p) {
  if (p.modes == 0) throw ValidationError("modes must be positive");
  if (p.grid_points < 2 * p.modes) {
    std::ostringstream msg;
    msg << "grid_points (" << p.grid_points << ") must be at least 2 * modes (" << 2 * p.modes
        << ") for dealiasing";
    throw ValidationError(msg.str());
  }
  require_nonnegative(p.b, "b");
  require_nonnegative(p.c, "c");
  require_finite(p.lambda, "lambda");
  require_finite(p.mu, "mu");
  require_positive(p.alpha, "alpha");
  require_positive(p.beta, "beta");
  require_finite(p.forcing.frequency, "forcing frequency");
}

// Declared constants shared by the semilinear wave and plate builders.
AssumptionConstants semilinear_constants(const PdeParams& p, double lambda1, double forcing_norm) {
  AssumptionConstants k;
  const double a = p.alpha;
  const double bt = p.beta;
  if (p.b > 0.0) {
    if (p.lambda <= lambda1) {
      k.delta1 = p.b / (bt + 2.0);
      k.c1 = 0.0;
    } else {
      // Half of the power term absorbs the negative quadratic part through
      // |u|_H^2 <= pi^(beta/(beta+2)) |u|_Y^2.
      k.delta1 = p.b / (2.0 * (bt + 2.0));
      const double kq = 0.5 * (p.lambda - lambda1) * std::pow(kPi, bt / (bt + 2.0));
      k.c1 = young_quadratic(*k.delta1, kq, bt + 2.0);
    }
  }
  k.delta2 = 2.0;
  k.c2 = 0.0;
  if (p.c > 0.0) {
    if (p.mu <= 0.0 && forcing_norm == 0.0) {
      k.delta3 = p.c;
      k.c3 = 0.0;
    } else {
      k.delta3 = p.c / 2.0;
      const double kq = std::max(p.mu, 0.0) * std::pow(kPi, a / (a + 2.0));
      const double kl = forcing_norm * std::pow(kPi, a / (2.0 * (a + 2.0)));
      k.c3 = young_quadratic(p.c / 4.0, kq, a + 2.0) + young_linear(p.c / 4.0, kl, a + 2.0);
    }
  }
  if (p.mu == 0.0 && forcing_norm == 0.0) k.c4 = 0.0;
  if (a < bt) k.c5 = 1.0;
  if (p.lambda < lambda1) k.delta4 = 0.5 * (lambda1 - p.lambda);
  return k;
}

EvolutionSystem build_semilinear(const PdeParams& p, bool bilaplacian, std::string name) {
  auto basis = std::make_shared<const Galerkin>(p.boundary, p.modes, p.grid_points, bilaplacian);
  auto forcing_modal = std::make_shared<const Vec>(project_forcing(*basis, p.forcing));
  const double forcing_norm = euclid(*forcing_modal);
  const double lambda1 = first_eigenvalue(p.boundary);

  if (p.require_f4 && !(p.lambda < lambda1)) {
    std::ostringstream msg;
    msg << "F(u) >= delta4 |u|_H^2 requires lambda < " << lambda1 << " for this boundary";
    if (p.boundary == Boundary::Neumann) msg << " (constant modes carry no gradient energy)";
    throw ValidationError(msg.str());
  }

  const double a = p.alpha, bt = p.beta, b = p.b, c = p.c, lam = p.lambda, mu = p.mu;
  const Forcing forcing = p.forcing;

  EvolutionSystem::Definition def;
  def.name = std::move(name);
  def.dim = p.modes;
  def.alpha = a;
  def.beta = bt;

  def.potential = [basis, lam, b, bt](ConstView u) {
    double quad = 0.0;
    for (std::size_t k = 0; k < basis->modes; ++k) quad += (basis->eigenvalues[k] - lam) * u[k] * u[k];
    double power = 0.0;
    if (b != 0.0) {
      Vec grid(basis->points);
      basis->to_grid(u, grid);
      power = b / (bt + 2.0) * basis->power_integral(grid, bt + 2.0);
    }
    return 0.5 * quad + power;
  };

  def.grad_potential = [basis, lam, b, bt](ConstView u, MutView out) {
    if (b != 0.0) {
      Vec grid(basis->points);
      basis->to_grid(u, grid);
      for (double& x : grid) x = b * signed_pow(x, bt);
      basis->project(grid, out);
    } else {
      std::fill(out.begin(), out.end(), 0.0);
    }
    for (std::size_t k = 0; k < basis->modes; ++k) out[k] += (basis->eigenvalues[k] - lam) * u[k];
  };

  def.damping = [basis, forcing_modal, forcing, c, mu, a](double t, ConstView v, MutView out) {
    if (c != 0.0) {
      Vec grid(basis->points);
      basis->to_grid(v, grid);
      for (double& x : grid) x = c * signed_pow(x, a);
      basis->project(grid, out);
    } else {
      std::fill(out.begin(), out.end(), 0.0);
    }
    const double w = forcing.active() ? time_profile(forcing, t) : 0.0;
    for (std::size_t k = 0; k < basis->modes; ++k) out[k] -= mu * v[k] + w * (*forcing_modal)[k];
  };

  NormSet& n = def.norms;
  n.norm_h = [](ConstView u) { return euclid(u); };
  n.norm_x = [basis, a](ConstView u) { return basis->lp_norm(u, a + 2.0); };
  n.norm_y = [basis, bt](ConstView u) { return basis->lp_norm(u, bt + 2.0); };
  n.norm_x_dual = [basis, a](ConstView g) { return basis->lp_norm(g, (a + 2.0) / (a + 1.0)); };
  const bool shift = p.boundary == Boundary::Neumann;
  n.norm_v = [basis, shift](ConstView u) {
    double acc = 0.0;
    for (std::size_t k = 0; k < basis->modes; ++k) {
      acc += (basis->eigenvalues[k] + (shift ? 1.0 : 0.0)) * u[k] * u[k];
    }
    return std::sqrt(acc);
  };
  n.pairing = [](ConstView x, ConstView y) { return dot(x, y); };

  def.declared_constants = semilinear_constants(p, lambda1, forcing_norm);
  return EvolutionSystem(std::move(def));
}

// Modal Kirchhoff system on a given basis. `lambda0` is the smallest value of
// the quadratic form coefficient (1 - degenerate) k^2 used for constants.
EvolutionSystem build_kirchhoff_on(const PdeParams& p, bool degenerate, std::string name,
                                   std::optional<AssumptionConstants> constants) {
  auto basis = std::make_shared<const Galerkin>(p.boundary, p.modes, p.grid_points, false);
  auto forcing_modal = std::make_shared<const Vec>(project_forcing(*basis, p.forcing));
  auto weights = std::make_shared<const Vec>(basis->eigenvalues);
  const double a = p.alpha, bt = p.beta, b = p.b, c = p.c, lam = p.lambda, mu = p.mu;
  const double linear = degenerate ? 0.0 : 1.0;
  const Forcing forcing = p.forcing;

  auto stiffness = [weights](ConstView u) {
    double s = 0.0;
    for (std::size_t k = 0; k < weights->size(); ++k) s += (*weights)[k] * u[k] * u[k];
    return s;
  };

  EvolutionSystem::Definition def;
  def.name = std::move(name);
  def.dim = p.modes;
  def.alpha = a;
  def.beta = bt;
  def.potential = [stiffness, linear, b, bt, lam](ConstView u) {
    const double s = stiffness(u);
    return 0.5 * linear * s + b / (bt + 2.0) * std::pow(s, 0.5 * (bt + 2.0)) - 0.5 * lam * dot(u, u);
  };
  def.grad_potential = [stiffness, weights, linear, b, bt, lam](ConstView u, MutView out) {
    const double s = stiffness(u);
    const double coeff = linear + (s > 0.0 ? b * std::pow(s, 0.5 * bt) : 0.0);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = coeff * (*weights)[k] * u[k] - lam * u[k];
  };
  def.damping = [forcing_modal, forcing, c, mu, a](double t, ConstView v, MutView out) {
    const double kinetic = dot(v, v);
    const double coeff = kinetic > 0.0 ? c * std::pow(kinetic, 0.5 * a) : 0.0;
    const double w = forcing.active() ? time_profile(forcing, t) : 0.0;
    for (std::size_t k = 0; k < out.size(); ++k) {
      out[k] = coeff * v[k] - mu * v[k] - w * (*forcing_modal)[k];
    }
  };

  NormSet& n = def.norms;
  n.norm_h = [](ConstView u) { return euclid(u); };
  n.norm_x = n.norm_h;
  n.norm_x_dual = n.norm_h;
  n.norm_y = [stiffness](ConstView u) { return std::sqrt(stiffness(u)); };
  n.norm_v = n.norm_y;
  n.pairing = [](ConstView x, ConstView y) { return dot(x, y); };
  if (p.boundary == Boundary::Neumann) {
    // Y = V would not be a norm (constants have zero gradient); use H.
    n.norm_y = n.norm_h;
    n.norm_v = [weights](ConstView u) {
      double acc = 0.0;
      for (std::size_t k = 0; k < weights->size(); ++k) acc += (1.0 + (*weights)[k]) * u[k] * u[k];
      return std::sqrt(acc);
    };
  }
  def.declared_constants = std::move(constants);
  return EvolutionSystem(std::move(def));
}

}  // namespace

EvolutionSystem::EvolutionSystem(Definition def) : def_(std::move(def)) {
  if (def_.dim == 0) throw ValidationError("system dimension must be positive");
  if (!def_.potential || !def_.grad_potential || !def_.damping || !def_.norms.pairing) {
    throw ValidationError("system definition is incomplete");
  }
}

Vec EvolutionSystem::grad_potential(ConstView u) const {
  Vec out(dim());
  def_.grad_potential(u, out);
  return out;
}

Vec EvolutionSystem::damping(double t, ConstView v) const {
  Vec out(dim());
  def_.damping(t, v, out);
  return out;
}

double EvolutionSystem::classical_energy(ConstView u, ConstView v) const {
  return 0.5 * pairing(v, v) + potential(u);
}

Vec quadrature_grid(std::size_t grid_points) {
  Vec x(grid_points);
  const double h = kPi / static_cast<double>(grid_points);
  for (std::size_t j = 0; j < grid_points; ++j) x[j] = (static_cast<double>(j) + 0.5) * h;
  return x;
}

double eigenfunction(Boundary boundary, std::size_t k, double x) {
  const double scale = std::sqrt(2.0 / kPi);
  switch (boundary) {
    case Boundary::Dirichlet:
    case Boundary::Hinged:
      return scale * std::sin(static_cast<double>(k) * x);
    case Boundary::Neumann:
      if (k == 1) return 1.0 / std::sqrt(kPi);
      return scale * std::cos(static_cast<double>(k - 1) * x);
    case Boundary::Clamped:
      break;
  }
  throw UnsupportedError("clamped boundary has no closed-form diagonal basis");
}

double linear_eigenvalue(Boundary boundary, std::size_t k) {
  const double kk = static_cast<double>(k);
  switch (boundary) {
    case Boundary::Dirichlet:
      return kk * kk;
    case Boundary::Neumann:
      return (kk - 1.0) * (kk - 1.0);
    case Boundary::Hinged:
      return kk * kk * kk * kk;
    case Boundary::Clamped:
      break;
  }
  throw UnsupportedError("clamped boundary has no closed-form diagonal basis");
}

double first_eigenvalue(Boundary boundary) { return linear_eigenvalue(boundary, 1); }

Vec synthesize(Boundary boundary, ConstView modal, ConstView grid) {
  Vec out(grid.size(), 0.0);
  for (std::size_t k = 0; k < modal.size(); ++k) {
    for (std::size_t j = 0; j < grid.size(); ++j) out[j] += modal[k] * eigenfunction(boundary, k + 1, grid[j]);
  }
  return out;
}

EvolutionSystem build_scalar_ode(double alpha, double beta) {
  require_positive(alpha, "alpha");
  require_nonnegative(beta, "beta");

  EvolutionSystem::Definition def;
  def.name = "scalar_ode";
  def.dim = 1;
  def.alpha = alpha;
  def.beta = beta;
  def.potential = [beta](ConstView u) { return std::pow(std::abs(u[0]), beta + 2.0) / (beta + 2.0); };
  def.grad_potential = [beta](ConstView u, MutView out) { out[0] = signed_pow(u[0], beta); };
  def.damping = [alpha](double, ConstView v, MutView out) { out[0] = signed_pow(v[0], alpha); };

  auto abs1 = [](ConstView x) { return std::abs(x[0]); };
  def.norms = NormSet{abs1, abs1, abs1, abs1, abs1,
                      [](ConstView x, ConstView y) { return x[0] * y[0]; }};

  AssumptionConstants k;
  k.delta1 = 1.0 / (beta + 2.0);
  k.delta2 = beta + 2.0;
  k.delta3 = 1.0;
  k.d4 = 1.0;
  k.c1 = k.c2 = k.c3 = k.c4 = 0.0;
  if (alpha <= beta) k.c5 = 1.0;
  def.declared_constants = k;
  return EvolutionSystem(std::move(def));
}

EvolutionSystem build_oscillator(double omega, double delta, double rho) {
  require_finite(omega, "omega");
  require_positive(delta, "delta");
  require_positive(rho, "rho");

  const double w2 = omega * omega;
  EvolutionSystem::Definition def;
  def.name = "oscillator";
  def.dim = 1;
  def.alpha = rho;
  def.beta = 0.0;
  def.potential = [w2](ConstView u) { return 0.5 * w2 * u[0] * u[0]; };
  def.grad_potential = [w2](ConstView u, MutView out) { out[0] = w2 * u[0]; };
  def.damping = [delta, rho](double, ConstView v, MutView out) { out[0] = delta * signed_pow(v[0], rho); };
  auto abs1 = [](ConstView x) { return std::abs(x[0]); };
  def.norms = NormSet{abs1, abs1, abs1, abs1, abs1,
                      [](ConstView x, ConstView y) { return x[0] * y[0]; }};

  // The quadratic potential is not super-quadratic; no coercivity constants.
  AssumptionConstants k;
  k.delta2 = 2.0;
  k.c2 = 0.0;
  k.delta3 = delta;
  k.c3 = 0.0;
  k.d4 = delta;
  k.c4 = 0.0;
  def.declared_constants = k;
  return EvolutionSystem(std::move(def));
}

EvolutionSystem build_galerkin_wave(const PdeParams& params) {
  validate_pde(params);
  if (params.boundary != Boundary::Dirichlet && params.boundary != Boundary::Neumann) {
    throw ValidationError("wave equation supports Dirichlet or Neumann boundary only");
  }
  return build_semilinear(params, false,
                          params.boundary == Boundary::Dirichlet ? "wave_dirichlet" : "wave_neumann");
}

EvolutionSystem build_galerkin_plate(const PdeParams& params) {
  if (params.boundary == Boundary::Clamped) {
    throw UnsupportedError("clamped plate: the bi-Laplacian eigenbasis is not diagonal in sines");
  }
  if (params.boundary != Boundary::Hinged) {
    throw ValidationError("plate equation supports hinged boundary only");
  }
  validate_pde(params);
  return build_semilinear(params, true, "plate_hinged");
}

EvolutionSystem build_kirchhoff(const PdeParams& params, bool degenerate) {
  if (params.boundary == Boundary::Neumann) {
    throw ValidationError(
        "Kirchhoff equation with Neumann boundary is refused: with lambda = 0 and h = 0 every "
        "constant function is a stationary solution, and the potential cannot control u through "
        "its gradient, so no universal bound holds");
  }
  if (params.boundary != Boundary::Dirichlet) {
    throw ValidationError("Kirchhoff equation supports Dirichlet boundary only");
  }
  validate_pde(params);

  // Forcing norm is needed for the constants; project once here.
  const Galerkin probe(params.boundary, params.modes, params.grid_points, false);
  const double forcing_norm = euclid(project_forcing(probe, params.forcing));
  const double a = params.alpha, bt = params.beta, b = params.b, c = params.c;
  const double lambda0 = degenerate ? 0.0 : 1.0;

  AssumptionConstants k;
  if (b > 0.0) {
    if (params.lambda <= lambda0) {
      k.delta1 = b / (bt + 2.0);
      k.c1 = 0.0;
    } else {
      // |u|_H <= |u|_Y on the sine basis (weights k^2 >= 1).
      k.delta1 = b / (2.0 * (bt + 2.0));
      k.c1 = young_quadratic(*k.delta1, 0.5 * (params.lambda - lambda0), bt + 2.0);
    }
  }
  k.delta2 = 2.0;
  k.c2 = 0.0;
  if (c > 0.0) {
    if (params.mu <= 0.0 && forcing_norm == 0.0) {
      k.delta3 = c;
      k.c3 = 0.0;
    } else {
      k.delta3 = c / 2.0;
      k.c3 = young_quadratic(c / 4.0, std::max(params.mu, 0.0), a + 2.0) +
             young_linear(c / 4.0, forcing_norm, a + 2.0);
    }
  }
  if (c + std::abs(params.mu) > 0.0) {
    k.d4 = c + std::abs(params.mu);
    k.c4 = std::abs(params.mu) + forcing_norm;
  }
  if (a < bt) k.c5 = 1.0;
  if (params.lambda < lambda0) k.delta4 = 0.5 * (lambda0 - params.lambda);

  if (params.require_f4 && !(params.lambda < lambda0)) {
    throw ValidationError("F(u) >= delta4 |u|_H^2 requires lambda below the linear part's first eigenvalue");
  }
  return build_kirchhoff_on(params, degenerate, degenerate ? "kirchhoff_degenerate" : "kirchhoff", k);
}

EvolutionSystem build_kirchhoff_neumann_surrogate(const PdeParams& params) {
  PdeParams p = params;
  p.boundary = Boundary::Neumann;
  validate_pde(p);
  return build_kirchhoff_on(p, false, "kirchhoff_neumann_surrogate", std::nullopt);
}

}  // namespace unibound
