#pragma once

// Finite-dimensional realizations of u'' + grad F(u) + g(t, u') = 0.
//
// Every builder defines the discrete potential F first and derives its
// gradient from it, so the discrete energy identity
//   d/dt [ 1/2 |v|_H^2 + F(u) ] = -<g(t, v), v>
// holds exactly for the semi-discrete system.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace unibound {

using Vec = std::vector<double>;
using ConstView = std::span<const double>;
using MutView = std::span<double>;

/// Norms of the chain V c Y c X c H on the truncated state space, plus the
/// pairing that realizes both the H scalar product and the V'/V duality.
struct NormSet {
  std::function<double(ConstView)> norm_h;
  std::function<double(ConstView)> norm_x;
  std::function<double(ConstView)> norm_y;
  std::function<double(ConstView)> norm_v;
  /// Upper bound for the X' norm of a functional (Hoelder dual realized on
  /// the same quadrature as norm_x).
  std::function<double(ConstView)> norm_x_dual;
  std::function<double(ConstView, ConstView)> pairing;
};

/// Constants of the structural inequalities. A missing value means the
/// builder has no analytic value for it (or the inequality fails).
struct AssumptionConstants {
  std::optional<double> delta1, delta2, delta3, delta4;
  std::optional<double> c1, c2, c3, c4, c5;
  std::optional<double> d4;
};

struct State {
  double t = 0.0;
  Vec u;
  Vec v;
};

/// Immutable evolution system; safe to share between threads.
class EvolutionSystem {
 public:
  using PotentialFn = std::function<double(ConstView)>;
  using GradientFn = std::function<void(ConstView, MutView)>;
  using DampingFn = std::function<void(double, ConstView, MutView)>;

  struct Definition {
    std::string name;
    std::size_t dim = 0;
    double alpha = 0.0;
    double beta = 0.0;
    PotentialFn potential;
    GradientFn grad_potential;
    DampingFn damping;
    NormSet norms;
    std::optional<AssumptionConstants> declared_constants;
  };

  explicit EvolutionSystem(Definition def);

  const std::string& name() const noexcept { return def_.name; }
  std::size_t dim() const noexcept { return def_.dim; }
  double alpha() const noexcept { return def_.alpha; }
  double beta() const noexcept { return def_.beta; }
  const NormSet& norms() const noexcept { return def_.norms; }
  const std::optional<AssumptionConstants>& declared_constants() const noexcept {
    return def_.declared_constants;
  }

  double potential(ConstView u) const { return def_.potential(u); }
  void grad_potential(ConstView u, MutView out) const { def_.grad_potential(u, out); }
  void damping(double t, ConstView v, MutView out) const { def_.damping(t, v, out); }

  Vec grad_potential(ConstView u) const;
  Vec damping(double t, ConstView v) const;
  double pairing(ConstView a, ConstView b) const { return def_.norms.pairing(a, b); }

  /// E0 = 1/2 |v|_H^2 + F(u).
  double classical_energy(ConstView u, ConstView v) const;
  double classical_energy(const State& s) const { return classical_energy(s.u, s.v); }

 private:
  Definition def_;
};

enum class Boundary { Dirichlet, Neumann, Hinged, Clamped };

/// Separable forcing h(t, x) = h0(x) * w(t) with |w| <= 1.
struct Forcing {
  /// h0 sampled on the quadrature grid (grid_points values). Empty = no forcing.
  Vec grid_values;
  /// w(t) = cos(frequency * t); frequency 0 gives a constant profile.
  double frequency = 0.0;

  bool active() const noexcept { return !grid_values.empty(); }
};

struct PdeParams {
  std::size_t modes = 8;
  std::size_t grid_points = 24;
  Boundary boundary = Boundary::Dirichlet;
  double b = 1.0;
  double c = 1.0;
  double lambda = 0.0;
  double mu = 0.0;
  double alpha = 1.0;
  double beta = 2.0;
  Forcing forcing;
  /// When set, builders reject parameters for which F(u) >= delta4 |u|_H^2 fails.
  bool require_f4 = false;
};

/// Grid x_j = (j + 1/2) pi / M on (0, pi) used by the pseudospectral builders.
Vec quadrature_grid(std::size_t grid_points);

/// Value of the k-th (1-based) orthonormal eigenfunction at x.
double eigenfunction(Boundary boundary, std::size_t k, double x);

/// Eigenvalue of the k-th mode of the linear operator (-Laplacian or bi-Laplacian).
double linear_eigenvalue(Boundary boundary, std::size_t k);

/// First eigenvalue lambda_1 of the linear operator for the boundary condition.
double first_eigenvalue(Boundary boundary);

/// u'' + |u'|^alpha u' + |u|^beta u = 0.
EvolutionSystem build_scalar_ode(double alpha, double beta);

/// u'' + omega^2 u + delta |u'|^rho u' = 0 (quadratic potential).
EvolutionSystem build_oscillator(double omega, double delta, double rho);

/// Galerkin truncation of u_tt - u_xx + b|u|^beta u - lambda u + c|u_t|^alpha u_t - mu u_t = h
/// on (0, pi), Dirichlet or Neumann.
EvolutionSystem build_galerkin_wave(const PdeParams& params);

/// Same as the wave builder with the bi-Laplacian (hinged boundary only).
EvolutionSystem build_galerkin_plate(const PdeParams& params);

/// Kirchhoff equation with averaged damping, exact modal ODE system (Dirichlet only).
/// With `degenerate` the linear -u_xx term is dropped.
EvolutionSystem build_kirchhoff(const PdeParams& params, bool degenerate);

/// Kirchhoff potential on the Neumann cosine basis (constant mode included).
/// Only meant as a diagnostic: this system violates the coercivity of F and
/// build_kirchhoff refuses it.
EvolutionSystem build_kirchhoff_neumann_surrogate(const PdeParams& params);

/// Grid values of a modal vector for the pseudospectral builders' basis.
Vec synthesize(Boundary boundary, ConstView modal, ConstView grid);

}  // namespace unibound
