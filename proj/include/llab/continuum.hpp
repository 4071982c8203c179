#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "llab/potential.hpp"

namespace llab {

/// Upper end of the universal bound 1 <= λ₁·max u <= 1 + d/8 + c·√d, d = 1.
inline constexpr double kVogtUpper = 1.0 + 1.0 / 8.0 + 0.6055;

/// Boundary state of the Dirichlet shooting problem -ψ'' + kVψ = λψ,
/// ψ(0) = 0, ψ'(0) = 1. (psi, dpsi) is renormalised each cell; the true
/// state is exp(log_scale)·(psi, dpsi). `zeros` counts zeros of ψ in (0, L].
struct CellState {
  double psi = 0.0;
  double dpsi = 1.0;
  double log_scale = 0.0;
  std::size_t zeros = 0;

  double value() const { return psi * std::exp(log_scale); }
  double derivative() const { return dpsi * std::exp(log_scale); }
};

/// Exact cell-by-cell propagation (trigonometric, hyperbolic or linear per
/// cell, depending on the sign of λ - kω_j).
CellState shoot(const RealizedPotential& pot, double lambda);

/// Number of Dirichlet eigenvalues strictly below lambda (oscillation theorem).
std::size_t oscillation_count(const RealizedPotential& pot, double lambda);

/// The n smallest continuum eigenvalues, each bisected on the oscillation
/// count to relative width rel_tol. Throws WindowError if the min-max window
/// [k·min ω, k·max ω + n²π²/L²] does not hold n roots.
std::vector<double> continuum_eigenvalues(const RealizedPotential& pot, std::size_t n,
                                          double rel_tol = 1e-11);

/// Exact solution of -u'' + kVu = 1, u(0) = u(L) = 0, for a cell-constant
/// potential. Each cell carries two coefficients in a locally scaled basis
/// (cosh/sinh for κ = √(kω) <= 1, decaying exponentials above), matched C¹
/// across cells via a banded LU solve.
class ContinuumLandscape {
 public:
  explicit ContinuumLandscape(const RealizedPotential& pot);

  double operator()(double x) const;
  double derivative(double x) const;
  double max() const { return max_; }
  double argmax() const { return argmax_; }

  /// Reciprocal condition estimate of the matching system.
  double rcond() const { return rcond_; }
  bool ill_conditioned() const { return rcond_ < 1e-12; }

 private:
  struct Cell {
    double q = 0.0;
    double kappa = 0.0;
    bool exp_basis = false;
    double A = 0.0;
    double B = 0.0;
  };
  double value_at(const Cell& c, double t) const;
  double slope_at(const Cell& c, double t) const;

  std::vector<Cell> cells_;
  double max_ = 0.0;
  double argmax_ = 0.0;
  double rcond_ = 1.0;
};

double continuum_landscape_max(const RealizedPotential& pot);

/// Two-sided estimates for a {0, b} potential with longest zero well ell_max.
struct BernoulliBounds {
  double S = 1.0;  // max(√b, 1)
  double u_lower = 0.0;
  double u_upper = 0.0;
  double lambda_lower = 0.0;
  double lambda_upper = 0.0;
  bool energy_hypothesis = false;    // b·ell_max² > π²
  bool strength_hypothesis = false;  // b^(1-ν)·ell_max^γ > 8π²(1 + √b)
  bool lambda_lower_applicable() const { return energy_hypothesis && strength_hypothesis; }
};

/// Requires b > 0, ell_max >= 1, 0 <= nu < 1, gamma < 1 (ParameterError otherwise).
BernoulliBounds bernoulli_bounds(double b, double ell_max, double nu, double gamma);

/// C¹ super-solution ũ = (1 + S·ell_max)/b + Σ σ_i built from the zero wells:
/// a cap parabola on each well plus quadratic collars of width 1/S outside it.
class SupSolution {
 public:
  SupSolution(const WellDecomposition& wells, double b);

  double operator()(double x) const;
  /// One-sided derivative; side < 0 takes the left limit.
  double derivative(double x, int side = 1) const;

  double base() const { return base_; }
  double S() const { return S_; }
  /// True when two collars meet (wells closer than 2/S).
  bool overlapping() const { return overlapping_; }

 private:
  struct Well {
    double l, r, c, len;
  };
  template <class F>
  double sum_near(double x, F&& term) const;

  std::vector<Well> wells_;
  double S_ = 1.0;
  double base_ = 0.0;
  bool overlapping_ = false;
};

SupSolution sup_solution_sigma(const WellDecomposition& wells, double b);

/// Ground state, landscape maximum and their product for -Δ + γ_c on [0, 1].
struct Homogenized {
  double lambda_c = 0.0;
  double u_c_max = 0.0;
  double ratio = 0.0;  // R(γ_c)
};

Homogenized homogenized(double gamma_c);
double homogenized_u_max(double gamma_c);
double homogenized_ratio(double gamma_c);
/// u_c(x) on [0, 1].
double homogenized_landscape(double gamma_c, double x);

/// γ* with R(γ*) = r, by bisection on [1e-8, 1e4]. Throws ParameterError when
/// r is outside (R(1e4), R(1e-8)) and SolverError if R fails its
/// monotonicity self-check.
double invert_homogenized_ratio(double r);

/// ‖F‖₂ on [0, 1] for F(x) = ∫₀ˣ kL²(V(Ly) - E ω) dy, exact for the
/// piecewise-linear F. Returns 0 when γ_c == 0 or E ω == 0.
double fluctuation_norm(const RealizedPotential& pot, double gamma_c);

}  // namespace llab
