#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "llab/discretize.hpp"

namespace llab {

/// Lowest part of the spectrum of a symmetric tridiagonal operator.
struct Spectrum {
  std::vector<double> eigenvalues;                // ascending
  std::vector<std::vector<double>> eigenvectors;  // empty unless requested; h·Σv² = 1
  std::vector<double> residuals;                  // ‖T v - λ v‖₂ / ‖v‖₂ per returned vector
  std::size_t n_requested = 0;
};

inline constexpr double kDefaultBisectionTol = 1e-12;

/// Thomas algorithm for a positive definite T. Throws SingularityError on a
/// non-positive pivot and DimensionError on a size mismatch.
std::vector<double> solve_tridiagonal(const TridiagonalOperator& T, std::span<const double> rhs);

/// Number of eigenvalues strictly below mu, from the signs of the LDLᵀ pivots
/// of T - mu·I. Zero pivots are replaced by -pivmin.
std::size_t sturm_count(const TridiagonalOperator& T, double mu);

/// n-th smallest eigenvalue (1-based) by Sturm bisection from the Gershgorin
/// enclosure. Stops once the bracket is below max(tol·|λ|, 4ε·‖T‖).
double bisect_eigenvalue(const TridiagonalOperator& T, std::size_t index, double tol = kDefaultBisectionTol);

/// The n smallest eigenvalues. Each index is bisected independently, so the
/// OpenMP loop is schedule-independent and the result is bit-reproducible.
/// Throws DimensionError if n == 0 or n > N.
Spectrum lowest_eigenvalues(const TridiagonalOperator& T, std::size_t n,
                            double tol = kDefaultBisectionTol, bool with_vectors = false);

/// Inverse iteration at a computed eigenvalue. The start vector is drawn from
/// `seed`; the iterate is kept orthogonal to `deflate` (unit-norm vectors of
/// nearby eigenvalues). Returns a mesh-normalised vector (h·Σv² = 1) whose
/// largest-magnitude entry is positive. Throws ConvergenceError after 50 steps.
std::vector<double> eigenvector(const TridiagonalOperator& T, double lambda,
                                std::span<const std::vector<double>> deflate = {},
                                std::uint64_t seed = 0);

namespace reference {

/// Serial sweep that reuses the previous eigenvalue as the next lower
/// bracket. Kept as an independent check on lowest_eigenvalues.
std::vector<double> lowest_eigenvalues(const TridiagonalOperator& T, std::size_t n,
                                       double tol = kDefaultBisectionTol);

/// Dense Gaussian elimination with partial pivoting, O(N³). Test oracle only.
std::vector<double> dense_solve(const TridiagonalOperator& T, std::span<const double> rhs);

}  // namespace reference

}  // namespace llab
