#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "llab/potential.hpp"

namespace llab {

/// Uniform mesh on [0, L] with M subdivisions per unit cell. Only the
/// N = L·M - 1 interior nodes carry unknowns (Dirichlet at both ends).
struct Grid {
  int L = 1;
  int M = 1;
  double h = 1.0;
  std::size_t N = 0;

  /// Position of interior node i (0-based), i.e. (i + 1)·h.
  double x(std::size_t i) const { return static_cast<double>(i + 1) * h; }
};

/// Symmetric tridiagonal matrix with mesh metadata.
struct TridiagonalOperator {
  std::vector<double> diag;
  std::vector<double> off;  // off[i] couples rows i and i + 1
  Grid grid;

  std::size_t size() const { return diag.size(); }

  /// Bare matrix without a physical mesh (h = 1); for tests and tooling.
  static TridiagonalOperator from_entries(std::vector<double> diag, std::vector<double> off);

  /// Gershgorin enclosure [lo, hi] of the spectrum.
  std::pair<double, double> gershgorin() const;
  double norm_inf() const;
  double diag_norm_inf() const;

  /// y = T x
  std::vector<double> apply(const std::vector<double>& x) const;
};

/// How a node lying exactly on a cell boundary samples the potential.
///  interface_average: mean of the two adjacent cells. Keeps the jump at
///    its true position, so eigenvalues and u converge at O(h²).
///  right_cell: value of cell ⌊x⌋. Moves every jump by h/2, which costs a
///    first-order error whenever a well touches the domain boundary.
enum class NodeRule { interface_average, right_cell };

/// Second-order central differences for -d²/dx² + k V on [0, L]; interior
/// nodes take the value of cell ⌊x_i⌋, cell-boundary nodes follow `rule`.
/// Throws GridError for M < 2 or N < 1.
TridiagonalOperator assemble(const RealizedPotential& pot, int M, NodeRule rule = NodeRule::interface_average);

}  // namespace llab
