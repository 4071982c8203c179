#pragma once

#include <cstddef>
#include <vector>

#include "llab/discretize.hpp"
#include "llab/potential.hpp"

namespace llab {

/// Landscape u (T u = 1) and effective potential W = 1/u on interior nodes.
/// Boundary values u = 0 are implicit.
struct LandscapeResult {
  std::vector<double> u;
  std::vector<double> W;
  double u_max = 0.0;
  double W_min = 0.0;  // exactly 1 / u_max
  Grid grid;
};

/// Local minima of W, ascending by value. `order` is the s of W^(s).
struct MinimaSet {
  std::vector<double> values;
  std::vector<double> positions;
  int order = 1;

  std::size_t size() const { return values.size(); }
};

/// Throws SingularityError if the solve fails and SolverError if u is not
/// strictly positive (the discrete maximum principle).
LandscapeResult landscape(const TridiagonalOperator& T);

/// Wraps precomputed interior samples of u (grid spacing h). Mostly for tests.
LandscapeResult landscape_from_samples(std::vector<double> u, double h);

/// Interior local maxima of u, i.e. u_i >= both neighbours with the boundary
/// zeros as outer neighbours. A plateau of equal values bounded by strictly
/// smaller neighbours counts once, at its midpoint.
MinimaSet local_minima(const LandscapeResult& res);

/// W^(s): the multiset {j²·W_n : j = 1..s} sorted ascending (ties by
/// position), truncated to n_keep entries.
MinimaSet generalized_minima(const MinimaSet& base, int s, std::size_t n_keep);

/// Decoupled-well harmonics {s'²π²/L_i² : s' = 1..s} ascending, truncated.
/// Throws ParameterError when there is no well.
std::vector<double> harmonic_predictions(const WellDecomposition& wells, int s, std::size_t n_keep);

/// Rank-to-rank ratios λ_n / W_n over the shorter of the two lists.
struct RatioPairing {
  std::vector<double> ratios;
  std::size_t shortfall = 0;  // |len(eigenvalues) - len(minima)|
};

RatioPairing pair_ratios(const std::vector<double>& eigenvalues, const MinimaSet& minima);

}  // namespace llab
