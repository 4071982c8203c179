#include "llab/landscape.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "llab/errors.hpp"
#include "llab/linalg.hpp"

namespace llab {

namespace {

LandscapeResult finish(std::vector<double> u, const Grid& grid) {
  LandscapeResult res;
  res.grid = grid;
  res.W.resize(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (!(u[i] > 0.0))
      throw SolverError("landscape is not positive at node " + std::to_string(i) +
                        " (maximum principle violated)");
    res.W[i] = 1.0 / u[i];
  }
  res.u_max = *std::max_element(u.begin(), u.end());
  res.W_min = 1.0 / res.u_max;
  res.u = std::move(u);
  return res;
}

}  // namespace

LandscapeResult landscape(const TridiagonalOperator& T) {
  const std::vector<double> ones(T.size(), 1.0);
  return finish(solve_tridiagonal(T, ones), T.grid);
}

LandscapeResult landscape_from_samples(std::vector<double> u, double h) {
  if (u.empty()) throw DimensionError("landscape needs at least one node");
  Grid g;
  g.h = h;
  g.N = u.size();
  g.M = std::max(1, static_cast<int>(std::lround(1.0 / h)));
  g.L = static_cast<int>(std::lround(static_cast<double>(u.size() + 1) * h));
  return finish(std::move(u), g);
}

MinimaSet local_minima(const LandscapeResult& res) {
  const auto& u = res.u;
  const std::size_t n = u.size();
  MinimaSet out;
  std::vector<std::pair<double, double>> found;  // (W, position)

  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && u[j + 1] == u[i]) ++j;
    const double left = i == 0 ? 0.0 : u[i - 1];
    const double right = j + 1 == n ? 0.0 : u[j + 1];
    if (left < u[i] && right < u[i]) {
      // interior index a maps to node a + 1
      const double mid_node = 0.5 * static_cast<double>(i + j) + 1.0;
      found.emplace_back(1.0 / u[i], mid_node * res.grid.h);
    }
    i = j + 1;
  }
  std::sort(found.begin(), found.end());
  for (const auto& [w, x] : found) {
    out.values.push_back(w);
    out.positions.push_back(x);
  }
  return out;
}

MinimaSet generalized_minima(const MinimaSet& base, int s, std::size_t n_keep) {
  if (s < 1) throw ParameterError("generalized minima order s must be >= 1");
  std::vector<std::pair<double, double>> all;
  all.reserve(base.size() * static_cast<std::size_t>(s));
  for (int j = 1; j <= s; ++j)
    for (std::size_t i = 0; i < base.size(); ++i)
      all.emplace_back(static_cast<double>(j) * j * base.values[i], base.positions[i]);
  std::sort(all.begin(), all.end());
  if (all.size() > n_keep) all.resize(n_keep);

  MinimaSet out;
  out.order = s;
  for (const auto& [w, x] : all) {
    out.values.push_back(w);
    out.positions.push_back(x);
  }
  return out;
}

std::vector<double> harmonic_predictions(const WellDecomposition& wells, int s, std::size_t n_keep) {
  if (wells.wells.empty()) throw ParameterError("no zero well: harmonic prediction is empty");
  if (s < 1) throw ParameterError("harmonic order s must be >= 1");
  constexpr double pi2 = std::numbers::pi * std::numbers::pi;
  std::vector<double> out;
  for (int len : wells.lengths)
    for (int j = 1; j <= s; ++j)
      out.push_back(static_cast<double>(j) * j * pi2 / (static_cast<double>(len) * len));
  std::sort(out.begin(), out.end());
  if (out.size() > n_keep) out.resize(n_keep);
  return out;
}

RatioPairing pair_ratios(const std::vector<double>& eigenvalues, const MinimaSet& minima) {
  RatioPairing out;
  const std::size_t m = std::min(eigenvalues.size(), minima.size());
  out.ratios.resize(m);
  for (std::size_t i = 0; i < m; ++i) out.ratios[i] = eigenvalues[i] / minima.values[i];
  out.shortfall = std::max(eigenvalues.size(), minima.size()) - m;
  return out;
}

}  // namespace llab
