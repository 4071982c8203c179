#include "llab/discretize.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "llab/errors.hpp"

namespace llab {

TridiagonalOperator TridiagonalOperator::from_entries(std::vector<double> diag, std::vector<double> off) {
  if (diag.empty()) throw DimensionError("operator needs at least one row");
  if (off.size() + 1 != diag.size()) throw DimensionError("off-diagonal length must be N - 1");
  TridiagonalOperator T;
  T.grid = Grid{static_cast<int>(diag.size()) + 1, 1, 1.0, diag.size()};
  T.diag = std::move(diag);
  T.off = std::move(off);
  return T;
}

std::pair<double, double> TridiagonalOperator::gershgorin() const {
  double lo = diag[0];
  double hi = diag[0];
  for (std::size_t i = 0; i < diag.size(); ++i) {
    double r = 0.0;
    if (i > 0) r += std::abs(off[i - 1]);
    if (i + 1 < diag.size()) r += std::abs(off[i]);
    lo = std::min(lo, diag[i] - r);
    hi = std::max(hi, diag[i] + r);
  }
  return {lo, hi};
}

double TridiagonalOperator::norm_inf() const {
  const auto [lo, hi] = gershgorin();
  return std::max(std::abs(lo), std::abs(hi));
}

double TridiagonalOperator::diag_norm_inf() const {
  double m = 0.0;
  for (double d : diag) m = std::max(m, std::abs(d));
  return m;
}

std::vector<double> TridiagonalOperator::apply(const std::vector<double>& x) const {
  const std::size_t n = size();
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double v = diag[i] * x[i];
    if (i > 0) v += off[i - 1] * x[i - 1];
    if (i + 1 < n) v += off[i] * x[i + 1];
    y[i] = v;
  }
  return y;
}

TridiagonalOperator assemble(const RealizedPotential& pot, int M, NodeRule rule) {
  const int L = pot.length();
  if (M < 2) throw GridError("M must be >= 2 (got " + std::to_string(M) + ")");
  const long long nodes = static_cast<long long>(L) * M - 1;
  if (nodes < 1) throw GridError("grid has no interior nodes");

  TridiagonalOperator T;
  T.grid = Grid{L, M, 1.0 / M, static_cast<std::size_t>(nodes)};
  const double inv_h2 = static_cast<double>(M) * M;
  T.diag.resize(T.grid.N);
  T.off.assign(T.grid.N - 1, -inv_h2);
  for (std::size_t i = 0; i < T.grid.N; ++i) {
    // node index m = i + 1 sits at x = m/M, in cell ⌊m/M⌋
    const auto m = i + 1;
    const auto cell = static_cast<int>(m / static_cast<std::size_t>(M));
    double v = pot.coupled(cell);
    if (rule == NodeRule::interface_average && m % static_cast<std::size_t>(M) == 0) v = 0.5 * (v + pot.coupled(cell - 1));
    T.diag[i] = 2.0 * inv_h2 + v;
  }
  return T;
}

}  // namespace llab
