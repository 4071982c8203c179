#include <algorithm>
#include <cmath>
#include <limits>

#include "llab/errors.hpp"
#include "llab/linalg.hpp"

namespace llab::reference {

std::vector<double> lowest_eigenvalues(const TridiagonalOperator& T, std::size_t n, double tol) {
  if (n == 0 || n > T.size()) throw DimensionError("bad eigenvalue count");
  auto [glo, ghi] = T.gershgorin();
  const double eps = std::numeric_limits<double>::epsilon();
  const double pad = 2.0 * eps * std::max(std::abs(glo), std::abs(ghi)) + std::numeric_limits<double>::min();
  glo -= pad;
  ghi += pad;
  const double floor_abs = 4.0 * eps * T.norm_inf();

  std::vector<double> out;
  double lo = glo;
  for (std::size_t j = 1; j <= n; ++j) {
    double a = lo;
    double b = ghi;
    while (b - a > std::max(tol * std::max(std::abs(a), std::abs(b)), floor_abs)) {
      const double mid = 0.5 * (a + b);
      if (mid <= a || mid >= b) break;
      if (sturm_count(T, mid) >= j)
        b = mid;
      else
        a = mid;
    }
    out.push_back(0.5 * (a + b));
    lo = a;  // count(a) < j <= j + 1
  }
  return out;
}

std::vector<double> dense_solve(const TridiagonalOperator& T, std::span<const double> rhs) {
  const std::size_t n = T.size();
  std::vector<std::vector<double>> A(n, std::vector<double>(n + 1, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    A[i][i] = T.diag[i];
    if (i + 1 < n) A[i][i + 1] = A[i + 1][i] = T.off[i];
  }
  for (std::size_t i = 0; i < n; ++i) A[i][n] = rhs[i];
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
    std::swap(A[col], A[piv]);
    if (A[col][col] == 0.0) throw SingularityError("dense_solve: singular matrix");
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = A[r][col] / A[col][col];
      for (std::size_t c = col; c <= n; ++c) A[r][c] -= f * A[col][c];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = A[i][n];
    for (std::size_t c = i + 1; c < n; ++c) s -= A[i][c] * x[c];
    x[i] = s / A[i][i];
  }
  return x;
}

}  // namespace llab::reference
