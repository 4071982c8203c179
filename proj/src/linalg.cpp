#include "llab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "llab/errors.hpp"
#include "llab/rng.hpp"

namespace llab {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double pivmin_for(const TridiagonalOperator& T) {
  double emax = 1.0;
  for (double e : T.off) emax = std::max(emax, e * e);
  return std::numeric_limits<double>::min() * emax;
}

std::size_t count_below(const TridiagonalOperator& T, double mu, double pivmin) {
  std::size_t count = 0;
  double d = T.diag[0] - mu;
  if (std::abs(d) < pivmin) d = -pivmin;
  if (d < 0.0) ++count;
  for (std::size_t i = 1; i < T.diag.size(); ++i) {
    const double e = T.off[i - 1];
    d = (T.diag[i] - mu) - e * e / d;
    if (std::abs(d) < pivmin) d = -pivmin;
    if (d < 0.0) ++count;
  }
  return count;
}

double bisect(const TridiagonalOperator& T, std::size_t index, double lo, double hi, double tol,
              double pivmin) {
  const double floor_abs = 4.0 * kEps * T.norm_inf();
  // count(lo) < index <= count(hi)
  while (true) {
    const double mid = 0.5 * (lo + hi);
    const double width = hi - lo;
    if (width <= std::max(tol * std::max(std::abs(lo), std::abs(hi)), floor_abs)) break;
    if (mid <= lo || mid >= hi) break;
    if (count_below(T, mid, pivmin) >= index)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

std::pair<double, double> widened_enclosure(const TridiagonalOperator& T) {
  auto [lo, hi] = T.gershgorin();
  const double pad = 2.0 * kEps * std::max(std::abs(lo), std::abs(hi)) + std::numeric_limits<double>::min();
  return {lo - pad, hi + pad};
}

// LU factorisation of T - shift·I with partial pivoting (LAPACK gttrf layout).
struct ShiftedLU {
  std::vector<double> dl, d, du, du2;
  std::vector<unsigned char> swapped;

  ShiftedLU(const TridiagonalOperator& T, double shift) {
    const std::size_t n = T.size();
    d.resize(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = T.diag[i] - shift;
    dl = T.off;
    du = T.off;
    du2.assign(n > 2 ? n - 2 : 0, 0.0);
    swapped.assign(n > 1 ? n - 1 : 0, 0);
    const double tiny = kEps * std::max(T.norm_inf(), std::numeric_limits<double>::min());

    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (std::abs(d[i]) >= std::abs(dl[i])) {
        if (d[i] == 0.0) d[i] = tiny;
        const double fact = dl[i] / d[i];
        dl[i] = fact;
        d[i + 1] -= fact * du[i];
      } else {
        const double fact = d[i] / dl[i];
        d[i] = dl[i];
        dl[i] = fact;
        const double temp = du[i];
        du[i] = d[i + 1];
        d[i + 1] = temp - fact * d[i + 1];
        if (i + 2 < n) {
          du2[i] = du[i + 1];
          du[i + 1] = -fact * du[i + 1];
        }
        swapped[i] = 1;
      }
    }
    if (d[n - 1] == 0.0) d[n - 1] = tiny;
  }

  void solve(std::vector<double>& b) const {
    const std::size_t n = d.size();
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (!swapped[i]) {
        b[i + 1] -= dl[i] * b[i];
      } else {
        const double temp = b[i];
        b[i] = b[i + 1];
        b[i + 1] = temp - dl[i] * b[i];
      }
    }
    b[n - 1] /= d[n - 1];
    if (n > 1) b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
    if (n >= 3)
      for (std::size_t i = n - 2; i-- > 0;) b[i] = (b[i] - du[i] * b[i + 1] - du2[i] * b[i + 2]) / d[i];
  }
};

double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

void orthogonalize(std::vector<double>& x, std::span<const std::vector<double>> basis) {
  for (const auto& q : basis) {
    const double dot = std::inner_product(x.begin(), x.end(), q.begin(), 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] -= dot * q[i];
  }
}

double residual_norm(const TridiagonalOperator& T, const std::vector<double>& x, double lambda) {
  auto r = T.apply(x);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= lambda * x[i];
  return norm2(r) / norm2(x);
}

}  // namespace

std::vector<double> solve_tridiagonal(const TridiagonalOperator& T, std::span<const double> rhs) {
  const std::size_t n = T.size();
  if (rhs.size() != n) throw DimensionError("rhs length does not match operator size");
  std::vector<double> c(n);  // modified super-diagonal
  std::vector<double> x(rhs.begin(), rhs.end());

  double pivot = T.diag[0];
  if (!(pivot > 0.0)) throw SingularityError("non-positive pivot at row 0");
  c[0] = n > 1 ? T.off[0] / pivot : 0.0;
  x[0] /= pivot;
  for (std::size_t i = 1; i < n; ++i) {
    pivot = T.diag[i] - T.off[i - 1] * c[i - 1];
    if (!(pivot > 0.0)) throw SingularityError("non-positive pivot at row " + std::to_string(i));
    if (i + 1 < n) c[i] = T.off[i] / pivot;
    x[i] = (x[i] - T.off[i - 1] * x[i - 1]) / pivot;
  }
  for (std::size_t i = n - 1; i-- > 0;) x[i] -= c[i] * x[i + 1];
  return x;
}

std::size_t sturm_count(const TridiagonalOperator& T, double mu) {
  return count_below(T, mu, pivmin_for(T));
}

double bisect_eigenvalue(const TridiagonalOperator& T, std::size_t index, double tol) {
  if (index == 0 || index > T.size())
    throw DimensionError("eigenvalue index " + std::to_string(index) + " outside 1.." +
                         std::to_string(T.size()));
  const auto [lo, hi] = widened_enclosure(T);
  return bisect(T, index, lo, hi, tol, pivmin_for(T));
}

std::vector<double> eigenvector(const TridiagonalOperator& T, double lambda,
                                std::span<const std::vector<double>> deflate, std::uint64_t seed) {
  const std::size_t n = T.size();
  const double h = T.grid.h;
  const ShiftedLU lu(T, lambda);
  const double target = 1e-10 * T.diag_norm_inf() * std::sqrt(h);

  Xoshiro256 rng(seed);
  std::vector<double> x(n);
  for (auto& v : x) v = 2.0 * rng.uniform() - 1.0;
  orthogonalize(x, deflate);
  double nrm = norm2(x);
  for (auto& v : x) v /= nrm;

  bool converged = false;
  for (int it = 0; it < 50 && !converged; ++it) {
    lu.solve(x);
    orthogonalize(x, deflate);
    nrm = norm2(x);
    if (!(nrm > 0.0) || !std::isfinite(nrm)) throw ConvergenceError("inverse iteration broke down");
    for (auto& v : x) v /= nrm;
    converged = residual_norm(T, x, lambda) <= target;
  }
  if (!converged)
    throw ConvergenceError("inverse iteration did not converge at lambda = " + std::to_string(lambda));

  // mesh normalisation and sign convention
  const double scale = 1.0 / std::sqrt(h);
  const auto big = std::max_element(x.begin(), x.end(),
                                    [](double a, double b) { return std::abs(a) < std::abs(b); });
  const double sign = *big < 0.0 ? -1.0 : 1.0;
  for (auto& v : x) v *= sign * scale;
  return x;
}

Spectrum lowest_eigenvalues(const TridiagonalOperator& T, std::size_t n, double tol, bool with_vectors) {
  if (n == 0 || n > T.size())
    throw DimensionError("requested " + std::to_string(n) + " eigenvalues of a " +
                         std::to_string(T.size()) + "x" + std::to_string(T.size()) + " operator");
  Spectrum out;
  out.n_requested = n;
  out.eigenvalues.resize(n);
  const auto [lo, hi] = widened_enclosure(T);
  const double pivmin = pivmin_for(T);

  const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic)
  for (long long j = 0; j < count; ++j)
    out.eigenvalues[static_cast<std::size_t>(j)] =
        bisect(T, static_cast<std::size_t>(j) + 1, lo, hi, tol, pivmin);

  if (!with_vectors) return out;

  // Clusters of close eigenvalues (gap below 1e-3‖T‖, as in LAPACK dstein)
  // are handled serially with deflation; distinct clusters run concurrently.
  const double gap = 1e-3 * T.norm_inf();
  std::vector<std::size_t> starts{0};
  for (std::size_t j = 1; j < n; ++j)
    if (out.eigenvalues[j] - out.eigenvalues[j - 1] >= gap) starts.push_back(j);
  starts.push_back(n);

  out.eigenvectors.resize(n);
  out.residuals.resize(n);
  const auto clusters = static_cast<long long>(starts.size() - 1);
  const double unit = std::sqrt(T.grid.h);
  std::vector<std::string> errors(starts.size());
#pragma omp parallel for schedule(dynamic)
  for (long long c = 0; c < clusters; ++c) {
    try {
      std::vector<std::vector<double>> basis;
      for (std::size_t j = starts[static_cast<std::size_t>(c)]; j < starts[static_cast<std::size_t>(c) + 1]; ++j) {
        auto v = eigenvector(T, out.eigenvalues[j], basis, j + 1);
        out.residuals[j] = residual_norm(T, v, out.eigenvalues[j]);
        auto q = v;
        for (auto& x : q) x *= unit;  // unit Euclidean norm
        basis.push_back(std::move(q));
        out.eigenvectors[j] = std::move(v);
      }
    } catch (const std::exception& e) {
      errors[static_cast<std::size_t>(c)] = e.what();
    }
  }
  for (const auto& e : errors)
    if (!e.empty()) throw ConvergenceError(e);
  return out;
}

}  // namespace llab
