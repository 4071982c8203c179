#include "llab/continuum.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "llab/errors.hpp"

namespace llab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kPi2 = kPi * kPi;

// Advance (psi, dpsi) across one unit cell with q = kω, counting zeros in (0, 1].
void propagate_cell(CellState& s, double q, double lambda) {
  const double psi0 = s.psi;
  const double dpsi0 = s.dpsi;
  double psi1 = 0.0;
  double dpsi1 = 0.0;

  if (lambda > q) {
    // amplitude-phase form keeps the zero count consistent with the new state
    const double mu = std::sqrt(lambda - q);
    const double phi = std::atan2(psi0, dpsi0 / mu);
    const double amp = std::hypot(psi0, dpsi0 / mu);
    const double end = phi + mu;
    s.zeros += static_cast<std::size_t>(std::floor(end / kPi) - std::floor(phi / kPi));
    psi1 = amp * std::sin(end);
    dpsi1 = amp * mu * std::cos(end);
  } else {
    if (lambda < q) {
      const double kappa = std::sqrt(q - lambda);
      double c = 0.0;
      double sh = 0.0;
      if (kappa <= 20.0) {
        c = std::cosh(kappa);
        sh = std::sinh(kappa);
      } else {
        // factor e^κ into the log scale
        const double em = std::exp(-2.0 * kappa);
        c = 0.5 * (1.0 + em);
        sh = 0.5 * (1.0 - em);
        s.log_scale += kappa;
      }
      psi1 = c * psi0 + sh * dpsi0 / kappa;
      dpsi1 = kappa * sh * psi0 + c * dpsi0;
    } else {
      psi1 = psi0 + dpsi0;
      dpsi1 = dpsi0;
    }
    // at most one zero: sign change, or landing exactly on zero
    if (psi0 != 0.0 && (psi1 == 0.0 || (psi1 > 0.0) != (psi0 > 0.0))) ++s.zeros;
  }

  const double nrm = std::hypot(psi1, dpsi1);
  s.psi = psi1 / nrm;
  s.dpsi = dpsi1 / nrm;
  s.log_scale += std::log(nrm);
}

// sinh(κt)/κ, continuous at κ = 0
double sinhc(double kappa, double t) { return kappa == 0.0 ? t : std::sinh(kappa * t) / kappa; }

// particular solution (1 - cosh κt)/κ², written without cancellation
double small_particular(double kappa, double t) {
  if (kappa == 0.0) return -0.5 * t * t;
  const double sh = std::sinh(0.5 * kappa * t);
  return -2.0 * sh * sh / (kappa * kappa);
}

}  // namespace

CellState shoot(const RealizedPotential& pot, double lambda) {
  CellState s;
  for (int j = 0; j < pot.length(); ++j) propagate_cell(s, pot.coupled(j), lambda);
  return s;
}

std::size_t oscillation_count(const RealizedPotential& pot, double lambda) {
  return shoot(pot, lambda).zeros;
}

std::vector<double> continuum_eigenvalues(const RealizedPotential& pot, std::size_t n, double rel_tol) {
  if (n == 0) throw DimensionError("continuum_eigenvalues: n must be >= 1");
  const auto [mn, mx] = std::minmax_element(pot.cells.begin(), pot.cells.end());
  const double L = pot.length();
  const double lo0 = pot.k * *mn;
  const double free_n = static_cast<double>(n) * static_cast<double>(n) * kPi2 / (L * L);
  const double hi0 = (pot.k * *mx + free_n) * (1.0 + 1e-9) + 1e-300;
  if (oscillation_count(pot, hi0) < n)
    throw WindowError("continuum_eigenvalues: fewer than " + std::to_string(n) +
                      " roots below " + std::to_string(hi0));

  std::vector<double> out(n);
  const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic)
  for (long long j = 0; j < count; ++j) {
    const auto want = static_cast<std::size_t>(j) + 1;
    double lo = lo0;
    double hi = hi0;
    while (hi - lo > rel_tol * hi) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      if (oscillation_count(pot, mid) >= want)
        hi = mid;
      else
        lo = mid;
    }
    out[static_cast<std::size_t>(j)] = 0.5 * (lo + hi);
  }
  return out;
}

// ---------------------------------------------------------------------------

ContinuumLandscape::ContinuumLandscape(const RealizedPotential& pot) {
  const int L = pot.length();
  cells_.resize(static_cast<std::size_t>(L));
  for (int j = 0; j < L; ++j) {
    auto& c = cells_[static_cast<std::size_t>(j)];
    c.q = pot.coupled(j);
    c.kappa = std::sqrt(c.q);
    c.exp_basis = c.kappa > 1.0;
  }

  // basis values f1, f2, particular p and their slopes at t = 0 and t = 1
  struct Trace {
    double f1, f2, p, df1, df2, dp;
  };
  auto trace = [](const Cell& c, double t) {
    Trace r{};
    if (c.exp_basis) {
      const double e1 = std::exp(-c.kappa * t);
      const double e2 = std::exp(-c.kappa * (1.0 - t));
      r = {e1, e2, 1.0 / c.q, -c.kappa * e1, c.kappa * e2, 0.0};
    } else {
      const double ch = std::cosh(c.kappa * t);
      const double shc = sinhc(c.kappa, t);
      r = {ch, shc, small_particular(c.kappa, t), c.kappa * c.kappa * shc, ch, -shc};
    }
    return r;
  };

  const lapack_int n = 2 * L;
  const lapack_int kl = 2;
  const lapack_int ku = 2;
  const lapack_int ldab = 2 * kl + ku + 1;
  std::vector<double> ab(static_cast<std::size_t>(ldab) * static_cast<std::size_t>(n), 0.0);
  std::vector<double> rhs(static_cast<std::size_t>(n), 0.0);
  auto at = [&](lapack_int i, lapack_int j) -> double& {
    return ab[static_cast<std::size_t>(kl + ku + i - j) + static_cast<std::size_t>(j) * ldab];
  };

  {
    const auto t0 = trace(cells_.front(), 0.0);
    at(0, 0) = t0.f1;
    at(0, 1) = t0.f2;
    rhs[0] = -t0.p;
  }
  for (int j = 0; j + 1 < L; ++j) {
    const auto& a = cells_[static_cast<std::size_t>(j)];
    const auto& b = cells_[static_cast<std::size_t>(j) + 1];
    const auto ta = trace(a, 1.0);
    const auto tb = trace(b, 0.0);
    const lapack_int rv = 2 * j + 1;
    const lapack_int rd = 2 * j + 2;
    const lapack_int ca = 2 * j;
    const lapack_int cb = 2 * j + 2;
    at(rv, ca) = ta.f1;
    at(rv, ca + 1) = ta.f2;
    at(rv, cb) = -tb.f1;
    at(rv, cb + 1) = -tb.f2;
    rhs[static_cast<std::size_t>(rv)] = tb.p - ta.p;
    const double scale = 1.0 / std::max({1.0, a.kappa, b.kappa});
    at(rd, ca) = scale * ta.df1;
    at(rd, ca + 1) = scale * ta.df2;
    at(rd, cb) = -scale * tb.df1;
    at(rd, cb + 1) = -scale * tb.df2;
    rhs[static_cast<std::size_t>(rd)] = scale * (tb.dp - ta.dp);
  }
  {
    const auto t1 = trace(cells_.back(), 1.0);
    at(n - 1, n - 2) = t1.f1;
    at(n - 1, n - 1) = t1.f2;
    rhs[static_cast<std::size_t>(n) - 1] = -t1.p;
  }

  double anorm = 0.0;
  for (lapack_int j = 0; j < n; ++j) {
    double col = 0.0;
    for (lapack_int i = std::max<lapack_int>(0, j - ku); i <= std::min<lapack_int>(n - 1, j + kl); ++i)
      col += std::abs(at(i, j));
    anorm = std::max(anorm, col);
  }

  std::vector<lapack_int> ipiv(static_cast<std::size_t>(n));
  lapack_int info = LAPACKE_dgbtrf(LAPACK_COL_MAJOR, n, n, kl, ku, ab.data(), ldab, ipiv.data());
  if (info != 0) throw SingularityError("continuum landscape: singular matching system");
  info = LAPACKE_dgbcon(LAPACK_COL_MAJOR, '1', n, kl, ku, ab.data(), ldab, ipiv.data(), anorm, &rcond_);
  if (info != 0) rcond_ = 0.0;
  info = LAPACKE_dgbtrs(LAPACK_COL_MAJOR, 'N', n, kl, ku, 1, ab.data(), ldab, ipiv.data(), rhs.data(), n);
  if (info != 0) throw SingularityError("continuum landscape: back substitution failed");

  for (int j = 0; j < L; ++j) {
    cells_[static_cast<std::size_t>(j)].A = rhs[2 * static_cast<std::size_t>(j)];
    cells_[static_cast<std::size_t>(j)].B = rhs[2 * static_cast<std::size_t>(j) + 1];
  }

  // per-cell maximum in closed form
  max_ = 0.0;
  argmax_ = 0.0;
  for (int j = 0; j < L; ++j) {
    const auto& c = cells_[static_cast<std::size_t>(j)];
    double cand[3] = {0.0, 1.0, -1.0};
    if (c.exp_basis) {
      if (c.A * c.B > 0.0) cand[2] = (std::log(c.A / c.B) + c.kappa) / (2.0 * c.kappa);
    } else if (c.kappa == 0.0) {
      cand[2] = c.B;
    } else {
      const double den = c.A * c.q - 1.0;
      if (den != 0.0) {
        const double arg = -c.B * c.kappa / den;
        if (std::abs(arg) < 1.0) cand[2] = std::atanh(arg) / c.kappa;
      }
    }
    for (double t : cand) {
      if (!(t >= 0.0 && t <= 1.0)) continue;
      const double v = value_at(c, t);
      if (v > max_) {
        max_ = v;
        argmax_ = j + t;
      }
    }
  }
}

double ContinuumLandscape::value_at(const Cell& c, double t) const {
  if (c.exp_basis)
    return 1.0 / c.q + c.A * std::exp(-c.kappa * t) + c.B * std::exp(-c.kappa * (1.0 - t));
  return small_particular(c.kappa, t) + c.A * std::cosh(c.kappa * t) + c.B * sinhc(c.kappa, t);
}

double ContinuumLandscape::slope_at(const Cell& c, double t) const {
  if (c.exp_basis)
    return -c.kappa * c.A * std::exp(-c.kappa * t) + c.kappa * c.B * std::exp(-c.kappa * (1.0 - t));
  const double shc = sinhc(c.kappa, t);
  return (c.A * c.q - 1.0) * shc + c.B * std::cosh(c.kappa * t);
}

double ContinuumLandscape::operator()(double x) const {
  const int L = static_cast<int>(cells_.size());
  if (x <= 0.0 || x >= L) return 0.0;
  const int j = std::min(static_cast<int>(std::floor(x)), L - 1);
  return value_at(cells_[static_cast<std::size_t>(j)], x - j);
}

double ContinuumLandscape::derivative(double x) const {
  const int L = static_cast<int>(cells_.size());
  const int j = std::clamp(static_cast<int>(std::floor(x)), 0, L - 1);
  return slope_at(cells_[static_cast<std::size_t>(j)], x - j);
}

double continuum_landscape_max(const RealizedPotential& pot) { return ContinuumLandscape(pot).max(); }

// ---------------------------------------------------------------------------

BernoulliBounds bernoulli_bounds(double b, double ell_max, double nu, double gamma) {
  if (!(b > 0.0)) throw ParameterError("bernoulli_bounds: b must be > 0");
  if (!(ell_max >= 1.0)) throw ParameterError("bernoulli_bounds: ell_max must be >= 1");
  if (!(nu >= 0.0 && nu < 1.0)) throw ParameterError("bernoulli_bounds: need 0 <= nu < 1");
  if (!(gamma < 1.0)) throw ParameterError("bernoulli_bounds: need gamma < 1");

  BernoulliBounds out;
  const double ell2 = ell_max * ell_max;
  out.S = std::max(std::sqrt(b), 1.0);
  out.u_lower = ell2 / 8.0;
  out.u_upper = 3.0 * out.S * ell_max / b + ell2 / 8.0;
  out.lambda_upper = kPi2 / ell2;
  const double shrink = 1.0 - 1.0 / (std::pow(b, nu / 2.0) * std::pow(ell_max, (1.0 - gamma) / 2.0));
  out.lambda_lower = kPi2 / ell2 * shrink * shrink;
  out.energy_hypothesis = b * ell2 > kPi2;
  out.strength_hypothesis = std::pow(b, 1.0 - nu) * std::pow(ell_max, gamma) > 8.0 * kPi2 * (1.0 + std::sqrt(b));
  return out;
}

SupSolution::SupSolution(const WellDecomposition& wells, double b) {
  if (!(b > 0.0)) throw ParameterError("sup_solution_sigma: b must be > 0");
  S_ = std::max(std::sqrt(b), 1.0);
  base_ = (1.0 + S_ * wells.L_max) / b;
  for (const auto& w : wells.wells) {
    const double l = w.left;
    const double r = w.right;
    wells_.push_back({l, r, 0.5 * (l + r), r - l});
  }
  for (std::size_t i = 1; i < wells_.size(); ++i)
    if (wells_[i].l - wells_[i - 1].r < 2.0 / S_) overlapping_ = true;
}

template <class F>
double SupSolution::sum_near(double x, F&& term) const {
  // supports are [l - 1/S, r + 1/S]; wells are ordered and disjoint
  const double reach = 1.0 / S_;
  auto it = std::lower_bound(wells_.begin(), wells_.end(), x,
                             [reach](const Well& w, double v) { return w.r + reach < v; });
  double total = 0.0;
  for (; it != wells_.end() && it->l - reach <= x; ++it) total += term(*it);
  return total;
}

double SupSolution::operator()(double x) const {
  const double S = S_;
  return base_ + sum_near(x, [&](const Well& w) {
           if (x >= w.l && x <= w.r) return -0.5 * (x - w.c) * (x - w.c) + w.len * w.len / 8.0 + w.len / (4.0 * S);
           if (x > w.r && x < w.r + 1.0 / S) return 0.25 * S * w.len * (x - w.r - 1.0 / S) * (x - w.r - 1.0 / S);
           if (x < w.l && x > w.l - 1.0 / S) return 0.25 * S * w.len * (x - w.l + 1.0 / S) * (x - w.l + 1.0 / S);
           return 0.0;
         });
}

double SupSolution::derivative(double x, int side) const {
  const double S = S_;
  return sum_near(x, [&](const Well& w) {
    const bool in_well = side < 0 ? (x > w.l && x <= w.r) : (x >= w.l && x < w.r);
    if (in_well) return -(x - w.c);
    const bool right_collar = side < 0 ? (x > w.r && x <= w.r + 1.0 / S) : (x >= w.r && x < w.r + 1.0 / S);
    if (right_collar) return 0.5 * S * w.len * (x - w.r - 1.0 / S);
    const bool left_collar = side < 0 ? (x > w.l - 1.0 / S && x <= w.l) : (x >= w.l - 1.0 / S && x < w.l);
    if (left_collar) return 0.5 * S * w.len * (x - w.l + 1.0 / S);
    return 0.0;
  });
}

SupSolution sup_solution_sigma(const WellDecomposition& wells, double b) { return SupSolution(wells, b); }

// ---------------------------------------------------------------------------

double homogenized_u_max(double gamma_c) {
  if (!(gamma_c >= 0.0)) throw ParameterError("gamma_c must be >= 0");
  if (gamma_c < 1e-6) return 1.0 / 8.0 - 5.0 * gamma_c / 384.0 + 61.0 * gamma_c * gamma_c / 46080.0;
  // 1 - sech(2y) = 2 sinh²(y) / cosh(2y), free of cancellation
  const double y = 0.25 * std::sqrt(gamma_c);
  const double sh = std::sinh(y);
  return 2.0 * sh * sh / (std::cosh(2.0 * y) * gamma_c);
}

double homogenized_ratio(double gamma_c) { return (kPi2 + gamma_c) * homogenized_u_max(gamma_c); }

Homogenized homogenized(double gamma_c) {
  Homogenized h;
  h.lambda_c = kPi2 + gamma_c;
  h.u_c_max = homogenized_u_max(gamma_c);
  h.ratio = h.lambda_c * h.u_c_max;
  return h;
}

double homogenized_landscape(double gamma_c, double x) {
  if (gamma_c < 1e-12) return 0.5 * x * (1.0 - x);
  const double a = std::sqrt(gamma_c);
  return 2.0 * std::sinh(0.5 * a * x) * std::sinh(0.5 * a * (1.0 - x)) / (std::cosh(0.5 * a) * gamma_c);
}

double invert_homogenized_ratio(double r) {
  constexpr double lo_g = 1e-8;
  constexpr double hi_g = 1e4;
  static const bool monotone = [] {
    double prev = homogenized_ratio(lo_g);
    for (int i = 1; i <= 400; ++i) {
      const double g = lo_g * std::pow(hi_g / lo_g, i / 400.0);
      const double cur = homogenized_ratio(g);
      if (!(cur < prev)) return false;
      prev = cur;
    }
    return true;
  }();
  if (!monotone) throw SolverError("R(gamma_c) is not monotone on [1e-8, 1e4]");

  const double r_hi = homogenized_ratio(lo_g);
  const double r_lo = homogenized_ratio(hi_g);
  if (!(r > r_lo && r < r_hi))
    throw ParameterError("target ratio " + std::to_string(r) + " outside (" + std::to_string(r_lo) + ", " +
                         std::to_string(r_hi) + ")");
  double a = std::log(lo_g);
  double b = std::log(hi_g);
  for (int it = 0; it < 200 && b - a > 1e-15 * std::max(1.0, std::abs(b)); ++it) {
    const double m = 0.5 * (a + b);
    if (homogenized_ratio(std::exp(m)) > r)
      a = m;
    else
      b = m;
  }
  return std::exp(0.5 * (a + b));
}

double fluctuation_norm(const RealizedPotential& pot, double gamma_c) {
  const double mean = pot.dist.mean();
  if (gamma_c == 0.0 || mean == 0.0) return 0.0;
  const double L = pot.length();
  const double scale = gamma_c / (L * mean);
  double partial = 0.0;  // S_n - n·E(ω)
  double f_prev = 0.0;
  double sq = 0.0;
  for (double c : pot.cells) {
    partial += c - mean;
    const double f = scale * partial;
    sq += (f_prev * f_prev + f_prev * f + f * f) / (3.0 * L);
    f_prev = f;
  }
  return std::sqrt(sq);
}

}  // namespace llab
