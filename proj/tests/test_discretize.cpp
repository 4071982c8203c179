#include <cmath>
#include <numbers>

#include "doctest.h"
#include "llab/discretize.hpp"
#include "llab/errors.hpp"
#include "llab/linalg.hpp"

using namespace llab;

TEST_CASE("small grids have the expected entries") {
  const auto T1 = assemble(from_cells({0}, 1.0), 2);
  CHECK(T1.grid.N == 1);
  CHECK(T1.diag == std::vector<double>{8.0});
  CHECK(T1.off.empty());

  const auto T2 = assemble(from_cells({0}, 1.0), 4);
  CHECK(T2.diag == std::vector<double>{32, 32, 32});
  CHECK(T2.off == std::vector<double>{-16, -16});
  CHECK(T2.grid.h == 0.25);
  CHECK(T2.grid.x(0) == 0.25);
}

TEST_CASE("node on a cell boundary") {
  const double b = 3.0;
  const auto pot = from_cells({0, b}, 1.0);
  SUBCASE("right-cell rule") {
    const auto T = assemble(pot, 2, NodeRule::right_cell);
    CHECK(T.diag == std::vector<double>{8, 8 + b, 8 + b});
  }
  SUBCASE("interface average (default)") {
    const auto T = assemble(pot, 2);
    CHECK(T.diag == std::vector<double>{8, 8 + b / 2, 8 + b});
  }
}

TEST_CASE("grid errors") {
  CHECK_THROWS_AS(assemble(from_cells({0}, 1.0), 1), GridError);
  CHECK_THROWS_AS(assemble(from_cells({0, 0}, 1.0), 0), GridError);
}

TEST_CASE("free spectrum matches the discrete Laplacian closed form") {
  for (int L : {1, 3}) {
    const int M = 32;
    const auto T = assemble(from_cells(std::vector<double>(static_cast<std::size_t>(L), 0.0), 1.0), M);
    const std::size_t N = T.size();
    const auto ev = lowest_eigenvalues(T, N).eigenvalues;
    const double h = 1.0 / M;
    for (std::size_t j = 1; j <= N; ++j) {
      const double exact = 2.0 / (h * h) * (1.0 - std::cos(j * std::numbers::pi / (N + 1)));
      CHECK(ev[j - 1] == doctest::Approx(exact).epsilon(1e-10));
    }
  }
}

TEST_CASE("potential ordering carries over to the diagonal") {
  const auto lo = generate(Distribution::uniform(0.0, 1.0), 20, 1.0, 4);
  auto hi = lo;
  for (auto& c : hi.cells) c += 0.5;
  const auto Tl = assemble(lo, 8);
  const auto Th = assemble(hi, 8);
  for (std::size_t i = 0; i < Tl.size(); ++i) {
    CHECK(Th.diag[i] >= Tl.diag[i]);
    CHECK(Tl.diag[i] >= 2.0 * 64);
  }
  CHECK(Tl.off == Th.off);
}

TEST_CASE("gershgorin, norms and apply") {
  const auto T = TridiagonalOperator::from_entries({2, 3, 4}, {-1, -1});
  const auto [lo, hi] = T.gershgorin();
  CHECK(lo == 1.0);
  CHECK(hi == 5.0);
  CHECK(T.norm_inf() == 5.0);
  CHECK(T.diag_norm_inf() == 4.0);
  CHECK(T.apply({1, 1, 1}) == std::vector<double>{1, 1, 3});
  CHECK_THROWS_AS(TridiagonalOperator::from_entries({1, 2}, {}), DimensionError);
}
