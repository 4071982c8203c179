#include <cmath>
#include <sstream>

#include "doctest.h"
#include "llab/errors.hpp"
#include "llab/potential.hpp"
#include "llab/rng.hpp"

using namespace llab;

TEST_CASE("xoshiro256** matches the reference stream") {
  // first outputs for the state expanded from seed 0 by splitmix64, computed
  // independently from the published reference algorithm
  std::uint64_t sm = 0;
  std::uint64_t s[4];
  for (auto& w : s) w = splitmix64(sm);
  auto rotl = [](std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); };
  Xoshiro256 rng(0);
  for (int i = 0; i < 8; ++i) {
    const std::uint64_t expect = rotl(s[1] * 5, 7) * 9;
    const std::uint64_t t = s[1] << 17;
    s[2] ^= s[0];
    s[3] ^= s[1];
    s[1] ^= s[2];
    s[0] ^= s[3];
    s[2] ^= t;
    s[3] = rotl(s[3], 45);
    CHECK(rng() == expect);
  }
  // splitmix64 of state 0 is a published constant
  std::uint64_t z = 0;
  CHECK(splitmix64(z) == 0xe220a8397b1dcdafULL);
}

TEST_CASE("uniform draws lie in [0, 1)") {
  Xoshiro256 rng(42);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("generate: degenerate bernoulli probabilities") {
  const auto zeros = generate(Distribution::bernoulli(1.0, 10.0), 5, 1.0, 123);
  CHECK(zeros.cells == std::vector<double>(5, 0.0));
  const auto walls = generate(Distribution::bernoulli(0.0, 10.0), 3, 1.0, 9);
  CHECK(walls.cells == std::vector<double>(3, 10.0));
}

TEST_CASE("generate is deterministic and seed-sensitive") {
  const auto d = Distribution::bernoulli(0.5, 40.0);
  const auto a = generate(d, 500, 1.0, 7);
  const auto b = generate(d, 500, 1.0, 7);
  const auto c = generate(d, 500, 1.0, 8);
  CHECK(a.cells == b.cells);
  CHECK(a.cells != c.cells);
  CHECK(a.seed == 7);
  CHECK(a.length() == 500);
}

TEST_CASE("generate rejects invalid parameters") {
  CHECK_THROWS_AS(Distribution::bernoulli(1.5, 1.0), ParameterError);
  CHECK_THROWS_AS(Distribution::bernoulli(0.5, -1.0), ParameterError);
  CHECK_THROWS_AS(Distribution::two_point(-0.1, 1.0, 2.0), ParameterError);
  CHECK_THROWS_AS(Distribution::uniform(2.0, 1.0), ParameterError);
  CHECK_THROWS_AS(Distribution::uniform(-1.0, 1.0), ParameterError);
  CHECK_THROWS_AS(generate(Distribution::bernoulli(0.5, 1.0), 0, 1.0, 1), ParameterError);
  CHECK_THROWS_AS(generate(Distribution::bernoulli(0.5, 1.0), 10, -1.0, 1), ParameterError);
}

TEST_CASE("two-point and uniform samples stay in their support") {
  const auto tp = generate(Distribution::two_point(0.3, 2.0, 5.0), 2000, 1.0, 3);
  for (double c : tp.cells) CHECK((c == 2.0 || c == 5.0));
  const auto un = generate(Distribution::uniform(1.0, 3.0), 2000, 1.0, 3);
  for (double c : un.cells) {
    CHECK(c >= 1.0);
    CHECK(c < 3.0);
  }
  CHECK(Distribution::two_point(0.3, 2.0, 5.0).mean() == doctest::Approx(0.3 * 2.0 + 0.7 * 5.0));
  CHECK(Distribution::uniform(1.0, 3.0).mean() == 2.0);
  CHECK(Distribution::bernoulli(0.25, 8.0).mean() == 6.0);
}

TEST_CASE("empirical zero frequency is within 5 sigma of p") {
  for (double p : {0.1, 0.5, 0.7, 0.98}) {
    const int n = 100000;
    const auto pot = generate(Distribution::bernoulli(p, 1.0), n, 1.0, 2024);
    int zeros = 0;
    for (double c : pot.cells) zeros += c == 0.0;
    const double sigma = std::sqrt(n * p * (1 - p));
    CHECK(std::abs(zeros - n * p) <= 5.0 * sigma);
  }
}

TEST_CASE("distribution strings round-trip") {
  for (const auto& d : {Distribution::bernoulli(0.5, 40.0), Distribution::two_point(0.1, 0.3, 7.0),
                        Distribution::uniform(0.0, 1.0 / 3.0)}) {
    CHECK(Distribution::parse(d.to_string()) == d);
  }
  CHECK(Distribution::bernoulli(0.5, 40.0).to_string() == "bernoulli:0.5:40");
  CHECK_THROWS_AS(Distribution::parse("gauss:0:1"), ParameterError);
  CHECK_THROWS_AS(Distribution::parse("bernoulli:0.5"), ParameterError);
  CHECK_THROWS_AS(Distribution::parse("bernoulli:0.5:x"), ParameterError);
}

TEST_CASE("decompose_wells reads off maximal zero runs") {
  SUBCASE("mixed") {
    const auto w = decompose_wells(from_cells({0, 0, 1, 0, 1}, 1.0));
    REQUIRE(w.wells.size() == 2);
    CHECK(w.wells[0] == Interval{0, 2});
    CHECK(w.wells[1] == Interval{3, 4});
    CHECK(w.walls == std::vector<Interval>{{2, 3}, {4, 5}});
    CHECK(w.L_max == 2);
    CHECK(w.lengths == std::vector<int>{2, 1});
  }
  SUBCASE("all zero") {
    const auto w = decompose_wells(from_cells(std::vector<double>(7, 0.0), 1.0));
    REQUIRE(w.wells.size() == 1);
    CHECK(w.wells[0] == Interval{0, 7});
    CHECK(w.L_max == 7);
  }
  SUBCASE("no well") {
    const auto w = decompose_wells(from_cells({1, 1, 1}, 1.0));
    CHECK(w.wells.empty());
    CHECK(w.L_max == 0);
  }
  SUBCASE("k = 0 turns every cell into a well") {
    const auto w = decompose_wells(from_cells({1, 2, 3}, 0.0));
    CHECK(w.L_max == 3);
  }
}

TEST_CASE("wells and walls partition the domain") {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const auto pot = generate(Distribution::bernoulli(0.6, 3.0), 300, 1.0, seed);
    const auto w = decompose_wells(pot);
    int total = 0;
    int cursor = 0;
    std::vector<Interval> all = w.wells;
    all.insert(all.end(), w.walls.begin(), w.walls.end());
    std::sort(all.begin(), all.end(), [](auto a, auto b) { return a.left < b.left; });
    for (const auto& iv : all) {
      CHECK(iv.left == cursor);
      cursor = iv.right;
      total += iv.length();
    }
    CHECK(total == 300);
    for (std::size_t i = 1; i < w.wells.size(); ++i) CHECK(w.wells[i].left > w.wells[i - 1].right);
    CHECK(epsilon_well_length(pot, 0.0) == w.L_max);
  }
}

TEST_CASE("epsilon well length") {
  const auto pot = from_cells({0, 0.1, 0, 5}, 1.0);
  CHECK(epsilon_well_length(pot, 0.1) == 3);
  CHECK(epsilon_well_length(pot, 0.0) == 1);
  CHECK(epsilon_well_length(pot, 5.0) == 4);
  const auto rnd = generate(Distribution::uniform(0.0, 1.0), 400, 1.0, 5);
  int prev = 0;
  for (double eps = 0.0; eps <= 1.0; eps += 0.05) {
    const int t = epsilon_well_length(rnd, eps);
    CHECK(t >= prev);
    prev = t;
  }
  CHECK(epsilon_well_length(rnd, 1.0) == 400);
}

TEST_CASE("potential evaluation is cell-constant and right-open") {
  const auto pot = from_cells({1, 2, 3}, 2.0);
  CHECK(pot.at(0.0) == 2.0);
  CHECK(pot.at(0.999) == 2.0);
  CHECK(pot.at(1.0) == 4.0);
  CHECK(pot.at(3.0) == 6.0);
  CHECK(pot.with_coupling(0.5).at(2.5) == 1.5);
}

TEST_CASE("potential files round-trip exactly") {
  const auto pot = generate(Distribution::uniform(0.0, 1.0), 50, 0.1, 99);
  std::stringstream ss;
  write_potential(ss, pot);
  const auto back = read_potential(ss);
  CHECK(back.cells == pot.cells);
  CHECK(back.k == pot.k);
  CHECK(back.seed == pot.seed);
  CHECK(back.dist == pot.dist);

  std::stringstream bad("3,1,0,bernoulli:0.5:1\n0,1\n");
  CHECK_THROWS_AS(read_potential(bad), ParameterError);
}
