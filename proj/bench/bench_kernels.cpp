// Times the OpenMP kernels against their serial references.
//   bench_kernels [L] [M] [n_eigs]

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "llab/discretize.hpp"
#include "llab/experiments.hpp"
#include "llab/linalg.hpp"
#include "llab/potential.hpp"

using namespace llab;

namespace {

template <class F>
double seconds(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  const int L = argc > 1 ? std::atoi(argv[1]) : 2000;
  const int M = argc > 2 ? std::atoi(argv[2]) : 32;
  const auto n = static_cast<std::size_t>(argc > 3 ? std::atoi(argv[3]) : 50);

  const auto pot = generate(Distribution::bernoulli(0.5, 10.0), L, 1.0, 1);
  const auto T = assemble(pot, M);
  std::printf("L=%d M=%d N=%zu n=%zu threads=%d\n", L, M, T.size(), n, omp_get_max_threads());

  std::vector<double> par, ser;
  const double tp = seconds([&] { par = lowest_eigenvalues(T, n).eigenvalues; });
  const double ts = seconds([&] { ser = reference::lowest_eigenvalues(T, n); });
  double diff = 0.0;
  for (std::size_t i = 0; i < n; ++i) diff = std::max(diff, std::abs(par[i] / ser[i] - 1.0));
  std::printf("eigenvalues  parallel %.3fs  serial %.3fs  speedup %.2f  max rel diff %.2e\n", tp, ts, ts / tp, diff);

  ExperimentConfig cfg;
  cfg.dist = Distribution::bernoulli(0.5, 10.0);
  cfg.L = {L / 4};
  cfg.M = M;
  for (int s = 1; s <= 8; ++s) cfg.seeds.push_back(s);
  const int threads = omp_get_max_threads();
  const double te = seconds([&] { run_experiment(cfg); });
  omp_set_num_threads(1);
  const double te1 = seconds([&] { run_experiment(cfg); });
  omp_set_num_threads(threads);
  std::printf("ensemble(8)  %d threads %.3fs  1 thread %.3fs  speedup %.2f\n", threads, te, te1, te1 / te);
  return 0;
}
