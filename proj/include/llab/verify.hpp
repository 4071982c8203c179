#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "llab/potential.hpp"

namespace llab {

/// A {0, b} realization from the cross-validation corpus. Always has a zero well.
struct CorpusEntry {
  std::uint64_t seed = 0;
  double p = 0.0;
  double b = 0.0;
  RealizedPotential potential;
};

/// Deterministic corpus: p ∈ {0.5, 0.7, 0.9, 0.98}, b ∈ {1, 10, 100},
/// 20 <= L <= 200, drawn from seeds base_seed, base_seed + 1, ...
std::vector<CorpusEntry> bernoulli_corpus(std::size_t size, std::uint64_t base_seed = 1);

/// (ν, γ) pairs at which the two-sided eigenvalue estimate is checked.
inline const std::vector<std::pair<double, double>> kLambdaBoundExponents{
    {0.0, 0.5}, {0.25, 0.0}, {0.0, 0.9}, {0.1, 0.75}};

struct VerifyOptions {
  std::size_t corpus_size = 200;
  std::uint64_t base_seed = 1;
  int M = 64;
  double fd_tolerance = 5e-4;
  double min_order_gain = 3.0;  // error(2h) / error(h) over the corpus
  bool inject_fault = false;    // flips the lower bound on max u
};

struct CheckResult {
  std::string name;
  std::size_t checked = 0;
  std::size_t passed = 0;
  std::size_t skipped = 0;  // hypotheses not met
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  bool ok() const;
  /// One row per check, then the first failures by name and seed.
  std::string table() const;
};

VerifyReport run_verify(const VerifyOptions& opts = {});

}  // namespace llab
