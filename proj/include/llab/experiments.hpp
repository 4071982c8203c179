#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "llab/discretize.hpp"
#include "llab/landscape.hpp"
#include "llab/linalg.hpp"
#include "llab/potential.hpp"

namespace llab {

inline constexpr double kPiSquaredOver8 = 1.2337005501361698;  // π²/8

/// Relative band around π²/8 used to call a ratio "close". A harness choice.
inline constexpr double kRatioBand = 0.15;

enum class ExperimentKind { ensemble, sweep_vmax, sweep_L, sweep_k, excited, semiclassical, homogenized };

std::string to_string(ExperimentKind kind);
/// Throws ParameterError for an unknown name.
ExperimentKind parse_kind(std::string_view name);

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::ensemble;
  Distribution dist = Distribution::bernoulli(0.5, 10.0);
  std::vector<int> L{1000};
  std::vector<double> k{1.0};
  std::vector<double> vmax;  // sweep_vmax grid
  int M = 32;
  int n_eigs = 1;
  int s = 1;
  std::vector<std::int64_t> seeds;
  double tol = kDefaultBisectionTol;
  std::size_t max_nodes = 4'000'000;
  std::vector<double> gamma_c;       // homogenized: fixed γ_c values
  std::vector<double> target_ratio;  // homogenized: γ_c solved from R(γ_c) = r
  bool oracle = false;               // also compute continuum eigenvalues

  /// Throws ParameterError (or GridError for the node cap) when the
  /// configuration cannot run.
  void validate() const;
};

struct RatioRecord {
  std::int64_t seed = 0;
  int L = 0;
  double k = 0.0;
  double gamma_c = 0.0;  // k·L²·E ω
  int L_max = 0;
  int n = 0;
  int s = 1;
  double lambda_n = 0.0;
  double W_n = 0.0;
  double ratio = 0.0;  // lambda_n / W_n
  double oracle_lambda = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> extra;  // see extra_columns(kind)
};

/// Kind-specific CSV columns appended after the common ones.
std::vector<std::string> extra_columns(ExperimentKind kind);

struct Failure {
  std::int64_t seed = 0;
  std::string where;
  std::string message;
};

struct Shortfall {
  std::int64_t seed = 0;
  int L = 0;
  int s = 1;
  std::size_t missing = 0;  // eigenvalues with no W^(s) partner
};

struct SummaryRow {
  int s = 1;
  std::size_t count = 0;
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
  double median = 0.0;
  double within_band = 0.0;  // fraction with |ratio/(π²/8) - 1| <= kRatioBand
};

struct ExperimentRun {
  ExperimentConfig config;
  std::vector<RatioRecord> records;  // ordered by seed, sweep coordinate, s, n
  std::vector<Failure> failures;
  std::vector<Shortfall> shortfalls;
  std::vector<std::size_t> vogt_violations;  // indices into records
  std::vector<SummaryRow> summary;
};

/// Everything derived from one realization on one grid.
struct Analysis {
  RealizedPotential potential;
  int M = 0;
  Spectrum spectrum;
  LandscapeResult landscape;
  MinimaSet minima;  // W^(1)
  WellDecomposition wells;
};

Analysis analyze(const RealizedPotential& pot, int M, std::size_t n_eigs, double tol = kDefaultBisectionTol);

/// Rank-paired records for s = 1..s_max. Unmatched eigenvalues are reported
/// through `shortfalls` when given.
std::vector<RatioRecord> ratio_records(const Analysis& a, std::int64_t seed, int s_max,
                                       std::vector<Shortfall>* shortfalls = nullptr);

/// Runs the configured experiment. Work units run concurrently; the result
/// does not depend on the thread count.
ExperimentRun run_experiment(const ExperimentConfig& cfg);

std::vector<SummaryRow> summarize(const std::vector<RatioRecord>& records);

/// Ground-state records (n = 1, s = 1) must satisfy 1 < ratio < 1.7305.
bool vogt_ok(const RatioRecord& r);

std::string records_csv(ExperimentKind kind, const std::vector<RatioRecord>& records);

}  // namespace llab
