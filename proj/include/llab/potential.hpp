#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace llab {

/// Single-cell distribution of the heights ω_j. All heights are >= 0.
///
///   bernoulli(p, vmax):   0 with probability p, vmax otherwise
///   two-point(p, a, b):   a with probability p, b otherwise
///   uniform(lo, hi):      uniform on [lo, hi)
struct Distribution {
  enum class Kind { bernoulli, two_point, uniform };

  Kind kind = Kind::bernoulli;
  double p = 1.0;
  double a = 0.0;  // bernoulli: 0; uniform: lo
  double b = 0.0;  // bernoulli: vmax; uniform: hi

  static Distribution bernoulli(double p, double vmax);
  static Distribution two_point(double p, double a, double b);
  static Distribution uniform(double lo, double hi);

  /// Throws ParameterError on negative heights or p outside [0, 1].
  void validate() const;

  double mean() const;
  double max_height() const;

  /// "bernoulli:p:vmax", "two-point:p:a:b", "uniform:lo:hi"
  std::string to_string() const;
  static Distribution parse(std::string_view text);

  bool operator==(const Distribution&) const = default;
};

/// A concrete potential k·ω_⌊x⌋ on [0, L). The coupling is kept apart from
/// the cell heights so one realization can be reused across a sweep in k.
struct RealizedPotential {
  std::vector<double> cells;
  double k = 1.0;
  std::uint64_t seed = 0;
  Distribution dist;

  int length() const { return static_cast<int>(cells.size()); }
  /// k·ω at x in [0, L); cells are right-open, x = L maps to the last cell.
  double at(double x) const;
  double coupled(int cell) const { return k * cells[static_cast<std::size_t>(cell)]; }
  RealizedPotential with_coupling(double new_k) const;
};

RealizedPotential generate(const Distribution& dist, int L, double k, std::uint64_t seed);

/// Builds a potential from explicit cell heights (tests, files, hand-made wells).
RealizedPotential from_cells(std::vector<double> cells, double k, std::uint64_t seed = 0,
                             Distribution dist = Distribution::bernoulli(1.0, 0.0));

/// Half-open cell range [left, right).
struct Interval {
  int left = 0;
  int right = 0;
  int length() const { return right - left; }
  bool operator==(const Interval&) const = default;
};

struct WellDecomposition {
  std::vector<Interval> wells;  // maximal runs where k·ω == 0, in position order
  std::vector<Interval> walls;  // complementary runs
  int L_max = 0;
  std::vector<int> lengths;  // well lengths, sorted descending
  int domain_length = 0;
};

WellDecomposition decompose_wells(const RealizedPotential& pot);

/// Longest run of cells with ω_j <= eps (heights compared before coupling).
int epsilon_well_length(const RealizedPotential& pot, double eps);

/// Text format: line 1 "L,k,seed,dist", line 2 the L comma-separated heights.
/// Numbers use shortest round-trip decimal form.
void write_potential(std::ostream& os, const RealizedPotential& pot);
RealizedPotential read_potential(std::istream& is);

}  // namespace llab
