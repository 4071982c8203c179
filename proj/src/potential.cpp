#include "llab/potential.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include "llab/errors.hpp"
#include "llab/io.hpp"
#include "llab/rng.hpp"

namespace llab {

Distribution Distribution::bernoulli(double p, double vmax) {
  Distribution d{Kind::bernoulli, p, 0.0, vmax};
  d.validate();
  return d;
}

Distribution Distribution::two_point(double p, double a, double b) {
  Distribution d{Kind::two_point, p, a, b};
  d.validate();
  return d;
}

Distribution Distribution::uniform(double lo, double hi) {
  Distribution d{Kind::uniform, 0.0, lo, hi};
  d.validate();
  return d;
}

void Distribution::validate() const {
  auto finite_nonneg = [](double v) { return std::isfinite(v) && v >= 0.0; };
  switch (kind) {
    case Kind::bernoulli:
    case Kind::two_point:
      if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("probability must lie in [0, 1]");
      if (!finite_nonneg(a) || !finite_nonneg(b))
        throw ParameterError("potential heights must be finite and >= 0");
      break;
    case Kind::uniform:
      if (!finite_nonneg(a) || !finite_nonneg(b))
        throw ParameterError("potential heights must be finite and >= 0");
      if (b < a) throw ParameterError("uniform distribution needs lo <= hi");
      break;
  }
}

double Distribution::mean() const {
  switch (kind) {
    case Kind::bernoulli:
    case Kind::two_point:
      return p * a + (1.0 - p) * b;
    case Kind::uniform:
      return 0.5 * (a + b);
  }
  return 0.0;
}

double Distribution::max_height() const {
  switch (kind) {
    case Kind::bernoulli:
      return p < 1.0 ? b : 0.0;
    case Kind::two_point:
      if (p <= 0.0) return b;
      if (p >= 1.0) return a;
      return std::max(a, b);
    case Kind::uniform:
      return b;
  }
  return 0.0;
}

std::string Distribution::to_string() const {
  switch (kind) {
    case Kind::bernoulli:
      return "bernoulli:" + format_shortest(p) + ":" + format_shortest(b);
    case Kind::two_point:
      return "two-point:" + format_shortest(p) + ":" + format_shortest(a) + ":" +
             format_shortest(b);
    case Kind::uniform:
      return "uniform:" + format_shortest(a) + ":" + format_shortest(b);
  }
  return {};
}

Distribution Distribution::parse(std::string_view text) {
  const auto parts = split(trim(text), ':');
  const auto name = parts.front();
  auto need = [&](std::size_t n) {
    if (parts.size() != n + 1)
      throw ParameterError("distribution '" + std::string(name) + "' takes " + std::to_string(n) +
                           " parameters: '" + std::string(text) + "'");
  };
  if (name == "bernoulli") {
    need(2);
    return bernoulli(parse_double(parts[1]), parse_double(parts[2]));
  }
  if (name == "two-point") {
    need(3);
    return two_point(parse_double(parts[1]), parse_double(parts[2]), parse_double(parts[3]));
  }
  if (name == "uniform") {
    need(2);
    return uniform(parse_double(parts[1]), parse_double(parts[2]));
  }
  throw ParameterError("unknown distribution '" + std::string(name) + "'");
}

double RealizedPotential::at(double x) const {
  const int L = length();
  int j = static_cast<int>(std::floor(x));
  j = std::clamp(j, 0, L - 1);
  return coupled(j);
}

RealizedPotential RealizedPotential::with_coupling(double new_k) const {
  RealizedPotential out = *this;
  out.k = new_k;
  return out;
}

RealizedPotential generate(const Distribution& dist, int L, double k, std::uint64_t seed) {
  dist.validate();
  if (L < 1) throw ParameterError("L must be >= 1");
  if (!(k >= 0.0) || !std::isfinite(k)) throw ParameterError("coupling k must be finite and >= 0");

  RealizedPotential pot;
  pot.k = k;
  pot.seed = seed;
  pot.dist = dist;
  pot.cells.resize(static_cast<std::size_t>(L));

  Xoshiro256 rng(seed);
  for (auto& c : pot.cells) {
    const double r = rng.uniform();
    switch (dist.kind) {
      case Distribution::Kind::bernoulli:
        c = r < dist.p ? 0.0 : dist.b;
        break;
      case Distribution::Kind::two_point:
        c = r < dist.p ? dist.a : dist.b;
        break;
      case Distribution::Kind::uniform:
        c = dist.a + (dist.b - dist.a) * r;
        break;
    }
  }
  return pot;
}

RealizedPotential from_cells(std::vector<double> cells, double k, std::uint64_t seed,
                             Distribution dist) {
  if (cells.empty()) throw ParameterError("potential needs at least one cell");
  for (double c : cells)
    if (!(c >= 0.0) || !std::isfinite(c)) throw ParameterError("cell heights must be finite and >= 0");
  if (!(k >= 0.0) || !std::isfinite(k)) throw ParameterError("coupling k must be finite and >= 0");
  RealizedPotential pot;
  pot.cells = std::move(cells);
  pot.k = k;
  pot.seed = seed;
  pot.dist = dist;
  return pot;
}

WellDecomposition decompose_wells(const RealizedPotential& pot) {
  WellDecomposition out;
  const int L = pot.length();
  out.domain_length = L;
  int start = 0;
  while (start < L) {
    const bool zero = pot.coupled(start) == 0.0;
    int end = start + 1;
    while (end < L && (pot.coupled(end) == 0.0) == zero) ++end;
    (zero ? out.wells : out.walls).push_back({start, end});
    start = end;
  }
  for (const auto& w : out.wells) out.lengths.push_back(w.length());
  std::sort(out.lengths.begin(), out.lengths.end(), std::greater<>());
  out.L_max = out.lengths.empty() ? 0 : out.lengths.front();
  return out;
}

int epsilon_well_length(const RealizedPotential& pot, double eps) {
  int best = 0;
  int run = 0;
  for (double c : pot.cells) {
    run = c <= eps ? run + 1 : 0;
    best = std::max(best, run);
  }
  return best;
}

void write_potential(std::ostream& os, const RealizedPotential& pot) {
  os << pot.length() << ',' << format_shortest(pot.k) << ',' << pot.seed << ','
     << pot.dist.to_string() << '\n';
  for (std::size_t i = 0; i < pot.cells.size(); ++i) {
    if (i) os << ',';
    os << format_shortest(pot.cells[i]);
  }
  os << '\n';
}

RealizedPotential read_potential(std::istream& is) {
  std::string header;
  std::string body;
  if (!std::getline(is, header) || !std::getline(is, body))
    throw ParameterError("potential file: expected header and cell lines");
  const auto h = split(trim(header), ',');
  if (h.size() != 4) throw ParameterError("potential file: header must be L,k,seed,dist");
  const auto L = parse_int(h[0]);
  const double k = parse_double(h[1]);
  const auto seed = parse_uint(h[2]);
  const auto dist = Distribution::parse(h[3]);

  std::vector<double> cells;
  for (auto tok : split(trim(body), ',')) cells.push_back(parse_double(tok));
  if (static_cast<std::int64_t>(cells.size()) != L)
    throw ParameterError("potential file: header says L=" + std::to_string(L) + " but found " +
                         std::to_string(cells.size()) + " cells");
  return from_cells(std::move(cells), k, seed, dist);
}

}  // namespace llab
