#include "llab/experiments.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <tuple>

#include "llab/continuum.hpp"
#include "llab/errors.hpp"
#include "llab/io.hpp"

namespace llab {

namespace {

constexpr std::array<std::pair<ExperimentKind, std::string_view>, 7> kKindNames{{
    {ExperimentKind::ensemble, "ensemble"},
    {ExperimentKind::sweep_vmax, "sweep_vmax"},
    {ExperimentKind::sweep_L, "sweep_L"},
    {ExperimentKind::sweep_k, "sweep_k"},
    {ExperimentKind::excited, "excited"},
    {ExperimentKind::semiclassical, "semiclassical"},
    {ExperimentKind::homogenized, "homogenized"},
}};

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// One independent piece of work: a realization at one sweep point.
struct Unit {
  std::int64_t seed = 0;
  int L = 0;
  double coupling = 0.0;  // k, or vmax for sweep_vmax
  double gamma_c = kNaN;  // homogenized only
  double target = kNaN;   // homogenized only
};

std::vector<Unit> make_units(const ExperimentConfig& cfg) {
  std::vector<Unit> units;
  for (auto seed : cfg.seeds) {
    for (int L : cfg.L) {
      switch (cfg.kind) {
        case ExperimentKind::sweep_vmax:
          for (double v : cfg.vmax) units.push_back({seed, L, v});
          break;
        case ExperimentKind::homogenized: {
          const double mean = cfg.dist.mean();
          auto add = [&](double g, double r) {
            units.push_back({seed, L, g / (static_cast<double>(L) * L * mean), g, r});
          };
          for (double g : cfg.gamma_c) add(g, kNaN);
          for (double r : cfg.target_ratio) add(invert_homogenized_ratio(r), r);
          break;
        }
        default:
          for (double k : cfg.k) units.push_back({seed, L, k});
      }
    }
  }
  std::stable_sort(units.begin(), units.end(), [](const Unit& a, const Unit& b) {
    return std::tie(a.seed, a.L, a.coupling) < std::tie(b.seed, b.L, b.coupling);
  });
  return units;
}

RealizedPotential realize(const ExperimentConfig& cfg, const Unit& u) {
  const auto seed = static_cast<std::uint64_t>(u.seed);
  if (cfg.kind == ExperimentKind::sweep_vmax)
    return generate(Distribution::bernoulli(cfg.dist.p, 1.0), u.L, u.coupling, seed);
  return generate(cfg.dist, u.L, u.coupling, seed);
}

void semiclassical_extras(const Analysis& a, std::vector<RatioRecord>& recs) {
  const auto& pot = a.potential;
  const bool zero_well = !a.wells.wells.empty();
  const double lo = *std::min_element(pot.cells.begin(), pot.cells.end());
  const double ka = pot.k * lo;
  const double lambda_c = continuum_eigenvalues(pot, 1).front();
  const double u_c = continuum_landscape_max(pot);
  constexpr double pi2 = std::numbers::pi * std::numbers::pi;
  const double lam = a.spectrum.eigenvalues.front();
  const bool sandwich = ka <= lam && lam <= ka + pi2 && ka <= lambda_c && lambda_c <= ka + pi2;
  for (auto& r : recs)
    r.extra = {zero_well ? 1.0 : 0.0, lo, lambda_c, u_c, lambda_c * u_c, sandwich ? 1.0 : 0.0};
}

void homogenized_extras(const Analysis& a, const Unit& u, std::vector<RatioRecord>& recs) {
  const double L2 = static_cast<double>(u.L) * u.L;
  const auto h = homogenized(u.gamma_c);
  const double f = fluctuation_norm(a.potential, u.gamma_c);
  for (auto& r : recs) {
    r.extra = {u.target, r.lambda_n * L2, h.lambda_c, a.landscape.u_max / L2, h.u_c_max, h.ratio, f};
  }
}

std::vector<RatioRecord> run_unit(const ExperimentConfig& cfg, const Unit& u, std::vector<Shortfall>& sf) {
  const auto pot = realize(cfg, u);
  const auto a = analyze(pot, cfg.M, static_cast<std::size_t>(cfg.n_eigs), cfg.tol);
  auto recs = ratio_records(a, u.seed, cfg.s, &sf);

  if (cfg.oracle) {
    const auto ev = continuum_eigenvalues(pot, static_cast<std::size_t>(cfg.n_eigs));
    for (auto& r : recs) r.oracle_lambda = ev[static_cast<std::size_t>(r.n) - 1];
  }
  if (cfg.kind == ExperimentKind::semiclassical) semiclassical_extras(a, recs);
  if (cfg.kind == ExperimentKind::homogenized) homogenized_extras(a, u, recs);
  return recs;
}

std::string describe(const ExperimentConfig& cfg, const Unit& u) {
  std::string s = "L=" + std::to_string(u.L);
  if (cfg.kind == ExperimentKind::homogenized) return s + " gamma_c=" + format_shortest(u.gamma_c);
  return s + (cfg.kind == ExperimentKind::sweep_vmax ? " vmax=" : " k=") + format_shortest(u.coupling);
}

}  // namespace

std::string to_string(ExperimentKind kind) {
  for (const auto& [k, name] : kKindNames)
    if (k == kind) return std::string(name);
  return "unknown";
}

ExperimentKind parse_kind(std::string_view name) {
  for (const auto& [k, n] : kKindNames)
    if (n == name) return k;
  throw ParameterError("unknown experiment kind '" + std::string(name) + "'");
}

void ExperimentConfig::validate() const {
  dist.validate();
  if (seeds.empty()) throw ParameterError("seed list is empty");
  if (L.empty()) throw ParameterError("L list is empty");
  for (int l : L)
    if (l < 1) throw ParameterError("L must be >= 1");
  if (M < 2) throw ParameterError("M must be >= 2");
  if (n_eigs < 1) throw ParameterError("n_eigs must be >= 1");
  if (s < 1) throw ParameterError("s must be >= 1");
  if (!(tol > 0.0 && tol < 1.0)) throw ParameterError("tol must lie in (0, 1)");
  if (max_nodes < 1) throw ParameterError("max_nodes must be >= 1");

  auto check_nonneg = [](const std::vector<double>& v, const char* what) {
    if (v.empty()) throw ParameterError(std::string(what) + " list is empty");
    for (double x : v)
      if (!(x >= 0.0) || !std::isfinite(x)) throw ParameterError(std::string(what) + " values must be finite and >= 0");
  };

  switch (kind) {
    case ExperimentKind::sweep_vmax:
      if (dist.kind != Distribution::Kind::bernoulli)
        throw ParameterError("sweep_vmax needs a bernoulli distribution");
      check_nonneg(vmax, "vmax");
      break;
    case ExperimentKind::homogenized:
      if (gamma_c.empty() && target_ratio.empty())
        throw ParameterError("homogenized needs gamma_c or target_ratio values");
      for (double g : gamma_c)
        if (!(g >= 0.0) || !std::isfinite(g)) throw ParameterError("gamma_c values must be finite and >= 0");
      if (!(dist.mean() > 0.0)) throw ParameterError("homogenized needs a distribution with positive mean");
      for (double r : target_ratio) invert_homogenized_ratio(r);  // range check
      break;
    case ExperimentKind::semiclassical:
      if (L.size() != 1) throw ParameterError("semiclassical uses a single L");
      check_nonneg(k, "k");
      break;
    default:
      check_nonneg(k, "k");
  }

  for (int l : L) {
    const auto nodes = static_cast<std::size_t>(l) * static_cast<std::size_t>(M) - 1;
    if (nodes > max_nodes)
      throw GridError("L=" + std::to_string(l) + ", M=" + std::to_string(M) + " gives " + std::to_string(nodes) +
                      " nodes, above max_nodes=" + std::to_string(max_nodes));
  }
}

std::vector<std::string> extra_columns(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::semiclassical:
      return {"has_zero_well", "min_height", "continuum_lambda", "continuum_u_max", "continuum_ratio", "sandwich"};
    case ExperimentKind::homogenized:
      return {"target_ratio", "lambda_rescaled", "lambda_c", "u_rescaled", "u_c_max", "R", "F_norm"};
    default:
      return {};
  }
}

Analysis analyze(const RealizedPotential& pot, int M, std::size_t n_eigs, double tol) {
  Analysis a;
  a.potential = pot;
  a.M = M;
  const auto T = assemble(pot, M);
  a.spectrum = lowest_eigenvalues(T, n_eigs, tol);
  a.landscape = landscape(T);
  a.minima = local_minima(a.landscape);
  a.wells = decompose_wells(pot);
  return a;
}

std::vector<RatioRecord> ratio_records(const Analysis& a, std::int64_t seed, int s_max,
                                       std::vector<Shortfall>* shortfalls) {
  const auto& pot = a.potential;
  const auto& ev = a.spectrum.eigenvalues;
  const double L = pot.length();
  const double gamma_c = pot.k * L * L * pot.dist.mean();

  std::vector<RatioRecord> out;
  for (int s = 1; s <= s_max; ++s) {
    const auto W = generalized_minima(a.minima, s, ev.size());
    const auto pairing = pair_ratios(ev, W);
    if (shortfalls && W.size() < ev.size()) shortfalls->push_back({seed, pot.length(), s, ev.size() - W.size()});
    for (std::size_t i = 0; i < pairing.ratios.size(); ++i) {
      RatioRecord r;
      r.seed = seed;
      r.L = pot.length();
      r.k = pot.k;
      r.gamma_c = gamma_c;
      r.L_max = a.wells.L_max;
      r.n = static_cast<int>(i) + 1;
      r.s = s;
      r.lambda_n = ev[i];
      r.W_n = W.values[i];
      r.ratio = pairing.ratios[i];
      out.push_back(std::move(r));
    }
  }
  return out;
}

bool vogt_ok(const RatioRecord& r) {
  if (r.n != 1 || r.s != 1) return true;
  return r.ratio > 1.0 && r.ratio < kVogtUpper;
}

std::vector<SummaryRow> summarize(const std::vector<RatioRecord>& records) {
  std::vector<SummaryRow> out;
  int s_max = 0;
  for (const auto& r : records) s_max = std::max(s_max, r.s);
  for (int s = 1; s <= s_max; ++s) {
    std::vector<double> v;
    for (const auto& r : records)
      if (r.s == s) v.push_back(r.ratio);
    if (v.empty()) continue;
    SummaryRow row;
    row.s = s;
    row.count = v.size();
    std::size_t close = 0;
    double sum = 0.0;
    for (double x : v) {
      sum += x;
      if (std::abs(x / kPiSquaredOver8 - 1.0) <= kRatioBand) ++close;
    }
    row.mean = sum / static_cast<double>(v.size());
    std::sort(v.begin(), v.end());
    row.min = v.front();
    row.max = v.back();
    const std::size_t m = v.size() / 2;
    row.median = v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
    row.within_band = static_cast<double>(close) / static_cast<double>(v.size());
    out.push_back(row);
  }
  return out;
}

ExperimentRun run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto units = make_units(cfg);
  const auto count = static_cast<long long>(units.size());

  std::vector<std::vector<RatioRecord>> results(units.size());
  std::vector<std::vector<Shortfall>> shortfalls(units.size());
  std::vector<std::string> errors(units.size());

#pragma omp parallel for schedule(dynamic)
  for (long long i = 0; i < count; ++i) {
    const auto j = static_cast<std::size_t>(i);
    try {
      results[j] = run_unit(cfg, units[j], shortfalls[j]);
    } catch (const std::exception& e) {
      errors[j] = e.what();
    }
  }

  ExperimentRun run;
  run.config = cfg;
  for (std::size_t j = 0; j < units.size(); ++j) {
    if (!errors[j].empty()) run.failures.push_back({units[j].seed, describe(cfg, units[j]), errors[j]});
    for (auto& r : results[j]) run.records.push_back(std::move(r));
    for (auto& s : shortfalls[j]) run.shortfalls.push_back(s);
  }
  for (std::size_t i = 0; i < run.records.size(); ++i)
    if (!vogt_ok(run.records[i])) run.vogt_violations.push_back(i);
  run.summary = summarize(run.records);
  return run;
}

std::string records_csv(ExperimentKind kind, const std::vector<RatioRecord>& records) {
  std::string out = "seed,L,k,gamma_c,L_max,n,s,lambda_n,W_n,ratio,oracle_lambda";
  for (const auto& c : extra_columns(kind)) out += "," + c;
  out += "\n";
  for (const auto& r : records) {
    out += std::to_string(r.seed) + "," + std::to_string(r.L) + "," + format_g17(r.k) + "," +
           format_g17(r.gamma_c) + "," + std::to_string(r.L_max) + "," + std::to_string(r.n) + "," +
           std::to_string(r.s) + "," + format_g17(r.lambda_n) + "," + format_g17(r.W_n) + "," +
           format_g17(r.ratio) + "," + format_g17(r.oracle_lambda);
    for (double x : r.extra) out += "," + format_g17(x);
    out += "\n";
  }
  return out;
}

}  // namespace llab
