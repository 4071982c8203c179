// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "llab/continuum.hpp"
#include "llab/discretize.hpp"
#include "llab/errors.hpp"
#include "llab/experiments.hpp"
#include "llab/landscape.hpp"
#include "llab/linalg.hpp"
#include "llab/verify.hpp"

using namespace llab;

namespace {

constexpr double kPi2 = std::numbers::pi * std::numbers::pi;

struct Outcome {
  bool pass = false;
  std::string detail;
};

// Every ground-state ratio produced below, for the universal bound check.
std::vector<double> g_ground_ratios;

void collect(const ExperimentRun& run) {
  for (const auto& r : run.records)
    if (r.n == 1 && r.s == 1) g_ground_ratios.push_back(r.ratio);
}

double rel(double a, double b) { return std::abs(a / b - 1.0); }

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const auto m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

ExperimentRun checked_run(const ExperimentConfig& cfg) {
  auto run = run_experiment(cfg);
  if (!run.failures.empty())
    throw SolverError("work unit failed: " + run.failures.front().where + ": " + run.failures.front().message);
  collect(run);
  return run;
}

Outcome free_case() {
  const auto pot = from_cells({0.0}, 1.0);
  const auto T = assemble(pot, 128);
  const double fd = bisect_eigenvalue(T, 1) * landscape(T).u_max;
  const double cont = continuum_eigenvalues(pot, 1).front() * continuum_landscape_max(pot);
  g_ground_ratios.insert(g_ground_ratios.end(), {fd, cont});
  const double e_fd = rel(fd, kPiSquaredOver8);
  const double e_c = rel(cont, kPiSquaredOver8);
  return {e_fd <= 1e-3 && e_c <= 1e-10, fmt("fd err %.2e, continuum err %.2e", e_fd, e_c)};
}

Outcome walled_wells() {
  bool ok = true;
  double worst_l = 0, worst_u = 0;
  for (int ell : {2, 5, 10}) {
    std::vector<double> cells(static_cast<std::size_t>(ell) + 2, 0.0);
    cells.front() = cells.back() = 1.0;
    const auto pot = from_cells(cells, 1e8);
    const double lam = continuum_eigenvalues(pot, 1).front();
    const double u = continuum_landscape_max(pot);
    g_ground_ratios.push_back(lam * u);
    const double el = rel(lam, kPi2 / (ell * ell));
    const double eu = rel(u, ell * ell / 8.0);
    worst_l = std::max(worst_l, el);
    worst_u = std::max(worst_u, eu);
    ok = ok && el <= 1e-3 && eu <= 1e-3;
  }
  return {ok, fmt("max lambda err %.2e, max u_max err %.2e", worst_l, worst_u)};
}

const VerifyReport& corpus_report() {
  static const VerifyReport report = [] {
    VerifyOptions o;
    o.corpus_size = 200;
    o.M = 64;
    o.fd_tolerance = 5e-4;
    o.min_order_gain = 3.0;
    return run_verify(o);
  }();
  return report;
}

const CheckResult& corpus_check(const std::string& name) {
  for (const auto& c : corpus_report().checks)
    if (c.name == name) return c;
  throw SolverError("missing corpus check " + name);
}

std::string describe(const CheckResult& c) {
  std::string s = c.name + " " + std::to_string(c.passed) + "/" + std::to_string(c.checked);
  if (c.skipped) s += " (" + std::to_string(c.skipped) + " skipped)";
  if (!c.failures.empty()) s += " first failure: " + c.failures.front();
  return s;
}

Outcome sandwich_bounds() {
  const auto& u = corpus_check("u_bounds");
  const auto& l = corpus_check("lambda_bounds");
  return {u.ok() && l.ok() && u.checked == 200 && u.passed == 200, describe(u) + ", " + describe(l)};
}

Outcome oracle_equivalence() {
  const auto& f = corpus_check("fd_vs_continuum");
  const auto& h = corpus_check("h2_convergence");
  return {f.ok() && h.ok() && f.passed == 200, describe(f) + ", " + describe(h)};
}

// The 25-level comparison against W^(1) is only meaningful for realizations
// whose first 25 generalized minima contain no second harmonic, i.e. where
// W^(1) and W^(2) agree on 25 entries. That test uses the landscape alone.
// Every such realization among seeds 1..40 must pass.
Outcome fig2() {
  ExperimentConfig c;
  c.kind = ExperimentKind::excited;
  c.dist = Distribution::bernoulli(0.5, 40.0);
  c.L = {500};
  c.M = 32;
  c.n_eigs = 25;
  c.s = 1;
  for (int s = 1; s <= 40; ++s) c.seeds.push_back(s);
  const auto run = checked_run(c);

  std::size_t eligible = 0;
  bool ok = true;
  double worst_all = 0, worst_med = 0;
  for (auto seed : c.seeds) {
    const auto a = analyze(generate(c.dist, 500, 1.0, static_cast<std::uint64_t>(seed)), c.M, 1);
    if (generalized_minima(a.minima, 1, 25).values != generalized_minima(a.minima, 2, 25).values) continue;
    ++eligible;
    std::vector<double> ratios;
    for (const auto& r : run.records)
      if (r.seed == seed) ratios.push_back(r.ratio);
    double worst = 0;
    for (double r : ratios) worst = std::max(worst, rel(r, kPiSquaredOver8));
    const double med = rel(median(ratios), kPiSquaredOver8);
    worst_all = std::max(worst_all, worst);
    worst_med = std::max(worst_med, med);
    ok = ok && ratios.size() == 25 && worst <= 0.15 && med <= 0.05;
  }
  return {ok && eligible > 0, fmt("%.0f of 40 realizations eligible, worst %.3f, worst median offset %.3f",
                                  double(eligible), worst_all, worst_med)};
}

Outcome ensemble() {
  ExperimentConfig c;
  c.kind = ExperimentKind::ensemble;
  c.dist = Distribution::bernoulli(0.5, 10.0);
  c.L = {2000};
  c.M = 32;
  c.seeds.clear();
  for (int s = 1; s <= 50; ++s) c.seeds.push_back(s);
  const auto run = checked_run(c);
  double worst = 0;
  for (const auto& r : run.records) worst = std::max(worst, rel(r.ratio, kPiSquaredOver8));
  return {run.records.size() == 50 && worst <= 0.10, fmt("%.0f seeds, worst %.4f", double(run.records.size()), worst)};
}

Outcome semiclassical() {
  ExperimentConfig c;
  c.kind = ExperimentKind::semiclassical;
  c.L = {20};
  c.M = 32;
  c.k = {1, 10, 1e2, 1e3, 1e4, 1e5, 1e6};
  c.seeds = {2};

  c.dist = Distribution::bernoulli(0.5, 1.0);
  const auto well = checked_run(c);
  c.dist = Distribution::bernoulli(0.0, 1.0);
  const auto ones = checked_run(c);

  bool sandwich = true;
  for (const auto* run : {&well, &ones})
    for (const auto& r : run->records) {
      sandwich = sandwich && r.extra[5] == 1.0;
      g_ground_ratios.push_back(r.extra[4]);
    }
  const auto& top = well.records.back();
  const double ea = std::max(rel(top.ratio, kPiSquaredOver8), rel(top.extra[4], kPiSquaredOver8));
  const auto& one = ones.records.back();
  const double eb = std::max(rel(one.ratio, 1.0), rel(one.extra[4], 1.0));
  const bool a = top.extra[0] == 1.0 && ea <= 0.02;
  const bool b = one.extra[0] == 0.0 && eb <= 0.01;
  return {a && b && sandwich,
          fmt("(a) err %.4f, (b) err %.2e, (c) ", ea, eb) + (sandwich ? "holds" : "violated")};
}

Outcome homogenization() {
  ExperimentConfig c;
  c.kind = ExperimentKind::homogenized;
  c.dist = Distribution::bernoulli(0.5, 1.0);
  c.L = {256, 1024, 4096};
  c.M = 8;
  c.gamma_c = {5.0};
  for (int s = 1; s <= 10; ++s) c.seeds.push_back(s);
  const auto run = checked_run(c);
  std::vector<double> lam_err, u_err;
  for (int L : c.L) {
    std::vector<double> el, eu;
    for (const auto& r : run.records)
      if (r.L == L) {
        el.push_back(rel(r.extra[1], r.extra[2]));
        eu.push_back(rel(r.extra[3], r.extra[4]));
      }
    lam_err.push_back(median(el));
    u_err.push_back(median(eu));
  }
  bool ok = lam_err.back() < 0.05 && u_err.back() < 0.05;
  for (std::size_t i = 1; i < lam_err.size(); ++i) ok = ok && lam_err[i] < lam_err[i - 1] && u_err[i] < u_err[i - 1];
  return {ok, fmt("lambda %.4f > %.4f > %.4f; ", lam_err[0], lam_err[1], lam_err[2]) +
                  fmt("u_max %.4f > %.4f > %.4f", u_err[0], u_err[1], u_err[2])};
}

Outcome tunable_ratio() {
  ExperimentConfig c;
  c.kind = ExperimentKind::homogenized;
  c.dist = Distribution::bernoulli(0.5, 1.0);
  c.L = {4096};
  c.M = 8;
  c.target_ratio = {1.05, 1.1, 1.2};
  for (int s = 1; s <= 10; ++s) c.seeds.push_back(s);
  const auto run = checked_run(c);
  bool ok = true;
  std::string detail;
  for (double target : c.target_ratio) {
    std::vector<double> ratios;
    for (const auto& r : run.records)
      if (r.extra[0] == target) ratios.push_back(r.ratio);
    const double med = median(ratios);
    ok = ok && ratios.size() == 10 && rel(med, target) <= 0.05;
    detail += fmt("r=%.2f median %.4f; ", target, med);
  }
  return {ok, detail};
}

Outcome repair() {
  ExperimentConfig c;
  c.kind = ExperimentKind::excited;
  c.dist = Distribution::bernoulli(0.7, 20.0);
  c.L = {3000};
  c.M = 16;
  c.n_eigs = 150;
  c.s = 3;
  for (int s = 1; s <= 10; ++s) c.seeds.push_back(s);
  const auto run = checked_run(c);
  std::vector<double> frac;
  for (const auto& row : run.summary) frac.push_back(row.within_band);
  bool ok = frac.size() == 3 && frac[0] < frac[1] && frac[1] < frac[2] && frac[2] >= 0.95;
  for (const auto& row : run.summary) ok = ok && row.count == 1500;

  std::size_t same_count = 0;
  for (auto seed : c.seeds) {
    const auto a = analyze(generate(c.dist, 3000, 1.0, static_cast<std::uint64_t>(seed)), 16, 1);
    const auto w3 = generalized_minima(a.minima, 3, 150);
    const auto w4 = generalized_minima(a.minima, 4, 150);
    if (w3.size() == 150 && w3.values == w4.values) ++same_count;
  }
  const bool same = same_count == c.seeds.size();
  return {ok && same, fmt("within band s=1 %.3f, s=2 %.3f, s=3 %.3f; ", frac.size() > 0 ? frac[0] : NAN,
                          frac.size() > 1 ? frac[1] : NAN, frac.size() > 2 ? frac[2] : NAN) +
                          fmt("W(3) = W(4) on 150 entries for %.0f of %.0f seeds", double(same_count), double(c.seeds.size()))};
}

Outcome determinism() {
  ExperimentConfig e;
  e.kind = ExperimentKind::excited;
  e.dist = Distribution::bernoulli(0.7, 20.0);
  e.L = {300, 600};
  e.M = 16;
  e.n_eigs = 30;
  e.s = 3;
  e.oracle = true;
  for (int s = 1; s <= 8; ++s) e.seeds.push_back(s);
  ExperimentConfig h;
  h.kind = ExperimentKind::homogenized;
  h.dist = Distribution::bernoulli(0.5, 1.0);
  h.L = {256};
  h.M = 8;
  h.gamma_c = {5.0};
  h.target_ratio = {1.1};
  h.seeds = {1, 2, 3, 4};

  const int max_threads = std::max(8, omp_get_num_procs());
  bool ok = true;
  for (const auto* cfg : {&e, &h}) {
    std::vector<std::string> csv;
    for (int threads : {1, max_threads, 1, max_threads}) {
      omp_set_num_threads(threads);
      csv.push_back(records_csv(cfg->kind, checked_run(*cfg).records));
    }
    for (const auto& s : csv) ok = ok && s == csv.front();
  }
  omp_set_num_threads(omp_get_num_procs());
  return {ok, fmt("two configs, 1 and %.0f threads, two runs each", max_threads)};
}

Outcome vogt() {
  const auto& v = corpus_check("vogt");
  std::size_t bad = 0;
  for (double r : g_ground_ratios)
    if (!(r > 1.0 && r < kVogtUpper)) ++bad;
  return {bad == 0 && v.ok(),
          fmt("%.0f suite ratios, %.0f outside; corpus ", double(g_ground_ratios.size()), double(bad)) + describe(v)};
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  // Criterion 5 pools ratios from all the others, so it runs last.
  const std::vector<Criterion> criteria{
      {1, "free-case identity", 1, free_case},
      {2, "walled-well limit", 5, walled_wells},
      {3, "bound sandwich on the corpus", 120, sandwich_bounds},
      {4, "discrete vs continuum", 300, oracle_equivalence},
      {6, "25 eigenvalues against sorted minima", 30, fig2},
      {7, "ground-state ensemble", 300, ensemble},
      {8, "semiclassical limits", 60, semiclassical},
      {9, "homogenized limit", 600, homogenization},
      {10, "tunable ratio", 600, tunable_ratio},
      {11, "generalized minima repair", 300, repair},
      {12, "determinism", 600, determinism},
      {5, "universal ratio bound", 1, vogt},
  };

  struct Line {
    int id;
    std::string text;
  };
  std::vector<Line> lines;
  double corpus_s = 0;
  bool all = true;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& ex) {
      o = {false, std::string("error: ") + ex.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    // criteria 3 and 4 share one corpus pass; charge it to both
    if (c.id == 3) corpus_s = secs;
    if (c.id == 4) secs += corpus_s;
    const bool in_time = secs < c.budget_s;
    const bool pass = o.pass && in_time;
    all = all && pass;
    char head[128];
    std::snprintf(head, sizeof head, "[%s] %2d %-38s %7.2fs%s  ", pass ? "PASS" : "FAIL", c.id, c.name, secs,
                  in_time ? "" : " (over budget)");
    lines.push_back({c.id, head + o.detail});
  }
  std::sort(lines.begin(), lines.end(), [](const Line& a, const Line& b) { return a.id < b.id; });
  for (const auto& l : lines) std::puts(l.text.c_str());
  std::puts(all ? "all criteria passed" : "some criteria failed");
  return all ? 0 : 1;
}
