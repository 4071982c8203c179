// landscape-lab: solve one realization, run configured experiments, or run
// the cross-validation corpus.
//
// Exit codes: 0 ok, 1 property failure, 2 config or input error, 3 solver failure.

#include <omp.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "llab/config.hpp"
#include "llab/continuum.hpp"
#include "llab/errors.hpp"
#include "llab/experiments.hpp"
#include "llab/io.hpp"
#include "llab/verify.hpp"
#include "llab/version.hpp"

namespace fs = std::filesystem;
using namespace llab;

namespace {

enum Exit { kOk = 0, kPropertyFailure = 1, kInputError = 2, kSolverFailure = 3 };

struct SolveArgs {
  std::string dist;
  int L = 0;
  double k = 1.0;
  int M = 32;
  std::int64_t seed = 0;
  int n = 1;
  int s = 1;
  double tol = kDefaultBisectionTol;
  std::size_t max_nodes = 4'000'000;
  std::string out = ".";
};

struct ExperimentArgs {
  std::string config;
  std::string out = ".";
};

struct VerifyArgs {
  std::size_t corpus_size = 200;
  std::uint64_t seed = 1;
  bool inject_fault = false;
};

void apply_thread_cap() {
  const char* env = std::getenv("LANDSCAPE_LAB_THREADS");
  if (!env || !*env) return;
  const auto n = parse_uint(env);
  if (n > 0) omp_set_num_threads(static_cast<int>(std::min<std::uint64_t>(n, 1u << 16)));
}

class Manifest {
 public:
  Manifest(std::string command, fs::path dir) : command_(std::move(command)), dir_(std::move(dir)) {}

  void config(const std::string& text) { config_ += text; }
  void seeds(const std::vector<std::int64_t>& s) { seeds_.insert(seeds_.end(), s.begin(), s.end()); }
  void note(const std::string& line) { notes_ += line + "\n"; }

  void emit(const std::string& name, const std::string& contents) {
    write_file(dir_ / name, contents);
    files_.push_back(name);
  }

  void write(double seconds) const {
    std::string m = "tool = landscape-lab " + std::string(kVersion) + "\n";
    m += "command = " + command_ + "\n";
    m += "threads = " + std::to_string(omp_get_max_threads()) + "\n";
    m += "wall_clock_s = " + format_g17(seconds) + "\n";
    m += "ratio_band = " + format_shortest(kRatioBand) + "\n";
    m += "seeds =";
    for (auto s : seeds_) m += " " + std::to_string(s);
    m += "\n\n# resolved config\n" + config_;
    if (!notes_.empty()) m += "\n# results\n" + notes_;
    m += "\n# sha256\n";
    for (const auto& f : files_) m += sha256_file(dir_ / f) + "  " + f + "\n";
    write_file(dir_ / "manifest.txt", m);
  }

 private:
  std::string command_;
  fs::path dir_;
  std::string config_;
  std::string notes_;
  std::vector<std::int64_t> seeds_;
  std::vector<std::string> files_;
};

std::string summary_line(const SummaryRow& r) {
  return "s=" + std::to_string(r.s) + " count=" + std::to_string(r.count) + " mean=" + format_g17(r.mean) +
         " median=" + format_g17(r.median) + " min=" + format_g17(r.min) + " max=" + format_g17(r.max) +
         " within_band=" + format_g17(r.within_band);
}

int cmd_solve(const SolveArgs& a) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto dist = Distribution::parse(a.dist);
  if (a.L < 1) throw ParameterError("--L must be >= 1");
  if (a.n < 1 || a.s < 1) throw ParameterError("--n and --s must be >= 1");
  const auto nodes = static_cast<std::size_t>(a.L) * static_cast<std::size_t>(std::max(a.M, 0));
  if (nodes > a.max_nodes + 1)
    throw GridError(std::to_string(nodes - 1) + " nodes exceeds --max-nodes " + std::to_string(a.max_nodes));

  const auto pot = generate(dist, a.L, a.k, static_cast<std::uint64_t>(a.seed));
  const auto an = analyze(pot, a.M, static_cast<std::size_t>(a.n), a.tol);
  const auto records = ratio_records(an, a.seed, a.s);

  fs::create_directories(a.out);
  Manifest man("solve", a.out);
  man.config("dist = " + dist.to_string() + "\nL = " + std::to_string(a.L) + "\nk = " + format_shortest(a.k) +
             "\nM = " + std::to_string(a.M) + "\nseed = " + std::to_string(a.seed) + "\nn = " + std::to_string(a.n) +
             "\ns = " + std::to_string(a.s) + "\ntol = " + format_shortest(a.tol) + "\n");
  man.seeds({a.seed});

  std::string csv = "n,lambda\n";
  for (std::size_t i = 0; i < an.spectrum.eigenvalues.size(); ++i)
    csv += std::to_string(i + 1) + "," + format_g17(an.spectrum.eigenvalues[i]) + "\n";
  man.emit("spectrum.csv", csv);

  csv = "x,u,W\n";
  const auto& ls = an.landscape;
  for (std::size_t i = 0; i < ls.u.size(); ++i)
    csv += format_g17(ls.grid.x(i)) + "," + format_g17(ls.u[i]) + "," + format_g17(ls.W[i]) + "\n";
  man.emit("landscape.csv", csv);

  csv = "rank,s,W_value,position\n";
  for (int s = 1; s <= a.s; ++s) {
    const auto W = generalized_minima(an.minima, s, an.minima.size() * static_cast<std::size_t>(s));
    for (std::size_t i = 0; i < W.size(); ++i)
      csv += std::to_string(i + 1) + "," + std::to_string(s) + "," + format_g17(W.values[i]) + "," +
             format_g17(W.positions[i]) + "\n";
  }
  man.emit("minima.csv", csv);

  csv = "seed,L,k,gamma_c,L_max,n,s,lambda_n,W_n,ratio\n";
  for (const auto& r : records)
    csv += std::to_string(r.seed) + "," + std::to_string(r.L) + "," + format_g17(r.k) + "," + format_g17(r.gamma_c) +
           "," + std::to_string(r.L_max) + "," + std::to_string(r.n) + "," + std::to_string(r.s) + "," +
           format_g17(r.lambda_n) + "," + format_g17(r.W_n) + "," + format_g17(r.ratio) + "\n";
  man.emit("ratios.csv", csv);

  csv = "cell,omega,V\n";
  for (int j = 0; j < pot.length(); ++j)
    csv += std::to_string(j) + "," + format_g17(pot.cells[static_cast<std::size_t>(j)]) + "," +
           format_g17(pot.coupled(j)) + "\n";
  man.emit("potential.csv", csv);

  for (const auto& row : summarize(records)) man.note(summary_line(row));
  man.write(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  return kOk;
}

int cmd_experiment(const ExperimentArgs& a) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto configs = load_config(a.config);
  fs::create_directories(a.out);
  Manifest man("experiment " + a.config, a.out);

  bool vogt_failed = false;
  bool solver_failed = false;
  for (const auto& cfg : configs) {
    const auto run = run_experiment(cfg);
    const auto kind = to_string(cfg.kind);
    man.config(format_config(cfg));
    man.seeds(cfg.seeds);
    man.emit(kind + ".csv", records_csv(cfg.kind, run.records));

    for (const auto& row : run.summary) man.note(kind + " " + summary_line(row));
    for (const auto& s : run.shortfalls)
      man.note(kind + " shortfall seed=" + std::to_string(s.seed) + " L=" + std::to_string(s.L) +
               " s=" + std::to_string(s.s) + " missing=" + std::to_string(s.missing));
    if (!run.failures.empty()) {
      std::string csv = "seed,where,message\n";
      for (const auto& f : run.failures) {
        csv += std::to_string(f.seed) + ",\"" + f.where + "\",\"" + f.message + "\"\n";
        std::cerr << kind << ": seed " << f.seed << " (" << f.where << "): " << f.message << "\n";
      }
      man.emit(kind + "_failures.csv", csv);
      solver_failed = true;
    }
    for (auto i : run.vogt_violations) {
      const auto& r = run.records[i];
      std::cerr << kind << ": ratio " << format_g17(r.ratio) << " outside (1, " << format_g17(kVogtUpper)
                << ") for seed " << r.seed << "\n";
      vogt_failed = true;
    }
  }
  man.write(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  if (vogt_failed) return kPropertyFailure;
  return solver_failed ? kSolverFailure : kOk;
}

int cmd_verify(const VerifyArgs& a) {
  VerifyOptions opts;
  opts.corpus_size = a.corpus_size;
  opts.base_seed = a.seed;
  opts.inject_fault = a.inject_fault;
  const auto rep = run_verify(opts);
  std::cout << rep.table();
  return rep.ok() ? kOk : kPropertyFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Landscape-function laboratory for 1-D random Schrödinger operators", "landscape-lab"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  SolveArgs sa;
  auto* solve = app.add_subcommand("solve", "Solve one realization and write spectrum, landscape, minima and ratios");
  solve->add_option("--dist", sa.dist, "bernoulli:p:vmax | two-point:p:a:b | uniform:lo:hi")->required();
  solve->add_option("--L", sa.L, "Domain length (number of unit cells)")->required();
  solve->add_option("--k", sa.k, "Coupling constant")->capture_default_str();
  solve->add_option("--M", sa.M, "Grid subdivisions per cell")->capture_default_str();
  solve->add_option("--seed", sa.seed, "Realization seed")->required();
  solve->add_option("--n", sa.n, "Number of eigenvalues")->capture_default_str();
  solve->add_option("--s", sa.s, "Highest generalized-minima order")->capture_default_str();
  solve->add_option("--tol", sa.tol, "Relative bisection tolerance")->capture_default_str();
  solve->add_option("--max-nodes", sa.max_nodes, "Refuse grids larger than this")->capture_default_str();
  solve->add_option("--out", sa.out, "Output directory")->capture_default_str();

  ExperimentArgs ea;
  auto* experiment = app.add_subcommand("experiment", "Run every experiment section of a config file");
  experiment->add_option("config", ea.config, "Config file")->required();
  experiment->add_option("--out", ea.out, "Output directory")->capture_default_str();

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "Cross-check the discrete solver against the continuum oracles");
  verify->add_option("--corpus-size", va.corpus_size, "Number of random realizations")->capture_default_str();
  verify->add_option("--seed", va.seed, "First corpus seed")->capture_default_str();
  verify->add_flag("--inject-fault", va.inject_fault, "Test hook: invert the lower bound on max u");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    if (rc == 0) return kOk;
    std::cerr << app.help();
    return kInputError;
  }

  try {
    apply_thread_cap();
    if (*solve) return cmd_solve(sa);
    if (*experiment) return cmd_experiment(ea);
    if (*verify) return cmd_verify(va);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const SolverError& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return kSolverFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
