// rmc: command-line front end for instance generation, solving and experiments.

#include <glob.h>

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "rmc/bench.hpp"
#include "rmc/datagen.hpp"
#include "rmc/errors.hpp"
#include "rmc/fgbg.hpp"
#include "rmc/matrix_io.hpp"
#include "rmc/operators.hpp"
#include "rmc/solver.hpp"
#include "rmc/solver_io.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNotConverged = 3;
constexpr const char* kVersion = "0.1.0";

struct Shared {
  std::uint64_t seed = 0;
  std::string out = "out";
  std::size_t jobs = 1;
};

// Solver flags shared by solve, rpca and fgbg.
struct SolverFlags {
  rmc::Index rank = 1;
  double eps = 1e-4;
  double mu = 1.5;
  std::optional<double> eta;
  std::optional<double> sigma;
  std::string variant = "pg";
  std::string split_mode = "none";
  std::optional<double> step_scale;
  std::optional<double> threshold_decay;
  std::optional<double> adaptive_lambda;
  std::optional<rmc::Index> inner_iters;
  std::optional<rmc::Index> max_stages;
  double time_limit = 0.0;
  bool track_contraction = false;

  void add(CLI::App* app, bool rank_flag = true) {
    if (rank_flag) app->add_option("--rank", rank, "target rank")->check(CLI::PositiveNumber);
    app->add_option("--eps", eps, "target Frobenius error")->check(CLI::PositiveNumber);
    app->add_option("--mu", mu, "incoherence estimate")->check(CLI::PositiveNumber);
    app->add_option("--eta", eta, "threshold parameter (default 4 mu^2 r / m)")
        ->check(CLI::PositiveNumber);
    app->add_option("--sigma", sigma, "estimate of the top singular value")
        ->check(CLI::PositiveNumber);
    app->add_option("--variant", variant, "pg or rank")->check(CLI::IsMember({"pg", "rank"}));
    app->add_option("--split-mode", split_mode, "none, paper or exact")
        ->check(CLI::IsMember({"none", "paper", "exact"}));
    app->add_option("--step-scale", step_scale, "gradient step multiplier")
        ->check(CLI::Range(1e-6, 1.0));
    app->add_option("--threshold-decay", threshold_decay, "threshold decay base")
        ->check(CLI::Range(1e-6, 1.0));
    app->add_option("--adaptive-lambda", adaptive_lambda,
                    "use zeta = lambda mu sigma_1 / sqrt(n) inside the inner loop")
        ->check(CLI::PositiveNumber);
    app->add_option("--inner-iters", inner_iters, "inner iterations per stage")
        ->check(CLI::PositiveNumber);
    app->add_option("--max-stages", max_stages, "stage cap")->check(CLI::PositiveNumber);
    app->add_option("--time-limit", time_limit, "seconds, 0 = none")->check(CLI::NonNegativeNumber);
    app->add_flag("--track-contraction", track_contraction,
                  "shrink the threshold by the observed contraction instead of a fixed rate");
  }

  rmc::SolverConfig config(std::uint64_t seed) const {
    rmc::SolverConfig c;
    c.epsilon = eps;
    c.target_rank = rank;
    c.mu = mu;
    c.eta = eta;
    c.sigma = sigma;
    c.variant = rmc::parse_variant(variant);
    c.split_mode = rmc::parse_split_mode(split_mode);
    if (step_scale) c.step_scale = *step_scale;
    if (threshold_decay) c.threshold_decay = *threshold_decay;
    c.adaptive_lambda = adaptive_lambda;
    c.inner_iters_override = inner_iters;
    c.max_stages_override = max_stages;
    c.time_limit = time_limit;
    c.track_contraction = track_contraction;
    c.seed = seed;
    return c;
  }
};

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

// Config hash covers the argv after the program name, so identical
// invocations hash identically on every platform.
void write_manifest(const fs::path& dir, const std::string& sub, const std::vector<std::string>& args,
                    std::uint64_t seed, const json& extra) {
  std::string joined;
  for (const auto& a : args) joined += a + '\n';
  const std::string hash = hex64(fnv1a(joined));
  std::cerr << "manifest: subcommand=" << sub << " seed=" << seed << " config_hash=" << hash
            << '\n';
  json m;
  m["tool"] = "rmc";
  m["version"] = kVersion;
  m["subcommand"] = sub;
  m["argv"] = args;
  m["seed"] = seed;
  m["config_hash"] = hash;
  if (!extra.is_null()) m["inputs"] = extra;
  fs::create_directories(dir);
  std::ofstream out(dir / "manifest.json");
  out << m.dump(2) << '\n';
  if (!out) throw rmc::IoError("cannot write manifest in " + dir.string());
}

std::vector<fs::path> expand_glob(const std::string& pattern) {
  glob_t g{};
  const int rc = ::glob(pattern.c_str(), 0, nullptr, &g);
  std::vector<fs::path> out;
  if (rc == 0) {
    for (std::size_t i = 0; i < g.gl_pathc; ++i) out.emplace_back(g.gl_pathv[i]);
  }
  globfree(&g);
  std::sort(out.begin(), out.end());
  if (out.empty()) throw rmc::ArgumentError("no files match '" + pattern + "'");
  return out;
}

std::string read_text(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw rmc::IoError("cannot open " + p.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int finish(const rmc::SolverReport& report) {
  if (report.converged()) return kExitOk;
  std::cerr << "rmc: solver did not converge (" << rmc::to_string(report.termination)
            << "); partial results written\n";
  return kExitNotConverged;
}

int cmd_gen(const Shared& sh, rmc::InstanceSpec spec, bool full) {
  spec.seed = sh.seed;
  const auto inst = rmc::make_instance(spec);
  rmc::write_instance(sh.out, spec, inst, full);
  return kExitOk;
}

int cmd_solve(const Shared& sh, const SolverFlags& sf, const std::string& obs_path,
              std::optional<double> p) {
  const rmc::SparseCoo obs_mat = rmc::io::read_sparse(fs::path(obs_path));
  const rmc::ObservationSet obs =
      p ? rmc::ObservationSet(obs_mat, *p) : rmc::ObservationSet::with_empirical_rate(obs_mat);
  const auto cfg = sf.config(sh.seed);
  const auto res = rmc::solve(obs, cfg);
  rmc::io::write_factors(sh.out, "l", res.l);
  rmc::io::write_report(fs::path(sh.out) / "report.json", res.report, cfg);
  return finish(res.report);
}

int cmd_rpca(const Shared& sh, const SolverFlags& sf, const std::string& mat_path, double p,
             bool two_pass) {
  const rmc::SparseCoo mat = rmc::io::read_sparse(fs::path(mat_path));
  const auto cfg = sf.config(sh.seed);
  const auto res = rmc::rpca(mat, p, cfg, two_pass);
  rmc::io::write_factors(sh.out, "l", res.l);
  if (res.s) rmc::io::write_sparse(fs::path(sh.out) / "s.txt", *res.s);
  rmc::io::write_report(fs::path(sh.out) / "report.json", res.report, cfg);
  return finish(res.report);
}

int cmd_bench(const Shared& sh, const std::string& grid_path, bool convergence) {
  const auto grid = rmc::parse_grid(read_text(grid_path));
  const fs::path out = sh.out;
  const auto rows = rmc::run_trials(grid, sh.jobs);
  rmc::write_trials_csv(out / "trials.csv", rows, false);
  rmc::write_cells_csv(out / "cells.csv", rmc::summarize(grid, rows));
  fs::create_directories(out / "timing");
  rmc::write_trials_csv(out / "timing" / "trials.csv", rows, true);

  // Scaling view: time to threshold per trial, derived from the same rows.
  const auto cells = rmc::expand_cells(grid);
  std::vector<rmc::ScalingRow> scaling;
  for (const auto& t : rows) {
    rmc::ScalingRow r;
    r.cell = cells[t.cell];
    r.trial = t.trial;
    r.mu_star = t.mu_star;
    r.reached = t.iters_to_tol >= 0;
    r.seconds_to_tol = r.reached ? t.seconds_to_tol : t.seconds;
    r.iters_to_tol = r.reached ? t.iters_to_tol : t.iterations;
    scaling.push_back(r);
  }
  rmc::write_scaling_csv(out / "timing" / "scaling.csv", scaling, true);

  if (convergence) {
    // Traces on the first cell's first instance: every swept p plus a p = 1 baseline.
    const auto& c0 = cells.front();
    rmc::InstanceSpec spec = grid.base;
    spec.rho = c0.rho;
    spec.rank = c0.rank;
    spec.condition_number = c0.kappa;
    spec.sampling_p = 1.0;
    spec.seed = rmc::trial_instance_seed(grid.seed, 0, 0);
    const auto inst = rmc::make_instance(spec);
    std::vector<double> ps = grid.p_values.empty() ? std::vector<double>{grid.base.sampling_p}
                                                   : grid.p_values;
    if (std::find(ps.begin(), ps.end(), 1.0) == ps.end()) ps.push_back(1.0);
    std::vector<rmc::ConvergenceRun> runs;
    for (double p : ps) {
      rmc::SolverConfig cfg = grid.solver;
      cfg.target_rank = c0.rank;
      cfg.seed = rmc::trial_solver_seed(grid.seed, 0, 0);
      if (grid.time_limit > 0.0) cfg.time_limit = grid.time_limit;
      char label[32];
      std::snprintf(label, sizeof label, "p=%g", p);
      runs.push_back({label, p, cfg});
    }
    rmc::write_convergence_csv(out / "timing" / "convergence.csv",
                               rmc::run_convergence(inst.truth, runs));
  }
  return kExitOk;
}

int cmd_phase(const Shared& sh, const std::string& grid_path) {
  const auto grid = rmc::parse_grid(read_text(grid_path));
  const fs::path out = sh.out;
  std::vector<rmc::TrialRow> rows;
  const auto cells = rmc::run_phase_transition(grid, sh.jobs, &rows);
  rmc::write_trials_csv(out / "trials.csv", rows, false);
  rmc::write_cells_csv(out / "cells.csv", cells);
  return kExitOk;
}

int cmd_fgbg(const Shared& sh, const SolverFlags& sf, const std::string& pattern, double p) {
  const auto paths = expand_glob(pattern);
  const auto stack = rmc::load_frames(paths);
  const auto cfg = sf.config(sh.seed);
  const auto sep = rmc::separate(stack, p, cfg);
  const fs::path out = sh.out;
  rmc::write_frames(sep.background, out / "background", "frame");
  rmc::write_frames(rmc::foreground_masks(sep.foreground, stack.width, stack.height),
                    out / "foreground", "mask");
  rmc::io::write_sparse(out / "foreground.txt", sep.foreground);
  rmc::io::write_report(out / "report.json", sep.report, cfg);
  return finish(sep.report);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust matrix completion and robust PCA"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  Shared sh;
  auto add_shared = [&](CLI::App* sub) {
    sub->add_option("--seed", sh.seed, "random seed");
    sub->add_option("--out", sh.out, "output directory");
    sub->add_option("--jobs", sh.jobs, "worker threads")->check(CLI::PositiveNumber);
  };

  rmc::InstanceSpec spec;
  bool gen_full = false;
  auto* gen = app.add_subcommand("gen", "generate a synthetic instance");
  add_shared(gen);
  gen->add_option("--m", spec.m, "rows")->required()->check(CLI::PositiveNumber);
  gen->add_option("--n", spec.n, "columns")->required()->check(CLI::PositiveNumber);
  gen->add_option("--rank", spec.rank, "rank")->required()->check(CLI::PositiveNumber);
  gen->add_option("--p", spec.sampling_p, "sampling rate")->check(CLI::Range(0.0, 1.0));
  gen->add_option("--rho", spec.rho, "corruption fraction per row/column")
      ->check(CLI::Range(0.0, 1.0));
  gen->add_option("--kappa", spec.condition_number, "condition number")
      ->check(CLI::Range(1.0, 1e12));
  gen->add_option("--max-mu", spec.max_mu, "redraw factors until incoherence <= value");
  gen->add_flag("--random-sign", spec.random_sign, "random signs on corruptions");
  gen->add_flag("--full", gen_full, "also write the full matrix");

  SolverFlags solve_flags;
  std::string obs_path;
  std::optional<double> solve_p;
  auto* solve = app.add_subcommand("solve", "robust matrix completion from observed entries");
  add_shared(solve);
  solve->add_option("--obs", obs_path, "observed entries")->required()->check(CLI::ExistingFile);
  solve->add_option("--p", solve_p, "sampling rate (default |Omega|/mn)")
      ->check(CLI::Range(0.0, 1.0));
  solve_flags.add(solve);

  SolverFlags rpca_flags;
  std::string mat_path;
  double rpca_p = 1.0;
  bool two_pass = false;
  auto* rpca = app.add_subcommand("rpca", "robust PCA on a fully known matrix");
  add_shared(rpca);
  rpca->add_option("--mat", mat_path, "matrix file")->required()->check(CLI::ExistingFile);
  rpca->add_option("--p", rpca_p, "subsampling rate")->check(CLI::Range(0.0, 1.0));
  rpca->add_flag("--two-pass", two_pass, "threshold the full residual after solving");
  rpca_flags.add(rpca);

  std::string grid_path;
  bool convergence = false;
  auto* bench = app.add_subcommand("bench", "run an experiment grid with timings");
  add_shared(bench);
  bench->add_option("--grid", grid_path, "grid JSON")->required()->check(CLI::ExistingFile);
  bench->add_flag("--convergence", convergence, "also record error-vs-time traces");

  std::string phase_grid;
  auto* phase = app.add_subcommand("phase", "recovery probability over a grid");
  add_shared(phase);
  phase->add_option("--grid", phase_grid, "grid JSON")->required()->check(CLI::ExistingFile);

  SolverFlags fgbg_flags;
  std::string frames;
  double fgbg_p = 1.0;
  auto* fgbg = app.add_subcommand("fgbg", "background/foreground separation of PGM frames");
  add_shared(fgbg);
  fgbg->add_option("--frames", frames, "glob of PGM frames")->required();
  fgbg->add_option("--p", fgbg_p, "subsampling rate")->check(CLI::Range(0.0, 1.0));
  fgbg_flags.add(fgbg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    std::string name;
    json inputs;
    if (*gen) name = "gen";
    if (*solve) { name = "solve"; inputs["obs"] = obs_path; }
    if (*rpca) { name = "rpca"; inputs["mat"] = mat_path; }
    if (*bench) { name = "bench"; inputs["grid"] = grid_path; }
    if (*phase) { name = "phase"; inputs["grid"] = phase_grid; }
    if (*fgbg) { name = "fgbg"; inputs["frames"] = frames; }
    write_manifest(sh.out, name, args, sh.seed, inputs);

    if (*gen) return cmd_gen(sh, spec, gen_full);
    if (*solve) return cmd_solve(sh, solve_flags, obs_path, solve_p);
    if (*rpca) return cmd_rpca(sh, rpca_flags, mat_path, rpca_p, two_pass);
    if (*bench) return cmd_bench(sh, grid_path, convergence);
    if (*phase) return cmd_phase(sh, phase_grid);
    if (*fgbg) return cmd_fgbg(sh, fgbg_flags, frames, fgbg_p);
  } catch (const rmc::ArgumentError& e) {
    std::cerr << "rmc: " << e.what() << '\n';
    return kExitUsage;
  } catch (const rmc::DimensionError& e) {
    std::cerr << "rmc: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "rmc: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}
