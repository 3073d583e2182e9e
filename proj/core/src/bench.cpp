#include "rmc/bench.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <thread>

#include <nlohmann/json.hpp>

#include "rmc/errors.hpp"
#include "rmc/operators.hpp"
#include "rmc/seeding.hpp"

namespace rmc {
namespace {

using json = nlohmann::ordered_json;

std::string sci(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17e", v);
  return buf;
}

std::ofstream open_csv(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  return out;
}

// Runs fn(i) for i in [0, count) on up to `jobs` threads.
void parallel_for(std::size_t count, std::size_t jobs, const std::function<void(std::size_t)>& fn) {
  jobs = std::max<std::size_t>(1, std::min(jobs, count));
  if (jobs == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(jobs);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < jobs; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = next++; i < count; i = next++) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

template <typename T>
std::vector<T> axis_or(const std::vector<T>& axis, T fallback) {
  return axis.empty() ? std::vector<T>{fallback} : axis;
}

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.count(it.key())) {
      throw FormatError("grid: unknown key '" + it.key() + "' in " + where);
    }
  }
}

}  // namespace

void ExperimentGrid::validate() const {
  base.validate();
  if (trials < 1) throw ArgumentError("grid: trials must be >= 1");
  if (!(threshold > 0.0)) throw ArgumentError("grid: threshold must be > 0");
  if (!(time_limit >= 0.0)) throw ArgumentError("grid: time limit must be >= 0");
  for (double p : p_values) {
    if (!(p > 0.0 && p <= 1.0)) throw ArgumentError("grid: p values must be in (0, 1]");
  }
  for (double r : rho_values) {
    if (!(r >= 0.0 && r <= 1.0)) throw ArgumentError("grid: rho values must be in [0, 1]");
  }
  for (Index r : ranks) {
    if (r < 1 || r > std::min(base.m, base.n)) throw ArgumentError("grid: rank out of range");
  }
  for (double k : kappas) {
    if (!(k >= 1.0)) throw ArgumentError("grid: kappa values must be >= 1");
  }
  SolverConfig s = solver;
  s.target_rank = 1;
  s.validate();
}

std::vector<GridCell> expand_cells(const ExperimentGrid& grid) {
  std::vector<GridCell> cells;
  for (double p : axis_or(grid.p_values, grid.base.sampling_p)) {
    for (double rho : axis_or(grid.rho_values, grid.base.rho)) {
      for (Index r : axis_or(grid.ranks, grid.base.rank)) {
        for (double k : axis_or(grid.kappas, grid.base.condition_number)) {
          cells.push_back({cells.size(), p, rho, r, k});
        }
      }
    }
  }
  return cells;
}

std::uint64_t trial_instance_seed(std::uint64_t grid_seed, std::size_t cell, std::size_t trial) {
  return derive_seed({grid_seed, cell, trial, 0});
}

std::uint64_t trial_solver_seed(std::uint64_t grid_seed, std::size_t cell, std::size_t trial) {
  return derive_seed({grid_seed, cell, trial, 1});
}

TrialRow run_trial(const ExperimentGrid& grid, const GridCell& cell, std::size_t trial) {
  TrialRow row;
  row.cell = cell.index;
  row.trial = trial;
  row.instance_seed = trial_instance_seed(grid.seed, cell.index, trial);
  row.solver_seed = trial_solver_seed(grid.seed, cell.index, trial);
  row.p = cell.p;
  row.rho = cell.rho;
  row.rank = cell.rank;
  row.kappa = cell.kappa;

  InstanceSpec spec = grid.base;
  spec.sampling_p = cell.p;
  spec.rho = cell.rho;
  spec.rank = cell.rank;
  spec.condition_number = cell.kappa;
  spec.seed = row.instance_seed;

  try {
    const Instance inst = make_instance(spec);
    row.mu_star = inst.truth.mu_star;
    const double scale = frob_norm(inst.truth.l_star);

    SolverConfig cfg = grid.solver;
    cfg.target_rank = cell.rank;
    cfg.seed = row.solver_seed;
    if (grid.time_limit > 0.0) cfg.time_limit = grid.time_limit;
    cfg.on_iteration = [&](const IterationRecord& rec, const LowRankFactors& l) {
      if (row.iters_to_tol >= 0) return;
      if (frob_error(l, inst.truth.l_star) <= grid.threshold * scale) {
        row.iters_to_tol = row.iterations;
        row.seconds_to_tol = rec.wall_time;
      }
      ++row.iterations;
    };
    row.iterations = 0;
    const SolverResult res = solve(inst.obs, cfg);
    row.rel_error = frob_error(res.l, inst.truth.l_star) / scale;
    row.termination = std::string(to_string(res.report.termination));
    row.stages = res.report.stages;
    row.iterations = res.report.inner_iterations;
    row.seconds = res.report.elapsed;
    row.success = row.rel_error <= grid.threshold;
  } catch (const std::exception& e) {
    row.rel_error = std::numeric_limits<double>::infinity();
    row.success = false;
    row.termination = std::string("error: ") + e.what();
  }
  return row;
}

std::vector<TrialRow> run_trials(const ExperimentGrid& grid, std::size_t jobs) {
  grid.validate();
  const auto cells = expand_cells(grid);
  std::vector<TrialRow> rows(cells.size() * grid.trials);
  parallel_for(rows.size(), jobs, [&](std::size_t i) {
    rows[i] = run_trial(grid, cells[i / grid.trials], i % grid.trials);
  });
  return rows;
}

std::vector<CellSummary> summarize(const ExperimentGrid& grid, const std::vector<TrialRow>& rows) {
  const auto cells = expand_cells(grid);
  std::vector<CellSummary> out(cells.size());
  for (std::size_t c = 0; c < cells.size(); ++c) out[c].cell = cells[c];
  for (const auto& r : rows) {
    auto& s = out.at(r.cell);
    ++s.trials;
    if (r.success) ++s.successes;
  }
  for (auto& s : out) {
    s.fraction = s.trials ? static_cast<double>(s.successes) / static_cast<double>(s.trials) : 0.0;
  }
  return out;
}

std::vector<CellSummary> run_phase_transition(const ExperimentGrid& grid, std::size_t jobs,
                                              std::vector<TrialRow>* rows) {
  auto trials = run_trials(grid, jobs);
  auto out = summarize(grid, trials);
  if (rows) *rows = std::move(trials);
  return out;
}

std::vector<ScalingRow> run_scaling(const ExperimentGrid& grid, std::size_t jobs) {
  const auto cells = expand_cells(grid);
  const auto trials = run_trials(grid, jobs);
  std::vector<ScalingRow> out;
  out.reserve(trials.size());
  for (const auto& t : trials) {
    ScalingRow r;
    r.cell = cells[t.cell];
    r.trial = t.trial;
    r.mu_star = t.mu_star;
    r.reached = t.iters_to_tol >= 0;
    r.seconds_to_tol = r.reached ? t.seconds_to_tol : t.seconds;
    r.iters_to_tol = r.reached ? t.iters_to_tol : t.iterations;
    out.push_back(r);
  }
  return out;
}

std::vector<ConvergenceRow> run_convergence(const GroundTruth& truth,
                                            const std::vector<ConvergenceRun>& runs) {
  std::vector<ConvergenceRow> out;
  if (runs.empty()) return out;
  const Eigen::MatrixXd full = full_matrix(truth);
  for (const auto& run : runs) {
    try {
      const IndexSet omega = bernoulli_sample(full.rows(), full.cols(), run.p,
                                              derive_seed({run.config.seed, 0x0b5e}));
      if (omega.empty()) throw ArgumentError("empty sample");
      const ObservationSet obs(project_observed(omega, full), run.p);
      SolverConfig cfg = run.config;
      cfg.on_iteration = [&](const IterationRecord& rec, const LowRankFactors& l) {
        out.push_back({run.label, run.config.seed, static_cast<Index>(out.size()), rec.wall_time,
                       frob_error(l, truth.l_star), ""});
      };
      const std::size_t first = out.size();
      solve(obs, cfg);
      for (std::size_t i = first; i < out.size(); ++i) out[i].iteration = static_cast<Index>(i - first);
    } catch (const std::exception& e) {
      out.push_back({run.label, run.config.seed, -1, 0.0, std::nan(""), e.what()});
    }
  }
  return out;
}

void write_trials_csv(const std::filesystem::path& path, const std::vector<TrialRow>& rows,
                      bool with_timing) {
  auto out = open_csv(path);
  out << "cell,trial,instance_seed,solver_seed,p,rho,rank,kappa,mu_star,rel_error,success,"
         "termination,stages,iterations,iters_to_tol";
  if (with_timing) out << ",seconds,seconds_to_tol";
  out << '\n';
  for (const auto& r : rows) {
    out << r.cell << ',' << r.trial << ',' << r.instance_seed << ',' << r.solver_seed << ','
        << sci(r.p) << ',' << sci(r.rho) << ',' << r.rank << ',' << sci(r.kappa) << ','
        << sci(r.mu_star) << ',' << sci(r.rel_error) << ',' << (r.success ? 1 : 0) << ",\""
        << r.termination << "\"," << r.stages << ',' << r.iterations << ',' << r.iters_to_tol;
    if (with_timing) out << ',' << sci(r.seconds) << ',' << sci(r.seconds_to_tol);
    out << '\n';
  }
}

void write_cells_csv(const std::filesystem::path& path, const std::vector<CellSummary>& cells) {
  auto out = open_csv(path);
  out << "cell,p,rho,rank,kappa,successes,trials,fraction\n";
  for (const auto& c : cells) {
    out << c.cell.index << ',' << sci(c.cell.p) << ',' << sci(c.cell.rho) << ',' << c.cell.rank
        << ',' << sci(c.cell.kappa) << ',' << c.successes << ',' << c.trials << ','
        << sci(c.fraction) << '\n';
  }
}

void write_scaling_csv(const std::filesystem::path& path, const std::vector<ScalingRow>& rows,
                       bool with_timing) {
  auto out = open_csv(path);
  out << "cell,trial,p,rho,rank,kappa,mu_star,reached,iters_to_tol";
  if (with_timing) out << ",seconds_to_tol";
  out << '\n';
  for (const auto& r : rows) {
    out << r.cell.index << ',' << r.trial << ',' << sci(r.cell.p) << ',' << sci(r.cell.rho) << ','
        << r.cell.rank << ',' << sci(r.cell.kappa) << ',' << sci(r.mu_star) << ','
        << (r.reached ? 1 : 0) << ',' << r.iters_to_tol;
    if (with_timing) out << ',' << sci(r.seconds_to_tol);
    out << '\n';
  }
}

void write_convergence_csv(const std::filesystem::path& path,
                           const std::vector<ConvergenceRow>& rows) {
  auto out = open_csv(path);
  out << "label,seed,iteration,seconds,error,note\n";
  for (const auto& r : rows) {
    out << r.label << ',' << r.seed << ',' << r.iteration << ',' << sci(r.seconds) << ','
        << sci(r.error) << ",\"" << r.note << "\"\n";
  }
}

ExperimentGrid parse_grid(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw FormatError(std::string("grid: ") + e.what());
  }
  if (!j.is_object()) throw FormatError("grid: top level must be an object");
  check_keys(j,
             {"m", "n", "rank", "kappa", "sigma1", "rho", "p", "corruption_lo", "corruption_hi",
              "random_sign", "max_mu", "sweep", "trials", "threshold", "time_limit", "seed",
              "solver"},
             "grid");
  ExperimentGrid g;
  try {
    InstanceSpec& b = g.base;
    b.m = j.value("m", b.m);
    b.n = j.value("n", b.n);
    b.rank = j.value("rank", b.rank);
    b.condition_number = j.value("kappa", b.condition_number);
    b.sigma1 = j.value("sigma1", b.sigma1);
    b.rho = j.value("rho", b.rho);
    b.sampling_p = j.value("p", b.sampling_p);
    if (j.contains("corruption_lo")) b.corruption_lo = j["corruption_lo"].get<double>();
    if (j.contains("corruption_hi")) b.corruption_hi = j["corruption_hi"].get<double>();
    b.random_sign = j.value("random_sign", b.random_sign);
    if (j.contains("max_mu")) b.max_mu = j["max_mu"].get<double>();
    if (j.contains("sweep")) {
      const json& s = j["sweep"];
      check_keys(s, {"p", "rho", "rank", "kappa"}, "sweep");
      if (s.contains("p")) g.p_values = s["p"].get<std::vector<double>>();
      if (s.contains("rho")) g.rho_values = s["rho"].get<std::vector<double>>();
      if (s.contains("rank")) g.ranks = s["rank"].get<std::vector<Index>>();
      if (s.contains("kappa")) g.kappas = s["kappa"].get<std::vector<double>>();
    }
    g.trials = j.value("trials", g.trials);
    g.threshold = j.value("threshold", g.threshold);
    g.time_limit = j.value("time_limit", g.time_limit);
    g.seed = j.value("seed", g.seed);
    if (j.contains("solver")) {
      const json& s = j["solver"];
      check_keys(s,
                 {"epsilon", "mu", "eta", "sigma", "variant", "split_mode", "step_scale",
                  "threshold_decay", "track_contraction", "inner_iters", "max_stages"},
                 "solver");
      SolverConfig& c = g.solver;
      c.epsilon = s.value("epsilon", c.epsilon);
      c.mu = s.value("mu", c.mu);
      if (s.contains("eta")) c.eta = s["eta"].get<double>();
      if (s.contains("sigma")) c.sigma = s["sigma"].get<double>();
      if (s.contains("variant")) c.variant = parse_variant(s["variant"].get<std::string>());
      if (s.contains("split_mode")) {
        c.split_mode = parse_split_mode(s["split_mode"].get<std::string>());
      }
      c.step_scale = s.value("step_scale", c.step_scale);
      c.threshold_decay = s.value("threshold_decay", c.threshold_decay);
      c.track_contraction = s.value("track_contraction", c.track_contraction);
      if (s.contains("inner_iters")) c.inner_iters_override = s["inner_iters"].get<Index>();
      if (s.contains("max_stages")) c.max_stages_override = s["max_stages"].get<Index>();
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("grid: ") + e.what());
  }
  g.validate();
  return g;
}

std::string grid_to_json(const ExperimentGrid& g) {
  json j;
  j["m"] = g.base.m;
  j["n"] = g.base.n;
  j["rank"] = g.base.rank;
  j["kappa"] = g.base.condition_number;
  j["sigma1"] = g.base.sigma1;
  j["rho"] = g.base.rho;
  j["p"] = g.base.sampling_p;
  if (g.base.corruption_lo) j["corruption_lo"] = *g.base.corruption_lo;
  if (g.base.corruption_hi) j["corruption_hi"] = *g.base.corruption_hi;
  j["random_sign"] = g.base.random_sign;
  if (g.base.max_mu) j["max_mu"] = *g.base.max_mu;
  json sweep = json::object();
  if (!g.p_values.empty()) sweep["p"] = g.p_values;
  if (!g.rho_values.empty()) sweep["rho"] = g.rho_values;
  if (!g.ranks.empty()) sweep["rank"] = g.ranks;
  if (!g.kappas.empty()) sweep["kappa"] = g.kappas;
  j["sweep"] = sweep;
  j["trials"] = g.trials;
  j["threshold"] = g.threshold;
  j["time_limit"] = g.time_limit;
  j["seed"] = g.seed;
  json s;
  s["epsilon"] = g.solver.epsilon;
  s["mu"] = g.solver.mu;
  if (g.solver.eta) s["eta"] = *g.solver.eta;
  if (g.solver.sigma) s["sigma"] = *g.solver.sigma;
  s["variant"] = std::string(to_string(g.solver.variant));
  s["split_mode"] = std::string(to_string(g.solver.split_mode));
  s["step_scale"] = g.solver.step_scale;
  s["threshold_decay"] = g.solver.threshold_decay;
  s["track_contraction"] = g.solver.track_contraction;
  if (g.solver.inner_iters_override) s["inner_iters"] = *g.solver.inner_iters_override;
  if (g.solver.max_stages_override) s["max_stages"] = *g.solver.max_stages_override;
  j["solver"] = s;
  return j.dump(2) + "\n";
}

}  // namespace rmc
