#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "rmc/datagen.hpp"
#include "rmc/solver.hpp"

namespace rmc {

struct ExperimentGrid {
  InstanceSpec base;
  // Swept axes; an empty axis holds the base value.
  std::vector<double> p_values;
  std::vector<double> rho_values;
  std::vector<Index> ranks;
  std::vector<double> kappas;
  std::size_t trials = 1;
  double threshold = 1e-3;   ///< success: relative Frobenius error <= threshold
  double time_limit = 0.0;   ///< seconds per trial, 0 = none
  SolverConfig solver;       ///< target_rank is taken from the cell
  std::uint64_t seed = 0;

  void validate() const;
};

struct GridCell {
  std::size_t index = 0;
  double p = 0.0;
  double rho = 0.0;
  Index rank = 0;
  double kappa = 1.0;
};

/// Cartesian product of the swept axes, p varying slowest.
std::vector<GridCell> expand_cells(const ExperimentGrid& grid);

struct TrialRow {
  std::size_t cell = 0;
  std::size_t trial = 0;
  std::uint64_t instance_seed = 0;
  std::uint64_t solver_seed = 0;
  double p = 0.0;
  double rho = 0.0;
  Index rank = 0;
  double kappa = 1.0;
  double mu_star = 0.0;
  double rel_error = 0.0;
  bool success = false;
  std::string termination;
  Index stages = 0;
  Index iterations = 0;
  /// First iteration index whose error met the threshold, -1 if none.
  Index iters_to_tol = -1;
  double seconds = 0.0;
  double seconds_to_tol = -1.0;
};

struct CellSummary {
  GridCell cell;
  std::size_t successes = 0;
  std::size_t trials = 0;
  double fraction = 0.0;
};

/// Seeds of trial `trial` in cell `cell`.
std::uint64_t trial_instance_seed(std::uint64_t grid_seed, std::size_t cell, std::size_t trial);
std::uint64_t trial_solver_seed(std::uint64_t grid_seed, std::size_t cell, std::size_t trial);

/// Runs every (cell, trial) on up to `jobs` threads. Rows come back ordered
/// by (cell, trial) regardless of completion order.
std::vector<TrialRow> run_trials(const ExperimentGrid& grid, std::size_t jobs);
/// Reruns a single trial; reproduces the matching row of run_trials.
TrialRow run_trial(const ExperimentGrid& grid, const GridCell& cell, std::size_t trial);

std::vector<CellSummary> summarize(const ExperimentGrid& grid, const std::vector<TrialRow>& rows);

/// Success fraction per cell.
std::vector<CellSummary> run_phase_transition(const ExperimentGrid& grid, std::size_t jobs,
                                              std::vector<TrialRow>* rows = nullptr);

struct ScalingRow {
  GridCell cell;
  std::size_t trial = 0;
  double mu_star = 0.0;
  bool reached = false;  ///< false rows are timeouts or failures
  double seconds_to_tol = 0.0;
  Index iters_to_tol = 0;
};

/// Time to reach the grid threshold per (cell, trial).
std::vector<ScalingRow> run_scaling(const ExperimentGrid& grid, std::size_t jobs);

struct ConvergenceRun {
  std::string label;
  double p = 1.0;  ///< subsampling rate applied to the full matrix
  SolverConfig config;
};

struct ConvergenceRow {
  std::string label;
  std::uint64_t seed = 0;
  Index iteration = 0;
  double seconds = 0.0;
  double error = 0.0;  ///< ||L_t - L*||_F
  std::string note;    ///< solver error message, if the run failed
};

/// Per-iteration (time, error) traces for each run on the same instance.
std::vector<ConvergenceRow> run_convergence(const GroundTruth& truth,
                                            const std::vector<ConvergenceRun>& runs);

// Output. Reals are written as %.17e.
void write_trials_csv(const std::filesystem::path& path, const std::vector<TrialRow>& rows,
                      bool with_timing);
void write_cells_csv(const std::filesystem::path& path, const std::vector<CellSummary>& cells);
void write_scaling_csv(const std::filesystem::path& path, const std::vector<ScalingRow>& rows,
                       bool with_timing);
void write_convergence_csv(const std::filesystem::path& path,
                           const std::vector<ConvergenceRow>& rows);

/// Grid from JSON text; unknown keys are rejected. See README for the schema.
ExperimentGrid parse_grid(const std::string& json_text);
std::string grid_to_json(const ExperimentGrid& grid);

}  // namespace rmc
