#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "rmc/bench.hpp"
#include "rmc/errors.hpp"

using namespace rmc;
namespace fs = std::filesystem;

namespace {

ExperimentGrid tiny_grid() {
  ExperimentGrid g;
  g.base.m = g.base.n = 40;
  g.base.rank = 2;
  g.base.condition_number = 1.5;
  g.p_values = {0.5, 1.0};
  g.trials = 2;
  g.seed = 17;
  g.solver.epsilon = 1e-6;
  g.solver.mu = 1.0;
  g.time_limit = 20;
  return g;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Bench, ExpandCellsOrder) {
  ExperimentGrid g;
  g.p_values = {0.1, 0.2};
  g.rho_values = {0.0, 0.1, 0.2};
  const auto cells = expand_cells(g);
  ASSERT_EQ(cells.size(), 6u);
  EXPECT_EQ(cells[0].p, 0.1);
  EXPECT_EQ(cells[2].rho, 0.2);
  EXPECT_EQ(cells[3].p, 0.2);
  for (std::size_t i = 0; i < cells.size(); ++i) EXPECT_EQ(cells[i].index, i);
  g.p_values.clear();
  g.rho_values.clear();
  EXPECT_EQ(expand_cells(g).size(), 1u);
}

TEST(Bench, GridValidation) {
  ExperimentGrid g;
  g.trials = 0;
  EXPECT_THROW(g.validate(), ArgumentError);
  g.trials = 1;
  g.threshold = 0.0;
  EXPECT_THROW(g.validate(), ArgumentError);
}

TEST(Bench, SeedsDistinctPerTrial) {
  EXPECT_NE(trial_instance_seed(1, 0, 0), trial_instance_seed(1, 0, 1));
  EXPECT_NE(trial_instance_seed(1, 0, 0), trial_instance_seed(1, 1, 0));
  EXPECT_NE(trial_instance_seed(1, 0, 0), trial_solver_seed(1, 0, 0));
}

TEST(Bench, TrialsOrderedAndReproducible) {
  const auto g = tiny_grid();
  const auto rows = run_trials(g, 2);
  ASSERT_EQ(rows.size(), 4u);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].cell, i / 2);
    EXPECT_EQ(rows[i].trial, i % 2);
  }
  const auto cells = expand_cells(g);
  const TrialRow again = run_trial(g, cells[1], 1);
  EXPECT_EQ(again.rel_error, rows[3].rel_error);
  EXPECT_EQ(again.instance_seed, rows[3].instance_seed);
  const auto summary = summarize(g, rows);
  EXPECT_EQ(summary[1].fraction, 1.0);  // p = 1, no corruption
}

TEST(Bench, PhaseTransitionCsvDeterministicAcrossJobs) {
  const auto g = tiny_grid();
  const fs::path a = fs::temp_directory_path() / "rmc_bench_a.csv";
  const fs::path b = fs::temp_directory_path() / "rmc_bench_b.csv";
  write_trials_csv(a, run_trials(g, 1), false);
  write_trials_csv(b, run_trials(g, 3), false);
  EXPECT_EQ(slurp(a), slurp(b));
  fs::remove(a);
  fs::remove(b);
}

TEST(Bench, ScalingRowsAndTimeouts) {
  auto g = tiny_grid();
  g.p_values = {0.5};
  g.trials = 1;
  const auto rows = run_scaling(g, 1);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_TRUE(rows[0].reached);
  // unreachable cell: recorded as a row, not a crash
  g.threshold = 1e-300;
  g.solver.max_stages_override = 1;
  g.solver.inner_iters_override = 2;
  const auto bad = run_scaling(g, 1);
  ASSERT_EQ(bad.size(), 1u);
  EXPECT_FALSE(bad[0].reached);
}

TEST(Bench, ConvergenceTraces) {
  InstanceSpec spec;
  spec.m = spec.n = 50;
  spec.rank = 2;
  spec.seed = 3;
  const auto inst = make_instance(spec);
  EXPECT_TRUE(run_convergence(inst.truth, {}).empty());
  SolverConfig c;
  c.target_rank = 2;
  c.epsilon = 1e-6;
  c.mu = 1.0;
  const auto rows = run_convergence(inst.truth, {{"p=1", 1.0, c}, {"p=0.5", 0.5, c}});
  ASSERT_FALSE(rows.empty());
  EXPECT_EQ(rows.front().label, "p=1");
  EXPECT_EQ(rows.back().label, "p=0.5");
  EXPECT_LT(rows.back().error, 1e-4);
}

TEST(Bench, GridJsonRoundTrip) {
  const std::string text = R"({"m": 30, "n": 20, "rank": 2, "sweep": {"p": [0.2, 0.4]},
    "trials": 3, "seed": 9, "solver": {"epsilon": 1e-5, "variant": "rank"}})";
  const auto g = parse_grid(text);
  EXPECT_EQ(g.base.m, 30);
  EXPECT_EQ(g.p_values.size(), 2u);
  EXPECT_EQ(g.solver.variant, Variant::kRRmc);
  const auto g2 = parse_grid(grid_to_json(g));
  EXPECT_EQ(grid_to_json(g2), grid_to_json(g));
  EXPECT_THROW(parse_grid(R"({"bogus": 1})"), FormatError);
  EXPECT_THROW(parse_grid("{"), FormatError);
}
