#include <benchmark/benchmark.h>

#include <random>

#include "rmc/datagen.hpp"
#include "rmc/operators.hpp"
#include "rmc/solver.hpp"
#include "rmc/spectral.hpp"

using namespace rmc;

namespace {

Instance bench_instance(Index n, double p) {
  InstanceSpec spec;
  spec.m = spec.n = n;
  spec.rank = 5;
  spec.condition_number = 2.0;
  spec.rho = 0.01;
  spec.sampling_p = p;
  spec.seed = 1;
  return make_instance(spec);
}

// Gradient-step iterate: rank-5 part plus the scaled observations.
StructuredMatrix step_matrix(const Instance& inst) {
  return StructuredMatrix(inst.truth.l_star, 1.0, inst.obs.samples(), 1.0 / inst.obs.rate());
}

}  // namespace

static void BM_StructuredMatvec(benchmark::State& state) {
  const auto inst = bench_instance(state.range(0), 0.2);
  const auto a = step_matrix(inst);
  std::mt19937_64 rng(2);
  std::normal_distribution<double> nd;
  Eigen::MatrixXd x(a.cols(), 16);
  for (Index i = 0; i < x.size(); ++i) x.data()[i] = nd(rng);
  for (auto _ : state) benchmark::DoNotOptimize(a.multiply(x));
  state.SetItemsProcessed(state.iterations() * 16);
}
BENCHMARK(BM_StructuredMatvec)->Arg(400)->Arg(1000)->Arg(2000);

static void BM_TruncatedSvd(benchmark::State& state) {
  const auto inst = bench_instance(state.range(0), 0.2);
  const auto a = step_matrix(inst);
  SvdOptions opts;
  opts.tol = 1e-6;
  for (auto _ : state) {
    opts.seed++;
    benchmark::DoNotOptimize(truncated_svd_with_residual(a, 6, opts, 5));
  }
}
BENCHMARK(BM_TruncatedSvd)->Arg(400)->Arg(1000)->Unit(benchmark::kMillisecond);

static void BM_InnerStep(benchmark::State& state) {
  const auto inst = bench_instance(state.range(0), 0.2);
  SolverConfig c;
  c.target_rank = 5;
  c.mu = 1.0;
  c = resolve_defaults(c, inst.obs);
  const IndexSet omega = inst.obs.omega();
  SolverState st;
  st.l = inst.truth.l_star;
  st.s = SparseCoo(inst.obs.rows(), inst.obs.cols());
  st.zeta = 0.01;
  st.stage_rank = 5;
  for (auto _ : state) {
    SolverState copy = st;
    inner_step(copy, inst.obs, omega, c);
    benchmark::DoNotOptimize(copy.zeta);
  }
}
BENCHMARK(BM_InnerStep)->Arg(400)->Arg(1000)->Unit(benchmark::kMillisecond);

static void BM_HardThresholdObserved(benchmark::State& state) {
  const auto inst = bench_instance(state.range(0), 0.2);
  const IndexSet omega = inst.obs.omega();
  for (auto _ : state) {
    const SparseCoo l = eval_lowrank_entries(inst.truth.l_star, omega);
    benchmark::DoNotOptimize(hard_threshold(l, 1e-3));
  }
}
BENCHMARK(BM_HardThresholdObserved)->Arg(400)->Arg(1000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
