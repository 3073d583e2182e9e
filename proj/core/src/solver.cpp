#include "rmc/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "rmc/errors.hpp"
#include "rmc/operators.hpp"

namespace rmc {
namespace {

using Clock = std::chrono::steady_clock;

// Values diverging past this multiple of sigma end the run.
constexpr double kBlowUp = 1e8;
constexpr double kStagnation = 0.5;

std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Truncated SVD that accepts a best effort within `fallback_tol`.
SvdResult svd_with_fallback(const StructuredMatrix& a, Index k, const SvdOptions& opts,
                            Index checked, double fallback_tol, Index& fallbacks) {
  try {
    return truncated_svd_with_residual(a, k, opts, checked);
  } catch (const SvdConvergenceError& e) {
    if (!(e.residual() <= fallback_tol)) throw;
    ++fallbacks;
    return e.best();
  }
}

// Leading `count` singular values padded with zeros past min(m, n).
std::vector<double> leading_values(const StructuredMatrix& a, Index count, const SvdOptions& opts,
                                   double fallback_tol, Index& fallbacks) {
  const Index small = std::min(a.rows(), a.cols());
  const SvdResult res = svd_with_fallback(a, std::min(count, small), opts, -1, fallback_tol, fallbacks);
  const auto& s = res.factors.sigma();
  std::vector<double> out(s.data(), s.data() + s.size());
  out.resize(static_cast<std::size_t>(count), 0.0);
  return out;
}

double seconds(Clock::duration d) { return std::chrono::duration<double>(d).count(); }

bool all_finite(const SparseCoo& s) {
  for (const auto& e : s.entries()) {
    if (!std::isfinite(e.value)) return false;
  }
  return true;
}

SolverResult run(const ObservationSet& obs, const SolverConfig& input) {
  input.validate();
  if (obs.size() == 0) throw ArgumentError("solver: no observations");
  const Index m = obs.rows();
  const Index n = obs.cols();
  const Index r = input.target_rank;
  if (r > std::min(m, n)) {
    throw ArgumentError("solver: target rank " + std::to_string(r) + " exceeds min(m, n) = " +
                        std::to_string(std::min(m, n)));
  }
  const SolverConfig cfg = resolve_defaults(input, obs);
  const bool pg = cfg.variant == Variant::kPgRmc;
  const auto start = Clock::now();
  Clock::duration paused{};
  auto elapsed = [&] { return seconds(Clock::now() - start - paused); };

  SolverResult out{LowRankFactors(m, n), {}};
  SolverReport& rep = out.report;
  rep.eta = *cfg.eta;
  rep.sigma = *cfg.sigma;
  rep.inner_iters = default_inner_iters(cfg);
  const Index T = rep.inner_iters;
  rep.max_stages = cfg.max_stages_override.value_or(pg ? T : r);

  const auto num_sets = static_cast<std::size_t>(rep.max_stages * (T + 1) + 1);
  const SampleSets sets =
      split_samples(obs.omega(), obs.rate(),
                    cfg.split_mode == SplitMode::kNoSplit ? obs.rate()
                                                          : per_set_rate(obs.rate(), num_sets),
                    num_sets, cfg.split_mode, mix(cfg.seed ^ 0x5eed5eedULL));
  std::size_t next_set = 0;
  auto take_set = [&]() -> const IndexSet& {
    const IndexSet& s = *sets[next_set++];
    if (s.empty()) throw ArgumentError("solver: sample set " + std::to_string(next_set - 1) +
                                       " is empty; too few observations for this split");
    return s;
  };

  SolverState state;
  state.l = LowRankFactors(m, n);
  state.s = SparseCoo(m, n);
  state.zeta = rep.eta * rep.sigma;
  state.m_struct = init_m0(obs, take_set(), state.zeta);

  SvdOptions svd = cfg.svd;
  svd.seed = mix(cfg.seed ^ 0xa5a5a5a5ULL);
  std::vector<double> sv = leading_values(state.m_struct, r + 1, svd, cfg.svd_fallback_tol, state.svd_fallbacks);
  const double stop = cfg.epsilon / (2.0 * rep.eta * static_cast<double>(pg ? n : m));

  Index prev_rank = 0;
  Index iter = 0;
  bool finished = false;
  while (!finished) {
    rep.final_residual_sigma = sv[static_cast<std::size_t>(prev_rank)];
    if (!(sv[static_cast<std::size_t>(prev_rank)] > stop)) {
      rep.termination =
          rep.stages == 0 ? Termination::kToleranceAtInit : Termination::kToleranceMet;
      break;
    }
    if (rep.stages >= rep.max_stages) {
      rep.termination = Termination::kStageCap;
      break;
    }
    ++rep.stages;
    state.stage = rep.stages;
    state.stage_rank = pg ? std::min(r, select_stage_rank(sv, prev_rank)) : std::min(r, rep.stages);

    for (Index t = 0; t <= T; ++t) {
      if (cfg.time_limit > 0.0 && elapsed() > cfg.time_limit) {
        rep.termination = Termination::kTimeLimit;
        finished = true;
        break;
      }
      const LowRankFactors prev_l = state.l;
      const double zeta_used = state.zeta;
      state.inner_t = t;
      SvdOptions step_svd = cfg.svd;
      step_svd.seed = mix(cfg.seed + static_cast<std::uint64_t>(iter));
      SolverConfig step_cfg = cfg;
      step_cfg.svd = step_svd;
      try {
        inner_step(state, obs, take_set(), step_cfg);
      } catch (const SvdConvergenceError& e) {
        if (!std::isfinite(e.residual())) {
          state.l = prev_l;
          rep.termination = Termination::kDiverged;
          finished = true;
          break;
        }
        throw SvdConvergenceError("solver stage " + std::to_string(state.stage) + " t " +
                                      std::to_string(t) + ": " + e.what(),
                                  e.best());
      }
      ++iter;

      IterationRecord rec;
      rec.stage = state.stage;
      rec.t = t;
      rec.stage_rank = state.stage_rank;
      rec.zeta = zeta_used;
      const auto k = static_cast<std::size_t>(state.stage_rank);
      rec.sigma_k = state.singvals[k - 1];
      rec.sigma_k1 = state.singvals[k];
      rec.support = state.s.nnz();
      rec.step_change = state.step_change;
      rec.wall_time = elapsed();
      rep.iterations.push_back(rec);
      if (cfg.record_supports) rep.supports.push_back(state.s.support());
      if (cfg.on_iteration) {
        const auto before = Clock::now();
        cfg.on_iteration(rec, state.l);
        paused += Clock::now() - before;
      }

      if (!std::isfinite(rec.sigma_k) || state.singvals[0] > kBlowUp * rep.sigma) {
        state.l = prev_l;
        rep.termination = Termination::kDiverged;
        finished = true;
        break;
      }
      // A still iterate only ends the stage once the threshold has stopped
      // shrinking; before that, entries below zeta are still leaking into L.
      const bool schedule_done = cfg.adaptive_lambda || state.decay * rec.sigma_k <= rec.sigma_k1;
      if (schedule_done && rec.step_change <= cfg.stall_factor * cfg.epsilon) {
        ++rep.stalls;
        break;
      }
    }
    if (finished) break;

    // Stopping rule and next rank read the carried-over M.
    const double before = sv[static_cast<std::size_t>(r)];
    if (state.stage_rank == r) {
      sv = state.singvals;
    } else {
      svd.seed = mix(svd.seed);
      sv = leading_values(state.m_struct, r + 1, svd, cfg.svd_fallback_tol, state.svd_fallbacks);
    }
    // Repeating full-rank stages restarts the threshold schedule; if the last
    // one did not at least halve sigma_{r+1}(M), more of them will not help.
    if (prev_rank == r && state.stage_rank == r &&
        sv[static_cast<std::size_t>(r)] > kStagnation * before &&
        sv[static_cast<std::size_t>(r)] > stop) {
      rep.final_residual_sigma = sv[static_cast<std::size_t>(r)];
      rep.termination = Termination::kStagnated;
      break;
    }
    prev_rank = state.stage_rank;
  }

  rep.inner_iterations = static_cast<Index>(rep.iterations.size());
  rep.final_zeta = state.zeta;
  rep.svd_fallbacks = state.svd_fallbacks;
  rep.elapsed = elapsed();
  out.l = std::move(state.l);
  return out;
}

}  // namespace

Variant parse_variant(std::string_view name) {
  if (name == "pg") return Variant::kPgRmc;
  if (name == "rank") return Variant::kRRmc;
  throw ArgumentError("unknown variant '" + std::string(name) + "' (pg|rank)");
}

std::string_view to_string(Variant v) { return v == Variant::kPgRmc ? "pg" : "rank"; }

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::kToleranceAtInit:
      return "tolerance met at init";
    case Termination::kToleranceMet:
      return "tolerance met";
    case Termination::kStageCap:
      return "stage cap";
    case Termination::kStagnated:
      return "stagnated";
    case Termination::kTimeLimit:
      return "time limit";
    case Termination::kDiverged:
      return "diverged";
  }
  return "unknown";
}

void SolverConfig::validate() const {
  if (!(epsilon > 0.0)) throw ArgumentError("epsilon must be > 0");
  if (target_rank < 1) throw ArgumentError("target rank must be >= 1");
  if (!(mu > 0.0)) throw ArgumentError("mu must be > 0");
  if (eta && !(*eta > 0.0)) throw ArgumentError("eta must be > 0");
  if (sigma && !(*sigma > 0.0)) throw ArgumentError("sigma must be > 0");
  if (inner_iters_override && *inner_iters_override < 0) {
    throw ArgumentError("inner iteration override must be >= 0");
  }
  if (max_stages_override && *max_stages_override < 1) {
    throw ArgumentError("stage cap override must be >= 1");
  }
  if (!(step_scale > 0.0 && step_scale <= 2.0)) throw ArgumentError("step scale must be in (0, 2]");
  if (!(threshold_decay > 0.0 && threshold_decay < 1.0)) {
    throw ArgumentError("threshold decay must be in (0, 1)");
  }
  if (adaptive_lambda && !(*adaptive_lambda > 0.0)) {
    throw ArgumentError("adaptive lambda must be > 0");
  }
  if (!(svd_fallback_tol >= 0.0)) throw ArgumentError("svd fallback tolerance must be >= 0");
  if (!(stall_factor >= 0.0)) throw ArgumentError("stall factor must be >= 0");
  if (!(time_limit >= 0.0)) throw ArgumentError("time limit must be >= 0");
  svd.validate();
}

SolverConfig resolve_defaults(const SolverConfig& config, const ObservationSet& obs) {
  SolverConfig out = config;
  const double r = static_cast<double>(config.target_rank);
  if (!out.eta) out.eta = 4.0 * config.mu * config.mu * r / static_cast<double>(obs.rows());
  if (!out.sigma) {
    SvdOptions opts = config.svd;
    opts.seed = config.seed;
    const double est = spectral_norm_estimate(
        StructuredMatrix::from_sparse(obs.samples(), 1.0 / obs.rate()), opts);
    // An all-zero input still needs a positive scale.
    out.sigma = est > 0.0 ? 1.05 * est : config.epsilon;
  }
  return out;
}

Index default_inner_iters(const SolverConfig& config) {
  if (config.inner_iters_override) return std::max<Index>(1, *config.inner_iters_override);
  if (!config.sigma) throw ArgumentError("default_inner_iters: sigma is unresolved");
  const double arg = 10.0 * config.mu * config.mu * static_cast<double>(config.target_rank) *
                     *config.sigma / config.epsilon;
  const double t = std::ceil(10.0 * std::log(arg));
  if (!(t >= 1.0)) return 1;
  return static_cast<Index>(t);
}

StructuredMatrix init_m0(const ObservationSet& obs, const IndexSet& omega0, double zeta) {
  if (omega0.empty()) throw ArgumentError("init_m0: omega0 is empty");
  if (zeta < 0.0) throw ArgumentError("init_m0: zeta must be >= 0");
  const SparseCoo vals = project_observed(omega0, obs.samples());
  // M - HT_zeta(M) keeps exactly the entries below the threshold.
  std::vector<Entry> kept;
  for (const auto& e : vals.entries()) {
    if (std::abs(e.value) < zeta) kept.push_back(e);
  }
  const double scale =
      static_cast<double>(obs.rows()) * static_cast<double>(obs.cols()) /
      static_cast<double>(omega0.size());
  return StructuredMatrix::from_sparse(SparseCoo(obs.rows(), obs.cols(), std::move(kept)), scale);
}

void inner_step(SolverState& state, const ObservationSet& obs, const IndexSet& omega_t,
                const SolverConfig& config) {
  if (omega_t.empty()) throw ArgumentError("inner_step: sample set is empty");
  if (!config.eta) throw ArgumentError("inner_step: eta is unresolved");
  const Index m = obs.rows();
  const Index n = obs.cols();
  const Index k = state.stage_rank;
  if (k < 1 || k > std::min(m, n)) throw ArgumentError("inner_step: invalid stage rank");

  // Residual M - L on the sample set.
  const SparseCoo observed = project_observed(omega_t, obs.samples());
  const SparseCoo lvals = eval_lowrank_entries(state.l, omega_t);
  const auto ov = observed.entries();
  const auto lv = lvals.entries();

  std::vector<Entry> s_entries;
  std::vector<Entry> g_entries;
  g_entries.reserve(ov.size());
  for (std::size_t i = 0; i < ov.size(); ++i) {
    const double resid = ov[i].value - lv[i].value;
    if (std::abs(resid) >= state.zeta) {
      s_entries.push_back({ov[i].row, ov[i].col, resid});
    } else if (resid != 0.0) {
      // P(M - L - S) is zero wherever S took the residual.
      g_entries.push_back({ov[i].row, ov[i].col, resid});
    }
  }
  state.s = SparseCoo(m, n, std::move(s_entries));
  SparseCoo grad(m, n, std::move(g_entries));
  if (!all_finite(grad)) {
    throw SvdConvergenceError("inner_step: non-finite gradient",
                              SvdResult{LowRankFactors(m, n), std::nan(""), 0});
  }

  const double step = config.step_scale * static_cast<double>(m) * static_cast<double>(n) /
                      static_cast<double>(omega_t.size());
  std::optional<LowRankFactors> lpart;
  if (state.l.rank() > 0) lpart = state.l;
  state.m_struct = StructuredMatrix(std::move(lpart), 1.0, std::move(grad), step);

  const Index want = std::min(k + 1, std::min(m, n));
  SvdResult svd = svd_with_fallback(state.m_struct, want, config.svd, k, config.svd_fallback_tol,
                                    state.svd_fallbacks);
  const auto& sig = svd.factors.sigma();
  state.singvals.assign(sig.data(), sig.data() + sig.size());
  state.singvals.resize(static_cast<std::size_t>(k + 1), 0.0);
  LowRankFactors next = svd.factors.truncated(k);
  const double prev_change = state.step_change;
  state.step_change = frob_error(next, state.l);
  state.l = std::move(next);

  const double sk = state.singvals[static_cast<std::size_t>(k - 1)];
  const double sk1 = state.singvals[static_cast<std::size_t>(k)];
  if (config.adaptive_lambda) {
    state.zeta = *config.adaptive_lambda * config.mu * state.singvals[0] /
                 std::sqrt(static_cast<double>(n));
  } else {
    const double b = config.threshold_decay;
    const double t0 = config.variant == Variant::kPgRmc ? -2.0 : 0.0;
    if (!config.track_contraction) {
      state.decay = std::pow(b, static_cast<double>(state.inner_t) + t0);
    } else if (state.inner_t == 0) {
      state.decay = std::pow(b, t0);
    } else {
      const double ratio = prev_change > 0.0 ? state.step_change / prev_change : 1.0;
      state.decay *= std::clamp(ratio, b, 1.0);
    }
    state.zeta = *config.eta * (sk1 + state.decay * sk);
  }
}

SolverResult pg_rmc(const ObservationSet& obs, const SolverConfig& config) {
  if (config.variant != Variant::kPgRmc) throw ArgumentError("pg_rmc: config variant is not pg");
  return run(obs, config);
}

SolverResult r_rmc(const ObservationSet& obs, const SolverConfig& config) {
  if (config.variant != Variant::kRRmc) throw ArgumentError("r_rmc: config variant is not rank");
  return run(obs, config);
}

SolverResult solve(const ObservationSet& obs, const SolverConfig& config) {
  return run(obs, config);
}

SolverResult matrix_completion(const ObservationSet& obs, const SolverConfig& config) {
  return run(obs, config);
}

RpcaResult rpca(const Eigen::MatrixXd& mat, double p, const SolverConfig& config, bool two_pass) {
  if (!(p > 0.0 && p <= 1.0)) throw ArgumentError("rpca: p must be in (0, 1]");
  const IndexSet omega = bernoulli_sample(mat.rows(), mat.cols(), p, mix(config.seed ^ 0x0b5eULL));
  if (omega.empty()) throw ArgumentError("rpca: subsample is empty");
  ObservationSet obs(project_observed(omega, mat), p);
  SolverResult res = run(obs, config);

  RpcaResult out{std::move(res.l), std::nullopt, std::move(res.report)};
  if (two_pass) {
    const Eigen::MatrixXd resid = mat - out.l.to_dense();
    out.s = hard_threshold(resid, out.report.final_zeta);
  }
  return out;
}

RpcaResult rpca(const SparseCoo& mat, double p, const SolverConfig& config, bool two_pass) {
  return rpca(mat.to_dense(), p, config, two_pass);
}

}  // namespace rmc
