#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rmc/low_rank.hpp"
#include "rmc/observation.hpp"
#include "rmc/sampling.hpp"
#include "rmc/sparse_coo.hpp"
#include "rmc/spectral.hpp"
#include "rmc/structured_matrix.hpp"

namespace rmc {

enum class Variant {
  kPgRmc,  ///< stage rank from the singular-value gap rule
  kRRmc,   ///< stage rank = stage index
};

Variant parse_variant(std::string_view name);  // "pg" | "rank"
std::string_view to_string(Variant v);

struct IterationRecord;

struct SolverConfig {
  double epsilon = 1e-4;      ///< target ||L - L*||_F
  Index target_rank = 1;
  double mu = 1.5;            ///< incoherence estimate
  std::optional<double> eta;  ///< default 4 mu^2 r / m
  std::optional<double> sigma;  ///< default 1.05 * ||(1/p) P_Omega(M)||_2
  Variant variant = Variant::kPgRmc;
  SplitMode split_mode = SplitMode::kNoSplit;
  std::optional<Index> inner_iters_override;
  std::optional<Index> max_stages_override;
  std::uint64_t seed = 0;

  /// Gradient step is step_scale * mn/|Omega_t|; 1 gives the plain projected step.
  double step_scale = 0.5;
  /// Base b of the threshold term b^(t-2) sigma_k (b^t for R-RMC).
  double threshold_decay = 0.95;
  /// When set, the threshold term shrinks per step by the observed
  /// contraction ||L_{t+1} - L_t|| / ||L_t - L_{t-1}|| clamped to
  /// [threshold_decay, 1], instead of by threshold_decay alone.
  bool track_contraction = false;
  /// When set, zeta = lambda * mu * sigma_1(M_t) / sqrt(n) replaces the
  /// singular-value schedule inside the inner loop.
  std::optional<double> adaptive_lambda;
  /// Inner loop exits once ||L_{t+1} - L_t||_F <= stall_factor * epsilon.
  double stall_factor = 1e-3;
  /// Wall-clock budget in seconds; <= 0 means none.
  double time_limit = 0.0;
  /// Keep every iteration's S support in the report.
  bool record_supports = false;
  /// Called after every inner iteration with the new L. Time spent in the
  /// callback is excluded from the recorded wall times.
  std::function<void(const IterationRecord&, const LowRankFactors&)> on_iteration;
  /// A per-iteration SVD that misses svd.tol but reaches this residual is
  /// accepted (and counted) instead of aborting the run.
  double svd_fallback_tol = 1e-3;
  /// Spectral solver settings for the per-iteration SVD.
  SvdOptions svd{.oversampling = 10, .power_iters = 2, .tol = 1e-6, .max_restarts = 4, .seed = 0};

  void validate() const;
};

/// Copy of `config` with eta and sigma filled from the data.
SolverConfig resolve_defaults(const SolverConfig& config, const ObservationSet& obs);

/// T = ceil(10 ln(10 mu^2 r sigma / eps)), at least 1. Requires sigma set.
Index default_inner_iters(const SolverConfig& config);

struct SolverState {
  LowRankFactors l;
  SparseCoo s;
  StructuredMatrix m_struct;
  double zeta = 0.0;
  Index stage = 0;
  Index stage_rank = 0;
  Index inner_t = 0;
  /// Leading stage_rank + 1 singular values of m_struct from the last step.
  std::vector<double> singvals;
  double decay = 1.0;        ///< current multiplier on sigma_k in zeta
  double step_change = 0.0;  ///< ||L_{t+1} - L_t||_F of the last step
  Index svd_fallbacks = 0;
};

enum class Termination {
  kToleranceAtInit,
  kToleranceMet,
  kStageCap,
  kStagnated,  ///< a full-rank stage failed to halve sigma_{r+1}(M)
  kTimeLimit,
  kDiverged,
};

std::string_view to_string(Termination t);

struct IterationRecord {
  Index stage = 0;
  Index t = 0;
  Index stage_rank = 0;
  double zeta = 0.0;        ///< threshold used for this iteration's S
  double sigma_k = 0.0;     ///< sigma_{k_q}(M_t)
  double sigma_k1 = 0.0;    ///< sigma_{k_q + 1}(M_t)
  std::size_t support = 0;  ///< |supp S_t|
  double step_change = 0.0; ///< ||L_{t+1} - L_t||_F
  double wall_time = 0.0;   ///< seconds since solver start
};

struct SolverReport {
  std::vector<IterationRecord> iterations;
  std::vector<IndexSet> supports;  ///< filled when record_supports is set
  Termination termination = Termination::kStageCap;
  Index stages = 0;
  Index inner_iterations = 0;
  Index stalls = 0;  ///< stages whose inner loop exited on the stall rule
  Index svd_fallbacks = 0;  ///< SVDs accepted under svd_fallback_tol
  double final_zeta = 0.0;
  double final_residual_sigma = 0.0;  ///< last sigma_{k_q+1}(M) seen by the stopping rule
  double elapsed = 0.0;
  // Resolved parameters.
  double eta = 0.0;
  double sigma = 0.0;
  Index inner_iters = 0;
  Index max_stages = 0;

  bool converged() const {
    return termination == Termination::kToleranceMet ||
           termination == Termination::kToleranceAtInit;
  }
};

struct SolverResult {
  LowRankFactors l;
  SolverReport report;
};

/// M0 = (mn/|Omega0|) P_Omega0(M - HT_zeta(M)).
StructuredMatrix init_m0(const ObservationSet& obs, const IndexSet& omega0, double zeta);

/// One inner iteration on sample set `omega_t`, updating state in place.
/// Requires a resolved config. `t` is taken from state.inner_t.
void inner_step(SolverState& state, const ObservationSet& obs, const IndexSet& omega_t,
                const SolverConfig& config);

SolverResult pg_rmc(const ObservationSet& obs, const SolverConfig& config);
SolverResult r_rmc(const ObservationSet& obs, const SolverConfig& config);
/// Dispatches on config.variant.
SolverResult solve(const ObservationSet& obs, const SolverConfig& config);

/// Plain completion (no corruption): the robust solver run unchanged.
SolverResult matrix_completion(const ObservationSet& obs, const SolverConfig& config);

struct RpcaResult {
  LowRankFactors l;
  std::optional<SparseCoo> s;  ///< second-pass sparse estimate
  SolverReport report;
};

/// Subsamples the fully known `mat` at rate p, solves, and optionally
/// thresholds M - L over all entries at the final threshold.
RpcaResult rpca(const Eigen::MatrixXd& mat, double p, const SolverConfig& config, bool two_pass);
RpcaResult rpca(const SparseCoo& mat, double p, const SolverConfig& config, bool two_pass);

}  // namespace rmc
