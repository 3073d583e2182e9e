#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "rmc/low_rank.hpp"
#include "rmc/structured_matrix.hpp"

namespace rmc {

struct SvdOptions {
  Index oversampling = 10;   ///< extra subspace columns, >= 2
  Index power_iters = 2;     ///< initial power iterations, >= 1; doubled per restart
  double tol = 1e-8;         ///< max_i ||A v_i - s_i u_i|| / s_1 accepted
  Index max_restarts = 5;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Truncated SVD with its achieved relative residual.
struct SvdResult {
  LowRankFactors factors;
  double residual = 0.0;
  Index power_iters_used = 0;
};

/// Raised when the residual tolerance is still unmet after max_restarts; the
/// best iterate seen is attached.
class SvdConvergenceError : public std::runtime_error {
 public:
  SvdConvergenceError(const std::string& what, SvdResult best)
      : std::runtime_error(what), best_(std::move(best)) {}
  const SvdResult& best() const { return best_; }
  double residual() const { return best_.residual; }

 private:
  SvdResult best_;
};

/// Rank-k approximation P_k(A) by randomized subspace iteration.
/// Singular values below 1e-12 * s_1 are reported as zero.
///
/// The residual test covers the leading `checked` triplets (all k when
/// negative). The solver asks for k+1 values but only needs vectors for k.
SvdResult truncated_svd_with_residual(const StructuredMatrix& a, Index k, const SvdOptions& opts,
                                      Index checked = -1);
LowRankFactors truncated_svd(const StructuredMatrix& a, Index k, const SvdOptions& opts);

/// Leading `count` singular values, nonincreasing.
std::vector<double> top_singular_values(const StructuredMatrix& a, Index count,
                                        const SvdOptions& opts);

/// Number of singular values >= singvals[prev_rank] / 2 (ties counted).
/// Requires prev_rank + 1 <= singvals.size(); the result exceeds prev_rank.
Index select_stage_rank(const std::vector<double>& singvals, Index prev_rank);

/// Power-iteration estimate of ||A||_2; zero for the zero matrix.
double spectral_norm_estimate(const StructuredMatrix& a, const SvdOptions& opts);

}  // namespace rmc
