#pragma once

#include <Eigen/Dense>

#include "rmc/sparse_coo.hpp"

namespace rmc {

/// Orthonormality tolerance applied to U and V columns.
inline constexpr double kOrthonormalTol = 1e-10;

/// Rank-k factorization U * diag(sigma) * V^T with orthonormal U, V and
/// nonincreasing, nonnegative sigma. Rank 0 (the zero matrix) is allowed.
class LowRankFactors {
 public:
  LowRankFactors() = default;
  /// Zero matrix of the given shape.
  LowRankFactors(Index nrows, Index ncols);
  /// Validates orthonormality (kOrthonormalTol) and ordering of sigma;
  /// throws DimensionError or ArgumentError.
  LowRankFactors(Eigen::MatrixXd u, Eigen::VectorXd sigma, Eigen::MatrixXd v);

  Index rows() const { return u_.rows(); }
  Index cols() const { return v_.rows(); }
  Index rank() const { return sigma_.size(); }

  const Eigen::MatrixXd& u() const { return u_; }
  const Eigen::VectorXd& sigma() const { return sigma_; }
  const Eigen::MatrixXd& v() const { return v_; }

  /// Entry (i, j) in O(k).
  double entry(Index i, Index j) const;
  Eigen::MatrixXd to_dense() const;

  /// Returns the factors with sigma multiplied by `c` >= 0.
  LowRankFactors scaled(double c) const;
  /// Leading `k` components.
  LowRankFactors truncated(Index k) const;

 private:
  Eigen::MatrixXd u_;
  Eigen::VectorXd sigma_;
  Eigen::MatrixXd v_;
};

}  // namespace rmc
