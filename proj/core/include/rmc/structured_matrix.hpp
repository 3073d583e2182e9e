#pragma once

#include <optional>

#include <Eigen/Dense>

#include "rmc/low_rank.hpp"
#include "rmc/sparse_coo.hpp"

namespace rmc {

/// Implicit matrix  coeff_L * (U Sigma V^T) + coeff_S * S.
///
/// Holds the gradient-step iterate  L - (mn/|Omega|) P_Omega(L + S - M)
/// without densifying it; products cost O(nnz + (m+n)k) per vector.
class StructuredMatrix {
 public:
  StructuredMatrix() = default;
  StructuredMatrix(std::optional<LowRankFactors> lowrank, double lowrank_coeff,
                   std::optional<SparseCoo> sparse, double sparse_coeff);

  static StructuredMatrix from_sparse(SparseCoo s, double coeff = 1.0);
  static StructuredMatrix from_lowrank(LowRankFactors f, double coeff = 1.0);

  Index rows() const { return nrows_; }
  Index cols() const { return ncols_; }

  const std::optional<LowRankFactors>& lowrank() const { return lowrank_; }
  const std::optional<SparseCoo>& sparse() const { return sparse_; }
  double lowrank_coeff() const { return lowrank_coeff_; }
  double sparse_coeff() const { return sparse_coeff_; }

  /// A X for an ncols x b block.
  Eigen::MatrixXd multiply(const Eigen::MatrixXd& x) const;
  /// A^T Y for an nrows x b block.
  Eigen::MatrixXd multiply_transpose(const Eigen::MatrixXd& y) const;

  Eigen::VectorXd matvec(const Eigen::VectorXd& x) const;
  Eigen::VectorXd rmatvec(const Eigen::VectorXd& y) const;

  /// Dense assembly; for tests and tiny inputs only.
  Eigen::MatrixXd to_dense() const;

 private:
  std::optional<LowRankFactors> lowrank_;
  double lowrank_coeff_ = 1.0;
  std::optional<SparseCoo> sparse_;
  double sparse_coeff_ = 1.0;
  Index nrows_ = 0;
  Index ncols_ = 0;
};

}  // namespace rmc
