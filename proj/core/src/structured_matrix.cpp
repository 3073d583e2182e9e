#include "rmc/structured_matrix.hpp"

#include "rmc/errors.hpp"

namespace rmc {

StructuredMatrix::StructuredMatrix(std::optional<LowRankFactors> lowrank, double lowrank_coeff,
                                   std::optional<SparseCoo> sparse, double sparse_coeff)
    : lowrank_(std::move(lowrank)),
      lowrank_coeff_(lowrank_coeff),
      sparse_(std::move(sparse)),
      sparse_coeff_(sparse_coeff) {
  if (lowrank_ && sparse_ &&
      (lowrank_->rows() != sparse_->rows() || lowrank_->cols() != sparse_->cols())) {
    throw DimensionError("StructuredMatrix: low-rank and sparse parts differ in shape");
  }
  if (lowrank_) {
    nrows_ = lowrank_->rows();
    ncols_ = lowrank_->cols();
  } else if (sparse_) {
    nrows_ = sparse_->rows();
    ncols_ = sparse_->cols();
  }
}

StructuredMatrix StructuredMatrix::from_sparse(SparseCoo s, double coeff) {
  return StructuredMatrix(std::nullopt, 1.0, std::move(s), coeff);
}

StructuredMatrix StructuredMatrix::from_lowrank(LowRankFactors f, double coeff) {
  return StructuredMatrix(std::move(f), coeff, std::nullopt, 1.0);
}

Eigen::MatrixXd StructuredMatrix::multiply(const Eigen::MatrixXd& x) const {
  if (x.rows() != ncols_) throw DimensionError("StructuredMatrix::multiply: size mismatch");
  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(nrows_, x.cols());
  if (lowrank_ && lowrank_->rank() > 0) {
    const Eigen::MatrixXd inner = lowrank_->sigma().asDiagonal() * (lowrank_->v().transpose() * x);
    y.noalias() += lowrank_coeff_ * (lowrank_->u() * inner);
  }
  if (sparse_ && !sparse_->empty()) y += sparse_coeff_ * sparse_->multiply(x);
  return y;
}

Eigen::MatrixXd StructuredMatrix::multiply_transpose(const Eigen::MatrixXd& y) const {
  if (y.rows() != nrows_) {
    throw DimensionError("StructuredMatrix::multiply_transpose: size mismatch");
  }
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(ncols_, y.cols());
  if (lowrank_ && lowrank_->rank() > 0) {
    const Eigen::MatrixXd inner = lowrank_->sigma().asDiagonal() * (lowrank_->u().transpose() * y);
    x.noalias() += lowrank_coeff_ * (lowrank_->v() * inner);
  }
  if (sparse_ && !sparse_->empty()) x += sparse_coeff_ * sparse_->multiply_transpose(y);
  return x;
}

Eigen::VectorXd StructuredMatrix::matvec(const Eigen::VectorXd& x) const {
  return multiply(x);
}

Eigen::VectorXd StructuredMatrix::rmatvec(const Eigen::VectorXd& y) const {
  return multiply_transpose(y);
}

Eigen::MatrixXd StructuredMatrix::to_dense() const {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(nrows_, ncols_);
  if (lowrank_) out += lowrank_coeff_ * lowrank_->to_dense();
  if (sparse_) out += sparse_coeff_ * sparse_->to_dense();
  return out;
}

}  // namespace rmc
