#include "rmc/low_rank.hpp"

#include <cmath>

#include "rmc/errors.hpp"

namespace rmc {
namespace {

void check_orthonormal(const Eigen::MatrixXd& q, const char* name) {
  if (q.cols() == 0) return;
  const Eigen::MatrixXd gram = q.transpose() * q;
  const double dev = (gram - Eigen::MatrixXd::Identity(q.cols(), q.cols())).cwiseAbs().maxCoeff();
  if (!(dev <= kOrthonormalTol)) {
    throw ArgumentError(std::string("LowRankFactors: columns of ") + name +
                        " are not orthonormal (max Gram deviation " + std::to_string(dev) + ")");
  }
}

}  // namespace

LowRankFactors::LowRankFactors(Index nrows, Index ncols)
    : u_(nrows, 0), sigma_(0), v_(ncols, 0) {
  if (nrows < 0 || ncols < 0) throw DimensionError("negative matrix dimension");
}

LowRankFactors::LowRankFactors(Eigen::MatrixXd u, Eigen::VectorXd sigma, Eigen::MatrixXd v)
    : u_(std::move(u)), sigma_(std::move(sigma)), v_(std::move(v)) {
  if (u_.cols() != sigma_.size() || v_.cols() != sigma_.size()) {
    throw DimensionError("LowRankFactors: u, sigma, v ranks differ");
  }
  for (Index i = 0; i < sigma_.size(); ++i) {
    if (!(sigma_[i] >= 0.0) || !std::isfinite(sigma_[i])) {
      throw ArgumentError("LowRankFactors: sigma must be finite and nonnegative");
    }
    if (i > 0 && sigma_[i] > sigma_[i - 1]) {
      throw ArgumentError("LowRankFactors: sigma must be nonincreasing");
    }
  }
  check_orthonormal(u_, "u");
  check_orthonormal(v_, "v");
}

double LowRankFactors::entry(Index i, Index j) const {
  double acc = 0.0;
  for (Index l = 0; l < sigma_.size(); ++l) acc += u_(i, l) * sigma_[l] * v_(j, l);
  return acc;
}

Eigen::MatrixXd LowRankFactors::to_dense() const {
  return u_ * sigma_.asDiagonal() * v_.transpose();
}

LowRankFactors LowRankFactors::scaled(double c) const {
  if (!(c >= 0.0)) throw ArgumentError("LowRankFactors::scaled: negative factor");
  LowRankFactors out = *this;
  out.sigma_ *= c;
  return out;
}

LowRankFactors LowRankFactors::truncated(Index k) const {
  if (k < 0 || k > rank()) throw ArgumentError("LowRankFactors::truncated: bad rank");
  LowRankFactors out;
  out.u_ = u_.leftCols(k);
  out.sigma_ = sigma_.head(k);
  out.v_ = v_.leftCols(k);
  return out;
}

}  // namespace rmc
