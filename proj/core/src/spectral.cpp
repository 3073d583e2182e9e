#include "rmc/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "rmc/errors.hpp"

namespace rmc {
namespace {

constexpr double kZeroRelative = 1e-12;

Eigen::MatrixXd gaussian_block(Index rows, Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd g(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) g(i, j) = normal(rng);
  }
  return g;
}

Eigen::MatrixXd orthonormal_basis(const Eigen::MatrixXd& y) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(y);
  return qr.householderQ() * Eigen::MatrixXd::Identity(y.rows(), y.cols());
}

SvdResult subspace_iteration(const StructuredMatrix& a, Index k, Index width, Index power_iters,
                             Index checked, std::mt19937_64& rng) {
  const Index n = a.cols();

  Eigen::MatrixXd q = orthonormal_basis(a.multiply(gaussian_block(n, width, rng)));
  for (Index it = 0; it < power_iters; ++it) {
    const Eigen::MatrixXd w = orthonormal_basis(a.multiply_transpose(q));
    q = orthonormal_basis(a.multiply(w));
  }
  // B = Q^T A, held transposed (n x width).
  const Eigen::MatrixXd bt = a.multiply_transpose(q);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(bt, Eigen::ComputeThinU | Eigen::ComputeThinV);

  Eigen::MatrixXd v = svd.matrixU().leftCols(k);
  Eigen::MatrixXd u = q * svd.matrixV().leftCols(k);
  Eigen::VectorXd s = svd.singularValues().head(k);

  SvdResult out;
  out.power_iters_used = power_iters;
  const double s1 = s.size() > 0 ? s[0] : 0.0;
  if (s1 > 0.0) {
    const Index c = checked < 0 ? k : std::min(checked, k);
    if (c > 0) {
      const Eigen::MatrixXd r =
          a.multiply(v.leftCols(c)) - u.leftCols(c) * s.head(c).asDiagonal();
      out.residual = r.colwise().norm().maxCoeff() / s1;
    }
    for (Index i = 0; i < s.size(); ++i) {
      if (s[i] < kZeroRelative * s1) s[i] = 0.0;
    }
  } else {
    s.setZero();
  }
  out.factors = LowRankFactors(std::move(u), std::move(s), std::move(v));
  return out;
}

}  // namespace

void SvdOptions::validate() const {
  if (oversampling < 2) throw ArgumentError("SvdOptions: oversampling must be >= 2");
  if (power_iters < 1) throw ArgumentError("SvdOptions: power_iters must be >= 1");
  if (!(tol > 0.0)) throw ArgumentError("SvdOptions: tol must be > 0");
  if (max_restarts < 0) throw ArgumentError("SvdOptions: max_restarts must be >= 0");
}

SvdResult truncated_svd_with_residual(const StructuredMatrix& a, Index k, const SvdOptions& opts,
                                      Index checked) {
  opts.validate();
  const Index small = std::min(a.rows(), a.cols());
  if (k < 1 || k > small) {
    throw ArgumentError("truncated_svd: k = " + std::to_string(k) + " outside [1, " +
                        std::to_string(small) + "]");
  }
  const Index width = std::min(k + opts.oversampling, small);
  std::mt19937_64 rng(opts.seed);

  Index power_iters = opts.power_iters;
  SvdResult best;
  bool have_best = false;
  for (Index attempt = 0; attempt <= opts.max_restarts; ++attempt) {
    SvdResult cur = subspace_iteration(a, k, width, power_iters, checked, rng);
    if (!std::isfinite(cur.residual)) {
      throw SvdConvergenceError("truncated_svd: non-finite residual", std::move(cur));
    }
    if (!have_best || cur.residual < best.residual) {
      best = std::move(cur);
      have_best = true;
    }
    if (best.residual <= opts.tol) return best;
    power_iters *= 2;
  }
  throw SvdConvergenceError("truncated_svd: residual " + std::to_string(best.residual) +
                                " above tol after " + std::to_string(opts.max_restarts) +
                                " restarts",
                            std::move(best));
}

LowRankFactors truncated_svd(const StructuredMatrix& a, Index k, const SvdOptions& opts) {
  return truncated_svd_with_residual(a, k, opts).factors;
}

std::vector<double> top_singular_values(const StructuredMatrix& a, Index count,
                                        const SvdOptions& opts) {
  const auto f = truncated_svd(a, count, opts);
  return {f.sigma().data(), f.sigma().data() + f.sigma().size()};
}

Index select_stage_rank(const std::vector<double>& singvals, Index prev_rank) {
  if (prev_rank < 0 || static_cast<std::size_t>(prev_rank) + 1 > singvals.size()) {
    throw ArgumentError("select_stage_rank: need at least prev_rank + 1 singular values");
  }
  const double threshold = singvals[static_cast<std::size_t>(prev_rank)] / 2.0;
  const auto count = std::count_if(singvals.begin(), singvals.end(),
                                   [threshold](double s) { return s >= threshold; });
  return static_cast<Index>(count);
}

double spectral_norm_estimate(const StructuredMatrix& a, const SvdOptions& opts) {
  opts.validate();
  const Index small = std::min(a.rows(), a.cols());
  if (small == 0) return 0.0;
  const Index width = std::min<Index>(4, small);
  std::mt19937_64 rng(opts.seed);
  Eigen::MatrixXd q = orthonormal_basis(gaussian_block(a.cols(), width, rng));

  // Block power iteration on A^T A; the Ritz value never exceeds ||A||_2.
  double prev = 0.0;
  double est = 0.0;
  for (int it = 0; it < 1000; ++it) {
    const Eigen::MatrixXd y = a.multiply(q);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(y);
    est = svd.singularValues()[0];
    if (est == 0.0) return 0.0;
    if (it >= 3 && std::abs(est - prev) <= 1e-10 * est) break;
    prev = est;
    q = orthonormal_basis(a.multiply_transpose(orthonormal_basis(y)));
  }
  return est;
}

}  // namespace rmc
