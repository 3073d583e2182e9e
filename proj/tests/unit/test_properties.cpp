// Randomized property checks on small inputs.

#include <gtest/gtest.h>

#include <random>

#include "rmc/operators.hpp"
#include "rmc/spectral.hpp"
#include "test_util.hpp"

using namespace rmc;
using rmc::testing::gaussian;
using rmc::testing::random_factors;
using rmc::testing::random_omega;
using rmc::testing::random_sparse;

namespace {
constexpr int kCases = 100;
}

TEST(Property, ProjectionLinearIdempotent) {
  std::mt19937_64 rng(100);
  for (int c = 0; c < kCases; ++c) {
    const Index m = 1 + rng() % 12, n = 1 + rng() % 12;
    const Eigen::MatrixXd a = gaussian(m, n, rng), b = gaussian(m, n, rng);
    const IndexSet omega = random_omega(m, n, 0.4, rng);
    const double alpha = 1.7;
    const Eigen::MatrixXd pa = project_observed(omega, a).to_dense();
    const Eigen::MatrixXd pb = project_observed(omega, b).to_dense();
    const Eigen::MatrixXd pab = project_observed(omega, Eigen::MatrixXd(alpha * a + b)).to_dense();
    ASSERT_LT((pab - (alpha * pa + pb)).norm(), 1e-12 * (1 + pab.norm()));
    ASSERT_EQ(project_observed(omega, pa).to_dense(), pa);
  }
}

TEST(Property, HardThresholdContract) {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> z(0.0, 2.0);
  for (int c = 0; c < kCases; ++c) {
    const SparseCoo s = random_sparse(10, 9, 0.5, rng);
    const double zeta = z(rng);
    const SparseCoo t = hard_threshold(s, zeta);
    for (const auto& e : s.entries()) {
      const double kept = t.at(e.row, e.col);
      if (std::abs(e.value) >= zeta) ASSERT_EQ(kept, e.value);
      else ASSERT_EQ(kept, 0.0);
    }
    for (const auto& e : t.entries()) ASSERT_NE(s.at(e.row, e.col), 0.0);
  }
}

TEST(Property, SparseSpectralBound) {
  // ||S||_2 <= max(row count, col count) * ||S||_inf
  std::mt19937_64 rng(102);
  for (int c = 0; c < kCases; ++c) {
    const SparseCoo s = random_sparse(15, 12, 0.15, rng);
    if (s.empty()) continue;
    const double two = Eigen::JacobiSVD<Eigen::MatrixXd>(s.to_dense()).singularValues()(0);
    const double d = static_cast<double>(std::max(s.max_row_count(), s.max_col_count()));
    ASSERT_LE(two, d * inf_norm(s) * (1 + 1e-12));
  }
}

TEST(Property, WeylBound) {
  std::mt19937_64 rng(103);
  SvdOptions opts;
  opts.power_iters = 4;
  for (int c = 0; c < kCases / 4; ++c) {
    const auto f = random_factors(20, 16, Eigen::Vector3d(3, 2, 1), rng);
    const SparseCoo e = random_sparse(20, 16, 0.1, rng);
    const SparseCoo small = SparseCoo::from_dense(1e-2 * e.to_dense());
    opts.seed = static_cast<std::uint64_t>(c);
    const auto a = top_singular_values(StructuredMatrix::from_lowrank(f), 3, opts);
    const auto ae = top_singular_values(StructuredMatrix(f, 1.0, small, 1.0), 3, opts);
    const double enorm = spectral_norm_estimate(StructuredMatrix::from_sparse(small), opts);
    // The estimate is a lower bound; a dense oracle bounds the slack.
    const double exact = Eigen::JacobiSVD<Eigen::MatrixXd>(small.to_dense()).singularValues()(0);
    ASSERT_LE(enorm, exact * (1 + 1e-12));
    for (int i = 0; i < 3; ++i) ASSERT_LE(std::abs(a[i] - ae[i]), exact + 1e-8);
  }
}

TEST(Property, StageRankScaleInvariant) {
  std::mt19937_64 rng(104);
  std::uniform_real_distribution<double> u(0.01, 10.0);
  for (int c = 0; c < kCases; ++c) {
    std::vector<double> v(6);
    for (auto& x : v) x = u(rng);
    std::sort(v.rbegin(), v.rend());
    const Index prev = static_cast<Index>(rng() % 5);
    std::vector<double> w = v;
    for (auto& x : w) x *= 8.0;
    ASSERT_EQ(select_stage_rank(v, prev), select_stage_rank(w, prev));
    ASSERT_GT(select_stage_rank(v, prev), prev);
  }
}
