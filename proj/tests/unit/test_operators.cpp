#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "rmc/errors.hpp"
#include "rmc/low_rank.hpp"
#include "rmc/operators.hpp"
#include "rmc/sparse_coo.hpp"
#include "rmc/structured_matrix.hpp"
#include "test_util.hpp"

using namespace rmc;
using rmc::testing::gaussian;
using rmc::testing::random_factors;
using rmc::testing::random_omega;
using rmc::testing::random_sparse;

TEST(SparseCoo, RejectsDuplicatesAndOutOfRange) {
  EXPECT_THROW(SparseCoo(2, 2, {{0, 0, 1.0}, {0, 0, 2.0}}), ArgumentError);
  EXPECT_THROW(SparseCoo(2, 2, {{2, 0, 1.0}}), DimensionError);
  SparseCoo s(3, 3, {{2, 1, 5.0}, {0, 2, 1.0}});
  EXPECT_EQ(s.entries()[0].row, 0);
  EXPECT_EQ(s.at(2, 1), 5.0);
  EXPECT_EQ(s.at(1, 1), 0.0);
}

TEST(SparseCoo, MultiplyMatchesDense) {
  std::mt19937_64 rng(1);
  const SparseCoo s = random_sparse(13, 9, 0.3, rng);
  const Eigen::MatrixXd x = gaussian(9, 3, rng), y = gaussian(13, 2, rng);
  EXPECT_LT((s.multiply(x) - s.to_dense() * x).norm(), 1e-12);
  EXPECT_LT((s.multiply_transpose(y) - s.to_dense().transpose() * y).norm(), 1e-12);
}

TEST(LowRank, ValidatesFactors) {
  Eigen::MatrixXd u = Eigen::MatrixXd::Identity(4, 2);
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(3, 2);
  EXPECT_NO_THROW(LowRankFactors(u, Eigen::Vector2d(2, 1), v));
  EXPECT_THROW(LowRankFactors(u, Eigen::Vector2d(1, 2), v), ArgumentError);
  EXPECT_THROW(LowRankFactors(2 * u, Eigen::Vector2d(2, 1), v), ArgumentError);
  EXPECT_THROW(LowRankFactors(u, Eigen::Vector2d(2, 1), Eigen::MatrixXd::Identity(3, 1)),
               DimensionError);
}

TEST(LowRank, EntryAndTruncation) {
  std::mt19937_64 rng(2);
  const auto f = random_factors(8, 6, Eigen::Vector3d(3, 2, 1), rng);
  const Eigen::MatrixXd d = f.to_dense();
  EXPECT_NEAR(f.entry(5, 4), d(5, 4), 1e-14);
  EXPECT_EQ(f.truncated(2).rank(), 2);
  EXPECT_NEAR(frob_norm(f.scaled(2.0)), 2.0 * d.norm(), 1e-12);
}

TEST(Structured, MatvecMatchesDenseAssembly) {
  std::mt19937_64 rng(3);
  const auto f = random_factors(10, 7, Eigen::Vector2d(2, 0.5), rng);
  const SparseCoo s = random_sparse(10, 7, 0.2, rng);
  const StructuredMatrix a(f, 0.7, s, -1.3);
  const Eigen::MatrixXd dense = 0.7 * f.to_dense() - 1.3 * s.to_dense();
  EXPECT_LT((a.to_dense() - dense).norm(), 1e-12);
  const Eigen::VectorXd x = gaussian(7, 1, rng), y = gaussian(10, 1, rng);
  EXPECT_LT((structured_matvec(a, x) - dense * x).norm(), 1e-12);
  EXPECT_LT((structured_rmatvec(a, y) - dense.transpose() * y).norm(), 1e-12);
  EXPECT_THROW(StructuredMatrix(f, 1.0, SparseCoo(3, 3), 1.0), DimensionError);
}

TEST(ProjectObserved, KeepsExactlyOmega) {
  std::mt19937_64 rng(4);
  const Eigen::MatrixXd m = gaussian(6, 5, rng);
  const IndexSet omega = random_omega(6, 5, 0.4, rng);
  const SparseCoo p = project_observed(omega, m);
  EXPECT_EQ(p.support(), omega);
  for (const auto& e : p.entries()) EXPECT_EQ(e.value, m(e.row, e.col));
  // idempotent
  EXPECT_EQ(project_observed(omega, p), p);
  EXPECT_THROW(project_observed(IndexSet(3, 3), m), DimensionError);
}

TEST(HardThreshold, KeepsAtOrAboveZeta) {
  SparseCoo s(2, 2, {{0, 0, 0.5}, {0, 1, -0.5}, {1, 0, 0.49}, {1, 1, -2.0}});
  const SparseCoo t = hard_threshold(s, 0.5);
  EXPECT_EQ(t.nnz(), 3u);
  EXPECT_EQ(t.at(1, 1), -2.0);
  EXPECT_EQ(t.at(1, 0), 0.0);
  EXPECT_EQ(hard_threshold(s, 0.0).nnz(), 4u);
  EXPECT_THROW(hard_threshold(s, -1.0), ArgumentError);
}

TEST(Operators, EvalLowrankEntries) {
  std::mt19937_64 rng(5);
  const auto f = random_factors(9, 8, Eigen::Vector2d(1, 0.3), rng);
  const IndexSet omega = random_omega(9, 8, 0.5, rng);
  const SparseCoo e = eval_lowrank_entries(f, omega);
  const SparseCoo oracle = project_observed(omega, f.to_dense());
  ASSERT_EQ(e.nnz(), oracle.nnz());
  for (std::size_t i = 0; i < e.nnz(); ++i)
    EXPECT_NEAR(e.entries()[i].value, oracle.entries()[i].value, 1e-14);
}

TEST(Operators, FrobErrorFactoredMatchesDense) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = random_factors(15, 11, Eigen::Vector3d(3, 1, 0.2), rng);
    const auto b = random_factors(15, 11, Eigen::Vector2d(2, 1), rng);
    const double oracle = (a.to_dense() - b.to_dense()).norm();
    EXPECT_NEAR(frob_error(a, b), oracle, 1e-10 * (1 + oracle));
    EXPECT_NEAR(frob_error(a, a), 0.0, 1e-6);
  }
}

TEST(Operators, IncoherenceBruteForce) {
  std::mt19937_64 rng(7);
  const auto f = random_factors(20, 12, Eigen::Vector3d(3, 2, 1), rng);
  double mu = 0;
  for (Index i = 0; i < 20; ++i) mu = std::max(mu, f.u().row(i).norm() * std::sqrt(20.0 / 3));
  for (Index j = 0; j < 12; ++j) mu = std::max(mu, f.v().row(j).norm() * std::sqrt(12.0 / 3));
  EXPECT_NEAR(incoherence(f), mu, 1e-12);
  EXPECT_GE(incoherence(f), 1.0 - 1e-12);
  EXPECT_THROW(incoherence(LowRankFactors(4, 4)), ArgumentError);
}

TEST(Operators, NormsAndDensity) {
  SparseCoo s(4, 5, {{0, 0, -3}, {0, 1, 1}, {2, 1, 2}});
  EXPECT_EQ(inf_norm(s), 3.0);
  EXPECT_NEAR(frob_norm(s), std::sqrt(14.0), 1e-15);
  EXPECT_NEAR(row_col_density(s), std::max(2.0 / 5, 2.0 / 4), 1e-15);
}

TEST(Operators, InfNormLowerBoundNeverExceeds) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    const auto f = random_factors(30, 25, Eigen::Vector2d(1, 0.5), rng);
    const double exact = inf_norm(f.to_dense());
    const double lb = inf_norm_lower_bound(f, 50, trial);
    EXPECT_LE(lb, exact + 1e-15);
    EXPECT_GT(lb, 0.0);
  }
}
