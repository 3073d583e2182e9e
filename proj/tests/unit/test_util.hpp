#pragma once

#include <random>

#include <Eigen/Dense>

#include "rmc/low_rank.hpp"
#include "rmc/sparse_coo.hpp"

namespace rmc::testing {

inline Eigen::MatrixXd gaussian(Index m, Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  Eigen::MatrixXd a(m, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < m; ++i) a(i, j) = nd(rng);
  return a;
}

inline Eigen::MatrixXd orthonormal(Index m, Index k, std::mt19937_64& rng) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(gaussian(m, k, rng));
  return qr.householderQ() * Eigen::MatrixXd::Identity(m, k);
}

// Random factors with the given singular values (must be nonincreasing).
inline LowRankFactors random_factors(Index m, Index n, const Eigen::VectorXd& sigma,
                                     std::mt19937_64& rng) {
  return LowRankFactors(orthonormal(m, sigma.size(), rng), sigma,
                        orthonormal(n, sigma.size(), rng));
}

inline SparseCoo random_sparse(Index m, Index n, double density, std::mt19937_64& rng) {
  std::bernoulli_distribution keep(density);
  std::normal_distribution<double> nd;
  std::vector<Entry> e;
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < n; ++j)
      if (keep(rng)) e.push_back({i, j, nd(rng)});
  return SparseCoo(m, n, std::move(e));
}

inline IndexSet random_omega(Index m, Index n, double p, std::mt19937_64& rng) {
  std::bernoulli_distribution keep(p);
  std::vector<Cell> c;
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < n; ++j)
      if (keep(rng)) c.push_back({i, j});
  return IndexSet(m, n, std::move(c));
}

}  // namespace rmc::testing
