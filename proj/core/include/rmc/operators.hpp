#pragma once

#include <cstdint>
#include <functional>

#include <Eigen/Dense>

#include "rmc/low_rank.hpp"
#include "rmc/sparse_coo.hpp"
#include "rmc/structured_matrix.hpp"

namespace rmc {

// Sampling projection P_Omega. The result has exactly the cells of `omega`
// (zero-valued cells included), with values read from the source.
SparseCoo project_observed(const IndexSet& omega, const Eigen::MatrixXd& source);
SparseCoo project_observed(const IndexSet& omega, const SparseCoo& source);
SparseCoo project_observed(const IndexSet& omega,
                           const std::function<double(Index, Index)>& source);

// Hard thresholding HT_zeta: keeps entries with |value| >= zeta.
SparseCoo hard_threshold(const SparseCoo& a, double zeta);
SparseCoo hard_threshold(const Eigen::MatrixXd& a, double zeta);

/// Values of U diag(sigma) V^T at the cells of `omega`, O(|omega| k).
SparseCoo eval_lowrank_entries(const LowRankFactors& f, const IndexSet& omega);

Eigen::VectorXd structured_matvec(const StructuredMatrix& a, const Eigen::VectorXd& x);
Eigen::VectorXd structured_rmatvec(const StructuredMatrix& a, const Eigen::VectorXd& y);

/// max( max_i |U_i|sqrt(m/k), max_j |V_j|sqrt(n/k) ). Throws for rank 0.
double incoherence(const LowRankFactors& f);

double frob_norm(const SparseCoo& s);
double frob_norm(const LowRankFactors& f);
double frob_norm(const Eigen::MatrixXd& a);

/// ||A - B||_F from factors only, O((m+n)k^2).
double frob_error(const LowRankFactors& a, const LowRankFactors& b);

double inf_norm(const SparseCoo& s);
double inf_norm(const Eigen::MatrixXd& a);
/// Lower bound on ||U Sigma V^T||_inf from `samples` random entries plus the
/// diagonal-dominant candidates (argmax rows of U and V). Never exceeds the true value.
double inf_norm_lower_bound(const LowRankFactors& f, std::size_t samples, std::uint64_t seed);

/// Row/column density max(max_row_nnz / n, max_col_nnz / m).
double row_col_density(const SparseCoo& s);

}  // namespace rmc
