#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include <Eigen/Dense>

#include "rmc/low_rank.hpp"
#include "rmc/sparse_coo.hpp"

namespace rmc::io {

// Text matrix format:
//   m n nnz
//   i j value        (nnz lines, 0-based, sorted by (i, j))
// Reals are written with 17 significant digits so they round-trip.

void write_sparse(std::ostream& out, const SparseCoo& s);
void write_sparse(const std::filesystem::path& path, const SparseCoo& s);
SparseCoo read_sparse(std::istream& in);
SparseCoo read_sparse(const std::filesystem::path& path);

/// Dense matrices use the same format with every entry listed.
void write_dense(const std::filesystem::path& path, const Eigen::MatrixXd& a);
Eigen::MatrixXd read_dense(const std::filesystem::path& path);

/// Factor trio <stem>_u.txt, <stem>_sigma.txt (k x 1), <stem>_v.txt.
void write_factors(const std::filesystem::path& dir, const std::string& stem,
                   const LowRankFactors& f);
LowRankFactors read_factors(const std::filesystem::path& dir, const std::string& stem);

}  // namespace rmc::io
