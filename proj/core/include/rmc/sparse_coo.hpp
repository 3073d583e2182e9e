#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace rmc {

using Index = Eigen::Index;

/// A (row, col) position.
struct Cell {
  Index row = 0;
  Index col = 0;

  friend bool operator==(const Cell&, const Cell&) = default;
  friend auto operator<=>(const Cell&, const Cell&) = default;
};

/// A set of matrix positions, kept sorted by (row, col) without duplicates.
///
/// This is the observed set Omega and every subset the sampler produces.
class IndexSet {
 public:
  IndexSet() = default;
  IndexSet(Index nrows, Index ncols);
  /// Sorts `cells`; throws DimensionError on out-of-range cells and
  /// ArgumentError on duplicates.
  IndexSet(Index nrows, Index ncols, std::vector<Cell> cells);

  /// Every position of an nrows x ncols matrix.
  static IndexSet full(Index nrows, Index ncols);

  Index rows() const { return nrows_; }
  Index cols() const { return ncols_; }
  std::size_t size() const { return cells_.size(); }
  bool empty() const { return cells_.empty(); }
  std::span<const Cell> cells() const { return cells_; }
  const Cell& operator[](std::size_t i) const { return cells_[i]; }

  bool contains(Cell c) const;

  friend bool operator==(const IndexSet&, const IndexSet&) = default;

 private:
  Index nrows_ = 0;
  Index ncols_ = 0;
  std::vector<Cell> cells_;
};

struct Entry {
  Index row = 0;
  Index col = 0;
  double value = 0.0;

  friend bool operator==(const Entry&, const Entry&) = default;
};

/// Coordinate-format sparse matrix. Entries are sorted by (row, col) and
/// unique; duplicate positions are rejected rather than summed.
class SparseCoo {
 public:
  SparseCoo() = default;
  SparseCoo(Index nrows, Index ncols);
  SparseCoo(Index nrows, Index ncols, std::vector<Entry> entries);

  /// Builds from positions that are already sorted and unique (e.g. the
  /// cells of an IndexSet) without re-validating order.
  static SparseCoo from_sorted(Index nrows, Index ncols, std::span<const Cell> cells,
                               std::span<const double> values);
  static SparseCoo from_dense(const Eigen::MatrixXd& dense);

  Index rows() const { return nrows_; }
  Index cols() const { return ncols_; }
  std::size_t nnz() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  std::span<const Entry> entries() const { return entries_; }

  /// Value at (row, col), zero when absent. O(log nnz).
  double at(Index row, Index col) const;

  IndexSet support() const;
  Eigen::MatrixXd to_dense() const;

  /// Y = A X and Y = A^T X for a block of vectors.
  Eigen::MatrixXd multiply(const Eigen::MatrixXd& x) const;
  Eigen::MatrixXd multiply_transpose(const Eigen::MatrixXd& y) const;

  /// Largest number of entries in any row / column.
  Index max_row_count() const;
  Index max_col_count() const;

  friend bool operator==(const SparseCoo&, const SparseCoo&) = default;

 private:
  Index nrows_ = 0;
  Index ncols_ = 0;
  std::vector<Entry> entries_;
};

}  // namespace rmc
