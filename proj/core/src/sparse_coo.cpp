#include "rmc/sparse_coo.hpp"

#include <algorithm>
#include <string>

#include "rmc/errors.hpp"

namespace rmc {
namespace {

void check_shape(Index nrows, Index ncols) {
  if (nrows < 0 || ncols < 0) {
    throw DimensionError("negative matrix dimension");
  }
}

void check_cell(Index nrows, Index ncols, Index r, Index c) {
  if (r < 0 || r >= nrows || c < 0 || c >= ncols) {
    throw DimensionError("index (" + std::to_string(r) + ", " + std::to_string(c) +
                         ") outside " + std::to_string(nrows) + "x" + std::to_string(ncols));
  }
}

}  // namespace

IndexSet::IndexSet(Index nrows, Index ncols) : nrows_(nrows), ncols_(ncols) {
  check_shape(nrows, ncols);
}

IndexSet::IndexSet(Index nrows, Index ncols, std::vector<Cell> cells)
    : nrows_(nrows), ncols_(ncols), cells_(std::move(cells)) {
  check_shape(nrows, ncols);
  for (const auto& c : cells_) check_cell(nrows_, ncols_, c.row, c.col);
  if (!std::is_sorted(cells_.begin(), cells_.end())) std::sort(cells_.begin(), cells_.end());
  if (std::adjacent_find(cells_.begin(), cells_.end()) != cells_.end()) {
    throw ArgumentError("duplicate cell in index set");
  }
}

IndexSet IndexSet::full(Index nrows, Index ncols) {
  IndexSet out(nrows, ncols);
  out.cells_.reserve(static_cast<std::size_t>(nrows * ncols));
  for (Index i = 0; i < nrows; ++i) {
    for (Index j = 0; j < ncols; ++j) out.cells_.push_back({i, j});
  }
  return out;
}

bool IndexSet::contains(Cell c) const {
  return std::binary_search(cells_.begin(), cells_.end(), c);
}

SparseCoo::SparseCoo(Index nrows, Index ncols) : nrows_(nrows), ncols_(ncols) {
  check_shape(nrows, ncols);
}

SparseCoo::SparseCoo(Index nrows, Index ncols, std::vector<Entry> entries)
    : nrows_(nrows), ncols_(ncols), entries_(std::move(entries)) {
  check_shape(nrows, ncols);
  for (const auto& e : entries_) check_cell(nrows_, ncols_, e.row, e.col);
  auto key_less = [](const Entry& a, const Entry& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  };
  std::sort(entries_.begin(), entries_.end(), key_less);
  auto dup = std::adjacent_find(entries_.begin(), entries_.end(),
                                [](const Entry& a, const Entry& b) {
                                  return a.row == b.row && a.col == b.col;
                                });
  if (dup != entries_.end()) {
    throw ArgumentError("duplicate entry (" + std::to_string(dup->row) + ", " +
                        std::to_string(dup->col) + ") in sparse matrix");
  }
}

SparseCoo SparseCoo::from_sorted(Index nrows, Index ncols, std::span<const Cell> cells,
                                 std::span<const double> values) {
  if (cells.size() != values.size()) {
    throw DimensionError("cell and value counts differ");
  }
  SparseCoo out(nrows, ncols);
  out.entries_.resize(cells.size());
  for (std::size_t k = 0; k < cells.size(); ++k) {
    out.entries_[k] = {cells[k].row, cells[k].col, values[k]};
  }
  return out;
}

SparseCoo SparseCoo::from_dense(const Eigen::MatrixXd& dense) {
  SparseCoo out(dense.rows(), dense.cols());
  for (Index i = 0; i < dense.rows(); ++i) {
    for (Index j = 0; j < dense.cols(); ++j) {
      if (dense(i, j) != 0.0) out.entries_.push_back({i, j, dense(i, j)});
    }
  }
  return out;
}

double SparseCoo::at(Index row, Index col) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), Cell{row, col},
                             [](const Entry& e, const Cell& c) {
                               return e.row != c.row ? e.row < c.row : e.col < c.col;
                             });
  if (it != entries_.end() && it->row == row && it->col == col) return it->value;
  return 0.0;
}

IndexSet SparseCoo::support() const {
  std::vector<Cell> cells;
  cells.reserve(entries_.size());
  for (const auto& e : entries_) cells.push_back({e.row, e.col});
  return IndexSet(nrows_, ncols_, std::move(cells));
}

Eigen::MatrixXd SparseCoo::to_dense() const {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(nrows_, ncols_);
  for (const auto& e : entries_) out(e.row, e.col) = e.value;
  return out;
}

Eigen::MatrixXd SparseCoo::multiply(const Eigen::MatrixXd& x) const {
  if (x.rows() != ncols_) throw DimensionError("SparseCoo::multiply: row count mismatch");
  using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const RowMajor xr = x;
  RowMajor yr = RowMajor::Zero(nrows_, x.cols());
  for (const auto& e : entries_) yr.row(e.row) += e.value * xr.row(e.col);
  return yr;
}

Eigen::MatrixXd SparseCoo::multiply_transpose(const Eigen::MatrixXd& y) const {
  if (y.rows() != nrows_) {
    throw DimensionError("SparseCoo::multiply_transpose: row count mismatch");
  }
  using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const RowMajor yr = y;
  RowMajor xr = RowMajor::Zero(ncols_, y.cols());
  for (const auto& e : entries_) xr.row(e.col) += e.value * yr.row(e.row);
  return xr;
}

Index SparseCoo::max_row_count() const {
  std::vector<Index> count(static_cast<std::size_t>(nrows_), 0);
  for (const auto& e : entries_) ++count[static_cast<std::size_t>(e.row)];
  return count.empty() ? 0 : *std::max_element(count.begin(), count.end());
}

Index SparseCoo::max_col_count() const {
  std::vector<Index> count(static_cast<std::size_t>(ncols_), 0);
  for (const auto& e : entries_) ++count[static_cast<std::size_t>(e.col)];
  return count.empty() ? 0 : *std::max_element(count.begin(), count.end());
}

}  // namespace rmc
