#include "rmc/operators.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "rmc/errors.hpp"
#include "rmc/observation.hpp"

namespace rmc {
namespace {

void check_zeta(double zeta) {
  if (!(zeta >= 0.0)) throw ArgumentError("hard_threshold: zeta must be >= 0");
}

double max_row_norm(const Eigen::MatrixXd& q) {
  return q.rows() == 0 ? 0.0 : std::sqrt(q.rowwise().squaredNorm().maxCoeff());
}

}  // namespace

ObservationSet::ObservationSet(SparseCoo samples, double p) : samples_(std::move(samples)), p_(p) {
  if (!(p > 0.0 && p <= 1.0)) throw ArgumentError("ObservationSet: p must lie in (0, 1]");
}

ObservationSet ObservationSet::with_empirical_rate(SparseCoo samples) {
  const double total = static_cast<double>(samples.rows()) * static_cast<double>(samples.cols());
  if (samples.empty() || total == 0.0) throw ArgumentError("ObservationSet: no observations");
  const double p = static_cast<double>(samples.nnz()) / total;
  return ObservationSet(std::move(samples), p);
}

SparseCoo project_observed(const IndexSet& omega, const Eigen::MatrixXd& source) {
  if (omega.rows() != source.rows() || omega.cols() != source.cols()) {
    throw DimensionError("project_observed: index set and source shapes differ");
  }
  std::vector<double> values(omega.size());
  for (std::size_t k = 0; k < omega.size(); ++k) values[k] = source(omega[k].row, omega[k].col);
  return SparseCoo::from_sorted(omega.rows(), omega.cols(), omega.cells(), values);
}

SparseCoo project_observed(const IndexSet& omega, const SparseCoo& source) {
  if (omega.rows() != source.rows() || omega.cols() != source.cols()) {
    throw DimensionError("project_observed: index set and source shapes differ");
  }
  // Merge walk over two sorted sequences.
  std::vector<double> values(omega.size(), 0.0);
  auto src = source.entries();
  std::size_t s = 0;
  for (std::size_t k = 0; k < omega.size(); ++k) {
    const Cell c = omega[k];
    while (s < src.size() && Cell{src[s].row, src[s].col} < c) ++s;
    if (s < src.size() && src[s].row == c.row && src[s].col == c.col) values[k] = src[s].value;
  }
  return SparseCoo::from_sorted(omega.rows(), omega.cols(), omega.cells(), values);
}

SparseCoo project_observed(const IndexSet& omega,
                           const std::function<double(Index, Index)>& source) {
  std::vector<double> values(omega.size());
  for (std::size_t k = 0; k < omega.size(); ++k) values[k] = source(omega[k].row, omega[k].col);
  return SparseCoo::from_sorted(omega.rows(), omega.cols(), omega.cells(), values);
}

SparseCoo hard_threshold(const SparseCoo& a, double zeta) {
  check_zeta(zeta);
  std::vector<Cell> cells;
  std::vector<double> values;
  for (const auto& e : a.entries()) {
    if (std::abs(e.value) >= zeta) {
      cells.push_back({e.row, e.col});
      values.push_back(e.value);
    }
  }
  return SparseCoo::from_sorted(a.rows(), a.cols(), cells, values);
}

SparseCoo hard_threshold(const Eigen::MatrixXd& a, double zeta) {
  check_zeta(zeta);
  std::vector<Entry> entries;
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      // zeta == 0 keeps explicit zeros of a dense matrix as absent entries.
      if (a(i, j) != 0.0 && std::abs(a(i, j)) >= zeta) entries.push_back({i, j, a(i, j)});
    }
  }
  return SparseCoo(a.rows(), a.cols(), std::move(entries));
}

SparseCoo eval_lowrank_entries(const LowRankFactors& f, const IndexSet& omega) {
  if (omega.rows() != f.rows() || omega.cols() != f.cols()) {
    throw DimensionError("eval_lowrank_entries: index set and factor shapes differ");
  }
  const Eigen::MatrixXd us = f.u() * f.sigma().asDiagonal();
  const Index k = f.rank();
  std::vector<double> values(omega.size(), 0.0);
  for (std::size_t t = 0; t < omega.size(); ++t) {
    const Cell c = omega[t];
    double acc = 0.0;
    for (Index l = 0; l < k; ++l) acc += us(c.row, l) * f.v()(c.col, l);
    values[t] = acc;
  }
  return SparseCoo::from_sorted(omega.rows(), omega.cols(), omega.cells(), values);
}

Eigen::VectorXd structured_matvec(const StructuredMatrix& a, const Eigen::VectorXd& x) {
  return a.matvec(x);
}

Eigen::VectorXd structured_rmatvec(const StructuredMatrix& a, const Eigen::VectorXd& y) {
  return a.rmatvec(y);
}

double incoherence(const LowRankFactors& f) {
  const Index k = f.rank();
  if (k == 0) throw ArgumentError("incoherence: rank-0 factors");
  const double m = static_cast<double>(f.rows());
  const double n = static_cast<double>(f.cols());
  const double kd = static_cast<double>(k);
  return std::max(max_row_norm(f.u()) * std::sqrt(m / kd),
                  max_row_norm(f.v()) * std::sqrt(n / kd));
}

double frob_norm(const SparseCoo& s) {
  double acc = 0.0;
  for (const auto& e : s.entries()) acc += e.value * e.value;
  return std::sqrt(acc);
}

double frob_norm(const LowRankFactors& f) { return f.sigma().norm(); }

double frob_norm(const Eigen::MatrixXd& a) { return a.norm(); }

double frob_error(const LowRankFactors& a, const LowRankFactors& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("frob_error: shapes differ");
  }
  const Index ka = a.rank();
  const Index kb = b.rank();
  if (ka + kb == 0) return 0.0;
  // A - B = [Ua Ub] diag(sa, -sb) [Va Vb]^T; thin QR of the stacked bases
  // leaves an (ka+kb)-square core whose Frobenius norm is the answer.
  Eigen::MatrixXd us(a.rows(), ka + kb);
  us << a.u(), b.u();
  Eigen::MatrixXd vs(a.cols(), ka + kb);
  vs << a.v(), b.v();
  Eigen::VectorXd d(ka + kb);
  d << a.sigma(), -b.sigma();

  auto triangular = [](const Eigen::MatrixXd& x) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(x);
    const Index rows = std::min(x.rows(), x.cols());
    return Eigen::MatrixXd(qr.matrixQR().topRows(rows).triangularView<Eigen::Upper>());
  };
  const Eigen::MatrixXd ru = triangular(us);
  const Eigen::MatrixXd rv = triangular(vs);
  return (ru * d.asDiagonal() * rv.transpose()).norm();
}

double inf_norm(const SparseCoo& s) {
  double best = 0.0;
  for (const auto& e : s.entries()) best = std::max(best, std::abs(e.value));
  return best;
}

double inf_norm(const Eigen::MatrixXd& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

double inf_norm_lower_bound(const LowRankFactors& f, std::size_t samples, std::uint64_t seed) {
  if (f.rank() == 0 || f.rows() == 0 || f.cols() == 0) return 0.0;
  const Eigen::MatrixXd us = f.u() * f.sigma().asDiagonal();
  double best = 0.0;
  // Heaviest row of U Sigma against every column, and every row against the
  // heaviest row of V.
  Index imax = 0;
  us.rowwise().squaredNorm().maxCoeff(&imax);
  Index jmax = 0;
  f.v().rowwise().squaredNorm().maxCoeff(&jmax);
  best = std::max(best, (f.v() * us.row(imax).transpose()).cwiseAbs().maxCoeff());
  best = std::max(best, (us * f.v().row(jmax).transpose()).cwiseAbs().maxCoeff());

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Index> row_dist(0, f.rows() - 1);
  std::uniform_int_distribution<Index> col_dist(0, f.cols() - 1);
  for (std::size_t s = 0; s < samples; ++s) {
    const Index i = row_dist(rng);
    const Index j = col_dist(rng);
    best = std::max(best, std::abs(us.row(i).dot(f.v().row(j))));
  }
  return best;
}

double row_col_density(const SparseCoo& s) {
  if (s.rows() == 0 || s.cols() == 0) return 0.0;
  return std::max(static_cast<double>(s.max_row_count()) / static_cast<double>(s.cols()),
                  static_cast<double>(s.max_col_count()) / static_cast<double>(s.rows()));
}

}  // namespace rmc
