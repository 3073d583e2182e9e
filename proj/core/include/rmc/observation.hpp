#pragma once

#include "rmc/sparse_coo.hpp"

namespace rmc {

/// Observed entries P_Omega(M) of an m x n matrix together with the rate p
/// at which Omega was drawn.
class ObservationSet {
 public:
  ObservationSet() = default;
  /// Throws DimensionError if `samples` has another shape, ArgumentError
  /// unless 0 < p <= 1.
  ObservationSet(SparseCoo samples, double p);
  /// Uses |Omega| / (mn) as the rate.
  static ObservationSet with_empirical_rate(SparseCoo samples);

  Index rows() const { return samples_.rows(); }
  Index cols() const { return samples_.cols(); }
  double rate() const { return p_; }
  std::size_t size() const { return samples_.nnz(); }

  const SparseCoo& samples() const { return samples_; }
  IndexSet omega() const { return samples_.support(); }

 private:
  SparseCoo samples_;
  double p_ = 1.0;
};

}  // namespace rmc
