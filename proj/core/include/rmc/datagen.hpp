#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>

#include "rmc/low_rank.hpp"
#include "rmc/observation.hpp"
#include "rmc/sparse_coo.hpp"

namespace rmc {

struct InstanceSpec {
  Index m = 100;
  Index n = 100;
  Index rank = 5;
  double condition_number = 1.0;  ///< sigma_1 / sigma_r, geometric profile
  double sigma1 = 1.0;
  double rho = 0.0;  ///< per-row / per-column corruption fraction
  /// Corruption magnitude range; defaults to [r / (2 sqrt(mn)), r / sqrt(mn)].
  std::optional<double> corruption_lo;
  std::optional<double> corruption_hi;
  bool random_sign = false;
  double sampling_p = 1.0;
  std::uint64_t seed = 0;
  /// Redraw the factors until incoherence <= max_mu (up to 1000 draws).
  std::optional<double> max_mu;

  void validate() const;
  double lo() const;
  double hi() const;
};

struct GroundTruth {
  LowRankFactors l_star;
  SparseCoo s_star;  ///< full corruption matrix, before sampling
  double mu_star = 0.0;
};

struct Instance {
  ObservationSet obs;
  GroundTruth truth;
};

LowRankFactors gen_lowrank(const InstanceSpec& spec);
SparseCoo gen_corruptions(const InstanceSpec& spec);
Instance make_instance(const InstanceSpec& spec);

/// L* + S~* as a dense matrix.
Eigen::MatrixXd full_matrix(const GroundTruth& truth);

/// Directory layout:
///   obs.txt                      observed entries P_Omega(L* + S~*)
///   truth_u.txt, truth_sigma.txt, truth_v.txt
///   corruptions.txt              S~* over all entries
///   full.txt                     L* + S~* densely (optional)
///   instance.json                spec and measured incoherence
void write_instance(const std::filesystem::path& dir, const InstanceSpec& spec,
                    const Instance& inst, bool write_full);
/// Reads obs.txt and the ground truth written by write_instance.
Instance read_instance(const std::filesystem::path& dir);

}  // namespace rmc
