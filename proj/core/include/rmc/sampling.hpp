#pragma once

#include <cstdint>
#include <memory>
#include <string_view>
#include <vector>

#include "rmc/sparse_coo.hpp"

namespace rmc {

enum class SplitMode {
  kNoSplit,        ///< every iteration reuses the full Omega
  kPaperLiteral,   ///< uniform-over-nonempty-subsets assignment
  kExactCoupling,  ///< conditional product law; each set exactly Bernoulli(p)
};

SplitMode parse_split_mode(std::string_view name);  // "none" | "paper" | "exact"
std::string_view to_string(SplitMode mode);

struct SplitPlan {
  std::size_t num_sets = 1;
  double per_set_rate = 1.0;
  SplitMode mode = SplitMode::kNoSplit;

  void validate() const;
};

/// Output of split_samples. In no-split mode every slot aliases the input.
using SampleSets = std::vector<std::shared_ptr<const IndexSet>>;

/// Each of the m*n positions kept independently with probability p.
IndexSet bernoulli_sample(Index m, Index n, double p, std::uint64_t seed);

/// Partitions `omega` (drawn at `input_rate`) into `num_sets` sets of
/// per-set rate `set_rate`.
SampleSets split_samples(const IndexSet& omega, double input_rate, double set_rate,
                         std::size_t num_sets, SplitMode mode, std::uint64_t seed);

/// The per-set rate p solving 1 - (1 - p)^t = input_rate.
double per_set_rate(double input_rate, std::size_t num_sets);

/// Subset-size weights q_r = C(t, r) / (2^t - 1), r = 1..t.
std::vector<double> paper_literal_weights(std::size_t t);

}  // namespace rmc
