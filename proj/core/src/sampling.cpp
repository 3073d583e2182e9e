#include "rmc/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "rmc/errors.hpp"

namespace rmc {
namespace {

void check_rate(double p, const char* what) {
  if (!(p > 0.0 && p <= 1.0)) {
    throw ArgumentError(std::string(what) + ": rate " + std::to_string(p) + " outside (0, 1]");
  }
}

// Geometric number of failures before the next success; p in (0, 1].
std::uint64_t geometric_skip(double p, std::mt19937_64& rng) {
  if (p >= 1.0) return 0;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double u = 1.0 - unif(rng);  // (0, 1]
  const double skip = std::floor(std::log(u) / std::log1p(-p));
  if (!(skip < 9.0e18)) return std::numeric_limits<std::uint64_t>::max();
  return static_cast<std::uint64_t>(skip);
}

std::vector<std::vector<Cell>> empty_buckets(std::size_t t, std::size_t hint) {
  std::vector<std::vector<Cell>> out(t);
  for (auto& b : out) b.reserve(hint);
  return out;
}

SampleSets to_sets(const IndexSet& omega, std::vector<std::vector<Cell>> buckets) {
  SampleSets out;
  out.reserve(buckets.size());
  for (auto& b : buckets) {
    out.push_back(std::make_shared<const IndexSet>(omega.rows(), omega.cols(), std::move(b)));
  }
  return out;
}

}  // namespace

SplitMode parse_split_mode(std::string_view name) {
  if (name == "none") return SplitMode::kNoSplit;
  if (name == "paper") return SplitMode::kPaperLiteral;
  if (name == "exact") return SplitMode::kExactCoupling;
  throw ArgumentError("unknown split mode '" + std::string(name) + "' (none|paper|exact)");
}

std::string_view to_string(SplitMode mode) {
  switch (mode) {
    case SplitMode::kNoSplit:
      return "none";
    case SplitMode::kPaperLiteral:
      return "paper";
    case SplitMode::kExactCoupling:
      return "exact";
  }
  return "none";
}

void SplitPlan::validate() const {
  if (num_sets < 1) throw ArgumentError("SplitPlan: num_sets must be >= 1");
  check_rate(per_set_rate, "SplitPlan");
}

IndexSet bernoulli_sample(Index m, Index n, double p, std::uint64_t seed) {
  check_rate(p, "bernoulli_sample");
  if (m < 0 || n < 0) throw DimensionError("bernoulli_sample: negative shape");
  if (p == 1.0) return IndexSet::full(m, n);

  std::mt19937_64 rng(seed);
  const auto total = static_cast<std::uint64_t>(m) * static_cast<std::uint64_t>(n);
  std::vector<Cell> cells;
  cells.reserve(static_cast<std::size_t>(static_cast<double>(total) * p * 1.1) + 16);
  std::uint64_t pos = geometric_skip(p, rng);
  while (pos < total) {
    cells.push_back({static_cast<Index>(pos / static_cast<std::uint64_t>(n)),
                     static_cast<Index>(pos % static_cast<std::uint64_t>(n))});
    const std::uint64_t skip = geometric_skip(p, rng);
    if (skip >= total - pos) break;
    pos += skip + 1;
  }
  return IndexSet(m, n, std::move(cells));
}

double per_set_rate(double input_rate, std::size_t num_sets) {
  check_rate(input_rate, "per_set_rate");
  if (num_sets == 0) throw ArgumentError("per_set_rate: num_sets must be >= 1");
  if (input_rate == 1.0) return 1.0;
  return -std::expm1(std::log1p(-input_rate) / static_cast<double>(num_sets));
}

std::vector<double> paper_literal_weights(std::size_t t) {
  if (t == 0) throw ArgumentError("paper_literal_weights: t must be >= 1");
  std::vector<double> q(t);
  if (t <= 62) {
    // Exact integer binomials; one rounding per weight.
    const auto denom = static_cast<double>((std::uint64_t{1} << t) - 1);
    unsigned __int128 c = 1;
    for (std::size_t r = 1; r <= t; ++r) {
      c = c * (t - r + 1) / r;
      q[r - 1] = static_cast<double>(c) / denom;
    }
    return q;
  }
  const double td = static_cast<double>(t);
  const double log_denom = td * std::log(2.0) + std::log1p(-std::exp2(-td));
  for (std::size_t r = 1; r <= t; ++r) {
    const double rd = static_cast<double>(r);
    q[r - 1] = std::exp(std::lgamma(td + 1) - std::lgamma(rd + 1) - std::lgamma(td - rd + 1) -
                        log_denom);
  }
  return q;
}

SampleSets split_samples(const IndexSet& omega, double input_rate, double set_rate,
                         std::size_t num_sets, SplitMode mode, std::uint64_t seed) {
  if (num_sets == 0) throw ArgumentError("split_samples: t must be >= 1");
  check_rate(input_rate, "split_samples");
  check_rate(set_rate, "split_samples");
  if (omega.empty()) throw ArgumentError("split_samples: omega is empty");

  if (mode == SplitMode::kNoSplit) {
    auto shared = std::make_shared<const IndexSet>(omega);
    return SampleSets(num_sets, shared);
  }

  const double tn = static_cast<double>(num_sets);
  const double p_union = -std::expm1(tn * std::log1p(-std::min(set_rate, 1.0 - 1e-300)));
  const double keep = std::min(1.0, p_union / input_rate);
  const std::size_t hint = static_cast<std::size_t>(static_cast<double>(omega.size()) * set_rate /
                                                    std::max(p_union, 1e-300)) + 8;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  auto buckets = empty_buckets(num_sets, std::min(hint, omega.size()));

  if (mode == SplitMode::kPaperLiteral) {
    const auto q = paper_literal_weights(num_sets);
    std::discrete_distribution<std::size_t> size_dist(q.begin(), q.end());
    std::vector<std::size_t> perm(num_sets);
    for (const Cell& c : omega.cells()) {
      if (keep < 1.0 && unif(rng) >= keep) continue;
      const std::size_t r = size_dist(rng) + 1;
      // Uniform r-subset by partial Fisher-Yates.
      std::iota(perm.begin(), perm.end(), std::size_t{0});
      for (std::size_t i = 0; i < r; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, num_sets - 1);
        std::swap(perm[i], perm[pick(rng)]);
        buckets[perm[i]].push_back(c);
      }
    }
    return to_sets(omega, std::move(buckets));
  }

  // Exact coupling: given membership in at least one set, the first member
  // index j has P(j) = (1-p)^j p / p', and each later set is joined
  // independently with probability p.
  const double log_q = std::log1p(-set_rate);
  for (const Cell& c : omega.cells()) {
    if (keep < 1.0 && unif(rng) >= keep) continue;
    std::size_t first = 0;
    if (set_rate < 1.0) {
      // Inverse CDF: P(first <= j) = (1 - (1-p)^{j+1}) / p'.
      const double u = unif(rng) * p_union;
      const double j = std::ceil(std::log1p(-u) / log_q) - 1.0;
      first = static_cast<std::size_t>(std::clamp(j, 0.0, tn - 1.0));
    }
    buckets[first].push_back(c);
    std::size_t next = first + 1;
    while (next < num_sets) {
      const std::uint64_t skip = geometric_skip(set_rate, rng);
      if (skip >= num_sets - next) break;
      next += static_cast<std::size_t>(skip);
      buckets[next].push_back(c);
      ++next;
    }
  }
  return to_sets(omega, std::move(buckets));
}

}  // namespace rmc
