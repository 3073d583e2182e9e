#include "rmc/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <string>

#include <nlohmann/json.hpp>

#include "rmc/errors.hpp"
#include "rmc/matrix_io.hpp"
#include "rmc/operators.hpp"
#include "rmc/sampling.hpp"
#include "rmc/seeding.hpp"

namespace rmc {
namespace {

enum Stream : std::uint64_t { kFactors = 1, kCorruptions = 2, kSampling = 3 };

Eigen::MatrixXd gaussian_orthonormal(Index rows, Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd g(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) g(i, j) = normal(rng);
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(rows, cols);
  // Fix signs so the factorization is unique given the Gaussian draw.
  const Eigen::MatrixXd r = qr.matrixQR().topRows(cols).triangularView<Eigen::Upper>();
  for (Index j = 0; j < cols; ++j) {
    if (r(j, j) < 0.0) q.col(j) *= -1.0;
  }
  return q;
}

}  // namespace

void InstanceSpec::validate() const {
  if (m < 1 || n < 1) throw ArgumentError("instance: m and n must be >= 1");
  if (rank < 1 || rank > std::min(m, n)) throw ArgumentError("instance: rank must be in [1, min(m, n)]");
  if (!(condition_number >= 1.0)) throw ArgumentError("instance: condition number must be >= 1");
  if (!(sigma1 > 0.0)) throw ArgumentError("instance: sigma1 must be > 0");
  if (!(rho >= 0.0 && rho <= 1.0)) throw ArgumentError("instance: rho must be in [0, 1]");
  if (!(sampling_p > 0.0 && sampling_p <= 1.0)) throw ArgumentError("instance: p must be in (0, 1]");
  if (!(lo() >= 0.0 && lo() <= hi())) throw ArgumentError("instance: need 0 <= lo <= hi");
  if (max_mu && !(*max_mu >= 1.0)) throw ArgumentError("instance: max_mu must be >= 1");
}

double InstanceSpec::lo() const {
  return corruption_lo.value_or(static_cast<double>(rank) /
                                (2.0 * std::sqrt(static_cast<double>(m) * static_cast<double>(n))));
}

double InstanceSpec::hi() const {
  return corruption_hi.value_or(static_cast<double>(rank) /
                                std::sqrt(static_cast<double>(m) * static_cast<double>(n)));
}

LowRankFactors gen_lowrank(const InstanceSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(derive_seed({spec.seed, kFactors}));
  const Index r = spec.rank;
  Eigen::VectorXd sigma(r);
  for (Index i = 0; i < r; ++i) {
    const double frac = r == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(r - 1);
    sigma[i] = spec.sigma1 * std::pow(spec.condition_number, -frac);
  }
  const int draws = spec.max_mu ? 1000 : 1;
  for (int d = 0;; ++d) {
    Eigen::MatrixXd u = gaussian_orthonormal(spec.m, r, rng);
    Eigen::MatrixXd v = gaussian_orthonormal(spec.n, r, rng);
    LowRankFactors f(std::move(u), sigma, std::move(v));
    if (!spec.max_mu || incoherence(f) <= *spec.max_mu) return f;
    if (d + 1 >= draws) {
      throw ArgumentError("instance: no factor draw met max_mu after " + std::to_string(draws) +
                          " attempts");
    }
  }
}

SparseCoo gen_corruptions(const InstanceSpec& spec) {
  spec.validate();
  const Index m = spec.m;
  const Index n = spec.n;
  const auto row_cap = static_cast<Index>(std::floor(spec.rho * static_cast<double>(n) + 1e-9));
  const auto col_cap = static_cast<Index>(std::floor(spec.rho * static_cast<double>(m) + 1e-9));
  if (row_cap == 0 || col_cap == 0) return SparseCoo(m, n);

  std::mt19937_64 rng(derive_seed({spec.seed, kCorruptions}));
  // Slot matching: each row offers row_cap slots, each column col_cap; a
  // random pairing of slots bounds every row and column count exactly.
  const Index total = std::min(m * row_cap, n * col_cap);
  auto slots = [&](Index count, Index cap) {
    std::vector<Index> s(static_cast<std::size_t>(count * cap));
    for (Index i = 0; i < count * cap; ++i) s[static_cast<std::size_t>(i)] = i / cap;
    std::shuffle(s.begin(), s.end(), rng);
    s.resize(static_cast<std::size_t>(total));
    return s;
  };
  std::vector<Index> rows = slots(m, row_cap);
  std::vector<Index> cols = slots(n, col_cap);

  std::set<std::pair<Index, Index>> used;
  std::vector<Cell> cells;
  cells.reserve(static_cast<std::size_t>(total));
  const auto sz = static_cast<std::size_t>(total);
  for (std::size_t i = 0; i < sz; ++i) {
    bool placed = used.insert({rows[i], cols[i]}).second;
    // On a repeated position, swap in a later column slot and retry.
    for (int attempt = 0; !placed && attempt < 64 && i + 1 < sz; ++attempt) {
      std::uniform_int_distribution<std::size_t> pick(i + 1, sz - 1);
      std::swap(cols[i], cols[pick(rng)]);
      placed = used.insert({rows[i], cols[i]}).second;
    }
    if (placed) cells.push_back({rows[i], cols[i]});
  }
  std::sort(cells.begin(), cells.end());

  std::uniform_real_distribution<double> mag(spec.lo(), spec.hi());
  std::bernoulli_distribution sign(0.5);
  std::vector<double> values(cells.size());
  for (auto& v : values) {
    v = spec.lo() == spec.hi() ? spec.lo() : mag(rng);
    if (spec.random_sign && sign(rng)) v = -v;
  }
  return SparseCoo::from_sorted(m, n, cells, values);
}

Instance make_instance(const InstanceSpec& spec) {
  spec.validate();
  Instance inst;
  inst.truth.l_star = gen_lowrank(spec);
  inst.truth.s_star = gen_corruptions(spec);
  inst.truth.mu_star = incoherence(inst.truth.l_star);

  const IndexSet omega =
      bernoulli_sample(spec.m, spec.n, spec.sampling_p, derive_seed({spec.seed, kSampling}));
  const SparseCoo lvals = eval_lowrank_entries(inst.truth.l_star, omega);
  const SparseCoo svals = project_observed(omega, inst.truth.s_star);
  std::vector<double> values(omega.size());
  const auto le = lvals.entries();
  const auto se = svals.entries();
  for (std::size_t k = 0; k < values.size(); ++k) values[k] = le[k].value + se[k].value;
  inst.obs = ObservationSet(SparseCoo::from_sorted(spec.m, spec.n, omega.cells(), values),
                            spec.sampling_p);
  return inst;
}

Eigen::MatrixXd full_matrix(const GroundTruth& truth) {
  Eigen::MatrixXd a = truth.l_star.to_dense();
  for (const auto& e : truth.s_star.entries()) a(e.row, e.col) += e.value;
  return a;
}

void write_instance(const std::filesystem::path& dir, const InstanceSpec& spec,
                    const Instance& inst, bool write_full) {
  std::filesystem::create_directories(dir);
  io::write_sparse(dir / "obs.txt", inst.obs.samples());
  io::write_factors(dir, "truth", inst.truth.l_star);
  io::write_sparse(dir / "corruptions.txt", inst.truth.s_star);
  if (write_full) io::write_dense(dir / "full.txt", full_matrix(inst.truth));

  nlohmann::ordered_json j;
  j["m"] = spec.m;
  j["n"] = spec.n;
  j["rank"] = spec.rank;
  j["condition_number"] = spec.condition_number;
  j["sigma1"] = spec.sigma1;
  j["rho"] = spec.rho;
  j["corruption_lo"] = spec.lo();
  j["corruption_hi"] = spec.hi();
  j["random_sign"] = spec.random_sign;
  j["sampling_p"] = spec.sampling_p;
  j["seed"] = spec.seed;
  j["mu_star"] = inst.truth.mu_star;
  j["observed"] = inst.obs.size();
  j["corruptions"] = inst.truth.s_star.nnz();
  std::ofstream out(dir / "instance.json", std::ios::binary);
  if (!out) throw IoError("cannot write " + (dir / "instance.json").string());
  out << j.dump(2) << '\n';
}

Instance read_instance(const std::filesystem::path& dir) {
  std::ifstream in(dir / "instance.json", std::ios::binary);
  if (!in) throw IoError("cannot open " + (dir / "instance.json").string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("instance.json: ") + e.what());
  }
  Instance inst;
  inst.obs = ObservationSet(io::read_sparse(dir / "obs.txt"), j.at("sampling_p").get<double>());
  inst.truth.l_star = io::read_factors(dir, "truth");
  inst.truth.s_star = io::read_sparse(dir / "corruptions.txt");
  inst.truth.mu_star = j.at("mu_star").get<double>();
  return inst;
}

}  // namespace rmc
