#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "rmc/datagen.hpp"
#include "rmc/errors.hpp"
#include "rmc/matrix_io.hpp"
#include "rmc/operators.hpp"

using namespace rmc;
namespace fs = std::filesystem;

TEST(Datagen, LowRankSpectrumAndShape) {
  InstanceSpec spec;
  spec.m = 50;
  spec.n = 40;
  spec.rank = 4;
  spec.condition_number = 8.0;
  spec.sigma1 = 2.0;
  const auto f = gen_lowrank(spec);
  ASSERT_EQ(f.rank(), 4);
  EXPECT_NEAR(f.sigma()(0), 2.0, 1e-14);
  EXPECT_NEAR(f.sigma()(0) / f.sigma()(3), 8.0, 1e-12);
  // geometric profile
  EXPECT_NEAR(f.sigma()(1) / f.sigma()(0), f.sigma()(2) / f.sigma()(1), 1e-12);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(f.to_dense());
  EXPECT_NEAR(svd.singularValues()(3), f.sigma()(3), 1e-12);
}

TEST(Datagen, CorruptionCapsAndRange) {
  InstanceSpec spec;
  spec.m = 100;
  spec.n = 80;
  spec.rank = 3;
  spec.rho = 0.05;
  spec.seed = 4;
  const SparseCoo s = gen_corruptions(spec);
  EXPECT_LE(s.max_row_count(), static_cast<Index>(std::floor(0.05 * 80)));
  EXPECT_LE(s.max_col_count(), static_cast<Index>(std::floor(0.05 * 100)));
  EXPECT_GT(s.nnz(), 0u);
  for (const auto& e : s.entries()) {
    EXPECT_GE(std::abs(e.value), spec.lo());
    EXPECT_LE(std::abs(e.value), spec.hi());
  }
  EXPECT_NEAR(spec.lo(), 3.0 / (2 * std::sqrt(8000.0)), 1e-15);
}

TEST(Datagen, ZeroRhoAndValidation) {
  InstanceSpec spec;
  spec.rho = 0.0;
  EXPECT_EQ(gen_corruptions(spec).nnz(), 0u);
  spec.rank = 0;
  EXPECT_THROW(spec.validate(), ArgumentError);
  spec = InstanceSpec{};
  spec.rank = 200;
  EXPECT_THROW(spec.validate(), ArgumentError);
  spec = InstanceSpec{};
  spec.condition_number = 0.5;
  EXPECT_THROW(spec.validate(), ArgumentError);
}

TEST(Datagen, InstanceDeterministicAndConsistent) {
  InstanceSpec spec;
  spec.m = spec.n = 60;
  spec.rank = 2;
  spec.rho = 0.03;
  spec.sampling_p = 0.3;
  spec.seed = 11;
  const Instance a = make_instance(spec), b = make_instance(spec);
  EXPECT_EQ(a.obs.samples(), b.obs.samples());
  EXPECT_EQ(a.truth.s_star, b.truth.s_star);
  const Eigen::MatrixXd full = full_matrix(a.truth);
  for (const auto& e : a.obs.samples().entries()) EXPECT_EQ(e.value, full(e.row, e.col));
  EXPECT_NEAR(a.truth.mu_star, incoherence(a.truth.l_star), 1e-15);
}

TEST(Datagen, MaxMuRespected) {
  InstanceSpec spec;
  spec.m = spec.n = 100;
  spec.rank = 3;
  spec.max_mu = 2.0;
  spec.seed = 2;
  EXPECT_LE(make_instance(spec).truth.mu_star, 2.0);
}

TEST(Datagen, WriteReadRoundTrip) {
  const fs::path dir = fs::temp_directory_path() / "rmc_datagen_rt";
  fs::remove_all(dir);
  InstanceSpec spec;
  spec.m = 30;
  spec.n = 20;
  spec.rank = 2;
  spec.rho = 0.05;
  spec.sampling_p = 0.5;
  spec.seed = 5;
  const Instance inst = make_instance(spec);
  write_instance(dir, spec, inst, true);
  const Instance back = read_instance(dir);
  EXPECT_EQ(back.obs.samples(), inst.obs.samples());
  EXPECT_EQ(back.truth.s_star, inst.truth.s_star);
  EXPECT_EQ(back.truth.l_star.sigma(), inst.truth.l_star.sigma());
  EXPECT_EQ(io::read_dense(dir / "full.txt"), full_matrix(inst.truth));
  fs::remove_all(dir);
}

TEST(MatrixIo, SparseRoundTripAndErrors) {
  const fs::path p = fs::temp_directory_path() / "rmc_io_sparse.txt";
  SparseCoo s(3, 4, {{0, 1, 0.1}, {2, 3, -1.0 / 3.0}});
  io::write_sparse(p, s);
  EXPECT_EQ(io::read_sparse(p), s);
  std::ofstream(p) << "2 2 1\n5 0 1.0\n";
  EXPECT_THROW(io::read_sparse(p), std::exception);
  std::ofstream(p) << "2 2 3\n0 0 1.0\n";
  EXPECT_THROW(io::read_sparse(p), FormatError);
  fs::remove(p);
}
