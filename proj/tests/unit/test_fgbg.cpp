#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "rmc/errors.hpp"
#include "rmc/fgbg.hpp"
#include "rmc/scene.hpp"

using namespace rmc;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / name;
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

}  // namespace

TEST(Pgm, RoundTripAndClamp) {
  const fs::path d = scratch("rmc_pgm_rt");
  Eigen::VectorXd px(6);
  px << 0.0, 1.0, 0.5, -3.0, 7.0, 100.0 / 255.0;
  write_pgm(d / "a.pgm", 3, 2, px);
  Index w = 0, h = 0;
  const Eigen::VectorXd back = read_pgm(d / "a.pgm", w, h);
  EXPECT_EQ(w, 3);
  EXPECT_EQ(h, 2);
  EXPECT_EQ(back(0), 0.0);
  EXPECT_EQ(back(1), 1.0);
  EXPECT_EQ(back(3), 0.0);
  EXPECT_EQ(back(4), 1.0);
  EXPECT_NEAR(back(5), 100.0 / 255.0, 1e-15);
  fs::remove_all(d);
}

TEST(Pgm, HeaderComments) {
  const fs::path d = scratch("rmc_pgm_hdr");
  {
    std::ofstream out(d / "c.pgm", std::ios::binary);
    out << "P5\n# a comment\n2 1\n255\n";
    out.put(static_cast<char>(255));
    out.put(static_cast<char>(0));
  }
  Index w = 0, h = 0;
  const auto px = read_pgm(d / "c.pgm", w, h);
  EXPECT_EQ(w, 2);
  EXPECT_EQ(px(0), 1.0);
  fs::remove_all(d);
}

TEST(Pgm, Errors) {
  const fs::path d = scratch("rmc_pgm_err");
  std::ofstream(d / "p2.pgm") << "P2\n1 1\n255\n0\n";
  std::ofstream(d / "max.pgm") << "P5\n1 1\n65535\n";
  std::ofstream(d / "short.pgm") << "P5\n4 4\n255\n";
  Index w, h;
  EXPECT_THROW(read_pgm(d / "p2.pgm", w, h), FormatError);
  EXPECT_THROW(read_pgm(d / "max.pgm", w, h), FormatError);
  EXPECT_THROW(read_pgm(d / "short.pgm", w, h), FormatError);
  EXPECT_THROW(read_pgm(d / "missing.pgm", w, h), IoError);
  EXPECT_THROW(load_frames({}), ArgumentError);
  write_pgm(d / "a.pgm", 2, 2, Eigen::VectorXd::Zero(4));
  write_pgm(d / "b.pgm", 2, 3, Eigen::VectorXd::Zero(6));
  EXPECT_THROW(load_frames({d / "a.pgm", d / "b.pgm"}), DimensionError);
  fs::remove_all(d);
}

TEST(Frames, WriteLoadPreservesOrder) {
  const fs::path d = scratch("rmc_frames");
  FrameStack s;
  s.width = 4;
  s.height = 3;
  s.data = Eigen::MatrixXd::Zero(12, 3);
  for (Index j = 0; j < 3; ++j) s.data(0, j) = (j + 1) * 50 / 255.0;
  const auto paths = write_frames(s, d);
  ASSERT_EQ(paths.size(), 3u);
  EXPECT_EQ(paths[2].filename(), "frame_0002.pgm");
  const auto back = load_frames(paths);
  EXPECT_LT((back.data - s.data).norm(), 1e-12);
  fs::remove_all(d);
}

TEST(Fgbg, StaticSceneHasNoSpuriousForeground) {
  SceneSpec spec;
  spec.width = 24;
  spec.height = 20;
  spec.frames = 30;
  spec.box = 0;
  const auto scene = make_scene(spec);
  SolverConfig c;
  c.target_rank = 1;
  c.epsilon = 1e-6;
  c.seed = 2;
  const auto sep = separate(scene.frames, 0.5, c);
  const double total = static_cast<double>(scene.frames.data.size());
  EXPECT_LE(static_cast<double>(sep.foreground.nnz()), 1e-3 * total);
}

TEST(Fgbg, MovingBoxSeparated) {
  SceneSpec spec;
  spec.width = 32;
  spec.height = 24;
  spec.frames = 40;
  spec.box = 5;
  spec.seed = 4;
  const auto scene = make_scene(spec);
  SolverConfig c;
  c.target_rank = 1;
  c.epsilon = 1e-6;
  c.seed = 3;
  const auto sep = separate(scene.frames, 0.5, c);
  const auto q = score_separation(scene, sep);
  EXPECT_LE(q.background_rmse, 1e-2);
  EXPECT_GE(q.recall, 0.95);
  EXPECT_GE(q.precision, 0.9);
  const auto masks = foreground_masks(sep.foreground, spec.width, spec.height);
  EXPECT_EQ(masks.nframes(), 40);
}
