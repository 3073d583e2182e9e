#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rmc/datagen.hpp"
#include "rmc/matrix_io.hpp"
#include "rmc/operators.hpp"

#ifdef RMC_CLI_PATH

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
  const std::string cmd = std::string(RMC_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch() {
  const fs::path d = fs::temp_directory_path() / "rmc_cli_test";
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

}  // namespace

TEST(Cli, GenSolveEndToEnd) {
  const fs::path d = scratch();
  ASSERT_EQ(run("gen --m 200 --n 200 --rank 3 --p 0.4 --rho 0.02 --seed 7 --out " +
                (d / "inst").string()),
            0);
  EXPECT_TRUE(fs::exists(d / "inst" / "obs.txt"));
  EXPECT_TRUE(fs::exists(d / "inst" / "manifest.json"));
  ASSERT_EQ(run("solve --obs " + (d / "inst" / "obs.txt").string() +
                " --rank 3 --eps 1e-4 --seed 7 --out " + (d / "sol").string()),
            0);
  const auto inst = rmc::read_instance(d / "inst");
  const auto l = rmc::io::read_factors(d / "sol", "l");
  EXPECT_LE(rmc::frob_error(l, inst.truth.l_star) / rmc::frob_norm(inst.truth.l_star), 1e-3);
  fs::remove_all(d);
}

TEST(Cli, ArgumentErrorsExitTwo) {
  const fs::path d = scratch();
  ASSERT_EQ(run("gen --m 30 --n 30 --rank 2 --p 0.5 --seed 1 --out " + (d / "i").string()), 0);
  const std::string obs = (d / "i" / "obs.txt").string();
  EXPECT_EQ(run("solve --obs " + obs + " --rank 0 --out " + (d / "x").string()), 2);
  EXPECT_EQ(run("solve --obs " + obs + " --rank 2 --bogus --out " + (d / "x").string()), 2);
  EXPECT_EQ(run("solve --obs " + obs + " --variant nope --out " + (d / "x").string()), 2);
  EXPECT_EQ(run("solve --obs " + obs + " --rank 31 --out " + (d / "x").string()), 2);
  EXPECT_EQ(run("frobnicate"), 2);
  EXPECT_EQ(run(""), 2);
  fs::remove_all(d);
}

TEST(Cli, NonConvergenceExitThreeWithPartialResults) {
  const fs::path d = scratch();
  ASSERT_EQ(run("gen --m 60 --n 60 --rank 3 --p 0.5 --seed 2 --out " + (d / "i").string()), 0);
  EXPECT_EQ(run("solve --obs " + (d / "i" / "obs.txt").string() +
                " --rank 3 --eps 1e-12 --inner-iters 1 --max-stages 1 --out " +
                (d / "s").string()),
            3);
  EXPECT_TRUE(fs::exists(d / "s" / "l_u.txt"));
  EXPECT_TRUE(fs::exists(d / "s" / "report.json"));
  fs::remove_all(d);
}

TEST(Cli, RepeatedRunsByteIdentical) {
  const fs::path d = scratch();
  for (const char* tag : {"a", "b"}) {
    ASSERT_EQ(run("gen --m 50 --n 40 --rank 2 --p 0.6 --rho 0.02 --seed 3 --out " +
                  (d / "g").string() + tag),
              0);
  }
  for (const char* f : {"obs.txt", "corruptions.txt", "truth_u.txt", "instance.json"}) {
    EXPECT_EQ(slurp(d / "ga" / f), slurp(d / "gb" / f)) << f;
  }
  fs::remove_all(d);
}

#endif
