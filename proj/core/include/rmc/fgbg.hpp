#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rmc/solver.hpp"
#include "rmc/sparse_coo.hpp"

namespace rmc {

/// Grayscale frames as columns of a (width * height) x nframes matrix,
/// pixels in row-major order, values in [0, 1].
struct FrameStack {
  Index width = 0;
  Index height = 0;
  Eigen::MatrixXd data;

  Index nframes() const { return data.cols(); }
  Index pixels() const { return width * height; }
};

/// Binary PGM (P5, maxval 255) I/O. Values are divided by 255 on read;
/// on write they are clamped to [0, 1] and rounded to 8 bits.
Eigen::VectorXd read_pgm(const std::filesystem::path& path, Index& width, Index& height);
void write_pgm(const std::filesystem::path& path, Index width, Index height,
               const Eigen::VectorXd& pixels);

/// Frames in path order; all must share one size.
FrameStack load_frames(const std::vector<std::filesystem::path>& paths);
/// Writes <prefix>_0000.pgm, ... into `dir` and returns the paths.
std::vector<std::filesystem::path> write_frames(const FrameStack& stack,
                                                const std::filesystem::path& dir,
                                                const std::string& prefix = "frame");

struct Separation {
  FrameStack background;
  SparseCoo foreground;  ///< thresholded residual, same shape as the stack matrix
  SolverReport report;
};

/// Robust PCA on the stack at sampling rate p. The background is the
/// low-rank part; the foreground is the second-pass thresholded residual.
Separation separate(const FrameStack& stack, double p, const SolverConfig& config);

/// 0/1 frames marking the support of `foreground`.
FrameStack foreground_masks(const SparseCoo& foreground, Index width, Index height);

}  // namespace rmc
