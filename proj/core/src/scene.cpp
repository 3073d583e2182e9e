#include "rmc/scene.hpp"

#include <cmath>
#include <random>

#include "rmc/errors.hpp"

namespace rmc {

namespace {

double quantize(double v) { return std::round(std::clamp(v, 0.0, 1.0) * 255.0) / 255.0; }

}  // namespace

Scene make_scene(const SceneSpec& spec) {
  if (spec.width < 1 || spec.height < 1 || spec.frames < 1) {
    throw ArgumentError("scene: width, height and frames must be >= 1");
  }
  if (spec.box < 0 || spec.box > std::min(spec.width, spec.height)) {
    throw ArgumentError("scene: box must fit in the frame");
  }
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> phase(0.0, 6.283185307179586);
  const double a = phase(rng), b = phase(rng);

  const Index w = spec.width, h = spec.height, npx = w * h;
  Eigen::VectorXd bg(npx);
  for (Index y = 0; y < h; ++y) {
    for (Index x = 0; x < w; ++x) {
      const double fx = static_cast<double>(x) / static_cast<double>(w);
      const double fy = static_cast<double>(y) / static_cast<double>(h);
      const double v = 0.35 + 0.15 * std::sin(6.0 * fx + a) * std::cos(4.0 * fy + b) + 0.1 * fy;
      bg[y * w + x] = quantize(v);
    }
  }

  Scene s;
  s.frames.width = s.background.width = w;
  s.frames.height = s.background.height = h;
  s.background.data = bg.replicate(1, spec.frames);
  s.frames.data = s.background.data;
  std::vector<Cell> fg;
  if (spec.box > 0) {
    const Index top = (h - spec.box) / 2;
    for (Index f = 0; f < spec.frames; ++f) {
      // one pixel per frame, wrapping
      const Index left = f % (w - spec.box + 1);
      for (Index y = top; y < top + spec.box; ++y) {
        for (Index x = left; x < left + spec.box; ++x) {
          const Index px = y * w + x;
          s.frames.data(px, f) = quantize(bg[px] + spec.contrast);
          fg.push_back({px, f});
        }
      }
    }
  }
  s.foreground = IndexSet(npx, spec.frames, std::move(fg));
  return s;
}

SeparationQuality score_separation(const Scene& scene, const Separation& sep) {
  if (sep.background.data.rows() != scene.background.data.rows() ||
      sep.background.data.cols() != scene.background.data.cols()) {
    throw DimensionError("score_separation: shape mismatch");
  }
  SeparationQuality q;
  const double n = static_cast<double>(scene.background.data.size());
  q.background_rmse = (sep.background.data - scene.background.data).norm() / std::sqrt(n);
  std::size_t hit = 0;
  for (const auto& e : sep.foreground.entries()) {
    if (scene.foreground.contains({e.row, e.col})) ++hit;
  }
  const std::size_t found = sep.foreground.nnz(), truth = scene.foreground.size();
  q.recall = truth ? static_cast<double>(hit) / static_cast<double>(truth) : 1.0;
  q.precision = found ? static_cast<double>(hit) / static_cast<double>(found) : 1.0;
  return q;
}

}  // namespace rmc
