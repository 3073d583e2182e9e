#pragma once

#include <cstdint>

#include "rmc/fgbg.hpp"

namespace rmc {

/// Synthetic video: a static smooth background with a bright square moving
/// left to right (wrapping around). Pixels are quantized to 8 bits.
struct SceneSpec {
  Index width = 64;
  Index height = 48;
  Index frames = 40;
  Index box = 8;          ///< box side in pixels; 0 gives a static scene
  double contrast = 0.4;  ///< box intensity offset above the background
  std::uint64_t seed = 0;
};

struct Scene {
  FrameStack frames;
  FrameStack background;  ///< true background, every frame
  IndexSet foreground;    ///< pixels (row = pixel, col = frame) covered by the box
};

Scene make_scene(const SceneSpec& spec);

struct SeparationQuality {
  double background_rmse = 0.0;
  double recall = 0.0;     ///< |found ∩ true| / |true|, 1 when true is empty
  double precision = 0.0;  ///< |found ∩ true| / |found|, 1 when found is empty
};

SeparationQuality score_separation(const Scene& scene, const Separation& sep);

}  // namespace rmc
