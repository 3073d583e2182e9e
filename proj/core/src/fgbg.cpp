#include "rmc/fgbg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "rmc/errors.hpp"

namespace rmc {
namespace {

// Next header token, skipping whitespace and '#' comments.
std::string header_token(std::istream& in, const std::string& name) {
  std::string tok;
  int c = in.get();
  while (in) {
    if (c == '#') {
      while (in && c != '\n') c = in.get();
    } else if (std::isspace(c)) {
      c = in.get();
    } else {
      break;
    }
  }
  while (in && !std::isspace(c) && c != '#') {
    tok.push_back(static_cast<char>(c));
    c = in.get();
  }
  if (tok.empty()) throw FormatError(name + ": truncated PGM header");
  // `c` is the single whitespace byte that ends the header token.
  return tok;
}

Index parse_dim(const std::string& tok, const std::string& name) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(tok, &used);
    if (used != tok.size() || v <= 0) throw FormatError(name + ": bad PGM header value '" + tok + "'");
    return static_cast<Index>(v);
  } catch (const std::logic_error&) {
    throw FormatError(name + ": bad PGM header value '" + tok + "'");
  }
}

}  // namespace

Eigen::VectorXd read_pgm(const std::filesystem::path& path, Index& width, Index& height) {
  std::ifstream in(path, std::ios::binary);
  const std::string name = path.string();
  if (!in) throw IoError("cannot open " + name);
  char magic[2] = {0, 0};
  in.read(magic, 2);
  if (!in || magic[0] != 'P' || magic[1] != '5') throw FormatError(name + ": not a binary PGM (P5)");
  width = parse_dim(header_token(in, name), name);
  height = parse_dim(header_token(in, name), name);
  const Index maxval = parse_dim(header_token(in, name), name);
  if (maxval != 255) throw FormatError(name + ": unsupported maxval " + std::to_string(maxval));

  std::vector<unsigned char> buf(static_cast<std::size_t>(width * height));
  in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (in.gcount() != static_cast<std::streamsize>(buf.size())) {
    throw FormatError(name + ": truncated pixel data");
  }
  Eigen::VectorXd px(width * height);
  for (Index i = 0; i < px.size(); ++i) px[i] = buf[static_cast<std::size_t>(i)] / 255.0;
  return px;
}

void write_pgm(const std::filesystem::path& path, Index width, Index height,
               const Eigen::VectorXd& pixels) {
  if (pixels.size() != width * height) throw DimensionError("write_pgm: pixel count mismatch");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << "P5\n" << width << ' ' << height << "\n255\n";
  std::vector<unsigned char> buf(static_cast<std::size_t>(pixels.size()));
  for (Index i = 0; i < pixels.size(); ++i) {
    const double v = std::isfinite(pixels[i]) ? std::clamp(pixels[i], 0.0, 1.0) : 0.0;
    buf[static_cast<std::size_t>(i)] = static_cast<unsigned char>(std::lround(v * 255.0));
  }
  out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

FrameStack load_frames(const std::vector<std::filesystem::path>& paths) {
  if (paths.empty()) throw ArgumentError("load_frames: no frames given");
  FrameStack stack;
  for (std::size_t j = 0; j < paths.size(); ++j) {
    Index w = 0, h = 0;
    const Eigen::VectorXd px = read_pgm(paths[j], w, h);
    if (j == 0) {
      stack.width = w;
      stack.height = h;
      stack.data.resize(w * h, static_cast<Index>(paths.size()));
    } else if (w != stack.width || h != stack.height) {
      throw DimensionError("load_frames: " + paths[j].string() + " is " + std::to_string(w) + "x" +
                           std::to_string(h) + ", expected " + std::to_string(stack.width) + "x" +
                           std::to_string(stack.height));
    }
    stack.data.col(static_cast<Index>(j)) = px;
  }
  return stack;
}

std::vector<std::filesystem::path> write_frames(const FrameStack& stack,
                                                const std::filesystem::path& dir,
                                                const std::string& prefix) {
  if (stack.nframes() == 0 || stack.pixels() == 0) throw ArgumentError("write_frames: empty stack");
  if (stack.data.rows() != stack.pixels()) throw DimensionError("write_frames: bad stack shape");
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> out;
  for (Index j = 0; j < stack.nframes(); ++j) {
    char name[64];
    std::snprintf(name, sizeof name, "%s_%04ld.pgm", prefix.c_str(), static_cast<long>(j));
    out.push_back(dir / name);
    write_pgm(out.back(), stack.width, stack.height, stack.data.col(j));
  }
  return out;
}

Separation separate(const FrameStack& stack, double p, const SolverConfig& config) {
  if (stack.nframes() == 0) throw ArgumentError("separate: empty stack");
  RpcaResult res = rpca(stack.data, p, config, /*two_pass=*/true);
  Separation out;
  out.background.width = stack.width;
  out.background.height = stack.height;
  out.background.data = res.l.to_dense();
  out.foreground = std::move(*res.s);
  out.report = std::move(res.report);
  return out;
}

FrameStack foreground_masks(const SparseCoo& foreground, Index width, Index height) {
  if (foreground.rows() != width * height) throw DimensionError("foreground_masks: shape mismatch");
  FrameStack masks;
  masks.width = width;
  masks.height = height;
  masks.data = Eigen::MatrixXd::Zero(foreground.rows(), foreground.cols());
  for (const auto& e : foreground.entries()) masks.data(e.row, e.col) = 1.0;
  return masks;
}

}  // namespace rmc
