#include "rmc/matrix_io.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "rmc/errors.hpp"

namespace rmc::io {
namespace {

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return in;
}

}  // namespace

void write_sparse(std::ostream& out, const SparseCoo& s) {
  out << s.rows() << ' ' << s.cols() << ' ' << s.nnz() << '\n';
  for (const auto& e : s.entries()) {
    out << e.row << ' ' << e.col << ' ' << format_real(e.value) << '\n';
  }
  if (!out) throw IoError("write failed");
}

void write_sparse(const std::filesystem::path& path, const SparseCoo& s) {
  auto out = open_out(path);
  write_sparse(out, s);
}

SparseCoo read_sparse(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("matrix file: missing header");
  std::istringstream header(line);
  long long m = -1, n = -1, nnz = -1;
  if (!(header >> m >> n >> nnz) || m < 0 || n < 0 || nnz < 0) {
    throw FormatError("matrix file: header must be 'm n nnz'");
  }
  std::vector<Entry> entries;
  entries.reserve(static_cast<std::size_t>(nnz));
  for (long long k = 0; k < nnz; ++k) {
    if (!std::getline(in, line)) {
      throw FormatError("matrix file: expected " + std::to_string(nnz) + " entries, got " +
                        std::to_string(k));
    }
    std::istringstream row(line);
    long long i = 0, j = 0;
    double v = 0.0;
    if (!(row >> i >> j >> v)) {
      throw FormatError("matrix file: malformed entry line " + std::to_string(k + 2));
    }
    entries.push_back({static_cast<Index>(i), static_cast<Index>(j), v});
  }
  return SparseCoo(static_cast<Index>(m), static_cast<Index>(n), std::move(entries));
}

SparseCoo read_sparse(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_sparse(in);
}

void write_dense(const std::filesystem::path& path, const Eigen::MatrixXd& a) {
  auto out = open_out(path);
  out << a.rows() << ' ' << a.cols() << ' ' << a.size() << '\n';
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out << i << ' ' << j << ' ' << format_real(a(i, j)) << '\n';
    }
  }
  if (!out) throw IoError("write failed: " + path.string());
}

Eigen::MatrixXd read_dense(const std::filesystem::path& path) {
  return read_sparse(path).to_dense();
}

void write_factors(const std::filesystem::path& dir, const std::string& stem,
                   const LowRankFactors& f) {
  write_dense(dir / (stem + "_u.txt"), f.u());
  write_dense(dir / (stem + "_sigma.txt"), Eigen::MatrixXd(f.sigma()));
  write_dense(dir / (stem + "_v.txt"), f.v());
}

LowRankFactors read_factors(const std::filesystem::path& dir, const std::string& stem) {
  const Eigen::MatrixXd u = read_dense(dir / (stem + "_u.txt"));
  const Eigen::MatrixXd sigma = read_dense(dir / (stem + "_sigma.txt"));
  const Eigen::MatrixXd v = read_dense(dir / (stem + "_v.txt"));
  if (sigma.cols() != 1 && sigma.size() != 0) {
    throw FormatError("factor file: sigma must be a k x 1 matrix");
  }
  return LowRankFactors(u, sigma.col(0), v);
}

}  // namespace rmc::io
