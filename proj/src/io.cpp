#include "hmclab/io.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>

namespace hmclab {

static_assert(std::endian::native == std::endian::little, "binary matrix layout assumes a little-endian host");

namespace {

constexpr char kMagic[8] = {'H', 'M', 'C', 'T', 'M', '0', '0', '1'};

std::ofstream open_out(const std::string& path, std::ios::openmode mode = std::ios::out) {
  std::ofstream os(path, mode);
  if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
  return os;
}

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream os = open_out(path);
  for (std::size_t c = 0; c < header.size(); ++c) os << (c ? "," : "") << header[c];
  os << '\n';
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << format_double(row[c]);
    os << '\n';
  }
  if (!os) throw std::runtime_error("write failed for '" + path + "'");
}

void write_matrix(const std::string& path, const Mat& m) {
  std::ofstream os = open_out(path, std::ios::binary);
  os.write(kMagic, 8);
  const std::uint64_t dims[2] = {static_cast<std::uint64_t>(m.rows()), static_cast<std::uint64_t>(m.cols())};
  os.write(reinterpret_cast<const char*>(dims), sizeof dims);
  const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm = m;
  os.write(reinterpret_cast<const char*>(rm.data()), static_cast<std::streamsize>(rm.size() * sizeof(double)));
  if (!os) throw std::runtime_error("write failed for '" + path + "'");
}

Mat read_matrix(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open '" + path + "'");
  char magic[8];
  std::uint64_t dims[2];
  is.read(magic, 8);
  is.read(reinterpret_cast<char*>(dims), sizeof dims);
  if (!is || std::memcmp(magic, kMagic, 8) != 0) throw std::runtime_error("'" + path + "' is not an HMCTM001 matrix");
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm(dims[0], dims[1]);
  is.read(reinterpret_cast<char*>(rm.data()), static_cast<std::streamsize>(rm.size() * sizeof(double)));
  if (!is) throw std::runtime_error("'" + path + "' is truncated");
  return rm;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream os = open_out(path);
  os << text;
  if (!os) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace hmclab
