#include "hyperemb/io.hpp"

#include <cstring>
#include <fstream>
#include <sstream>

#include "hyperemb/errors.hpp"

namespace hyperemb {

namespace {

// All fields are written little-endian; this code assumes a little-endian
// host (checked once at startup of any write/read).
void check_endianness() {
  const std::uint32_t probe = 1;
  char byte0;
  std::memcpy(&byte0, &probe, 1);
  if (byte0 != 1) throw FormatError("big-endian hosts are not supported");
}

template <class T>
void write_raw(std::ofstream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T read_raw(std::ifstream& in, const std::string& path, std::size_t offset) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in)
    throw FormatError(path + ": truncated at byte offset " + std::to_string(offset));
  return v;
}

}  // namespace

std::vector<std::vector<double>> LembData::to_rows() const {
  std::vector<std::vector<double>> out(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    out[i].reserve(dim);
    for (std::uint32_t j = 0; j < dim; ++j)
      out[i].push_back(static_cast<double>(rows[i * dim + j]));
  }
  return out;
}

LembData lemb_from_rows(const std::vector<std::vector<double>>& rows, double curvature) {
  LembData d;
  d.count = static_cast<std::uint32_t>(rows.size());
  d.dim = rows.empty() ? 0 : static_cast<std::uint32_t>(rows[0].size());
  d.curvature = curvature;
  d.rows.reserve(static_cast<std::size_t>(d.count) * d.dim);
  for (const auto& r : rows) {
    require(r.size() == d.dim, "lemb_from_rows: ragged rows");
    for (double v : r) d.rows.push_back(static_cast<float>(v));
  }
  return d;
}

void write_lemb(const std::string& path, const LembData& data) {
  check_endianness();
  require(data.rows.size() == static_cast<std::size_t>(data.count) * data.dim,
          "write_lemb: row buffer size mismatch");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open for writing: " + path);
  out.write("LEMB", 4);
  write_raw(out, std::uint32_t{1});
  write_raw(out, data.count);
  write_raw(out, data.dim);
  write_raw(out, data.curvature);
  out.write(reinterpret_cast<const char*>(data.rows.data()),
            static_cast<std::streamsize>(data.rows.size() * sizeof(float)));
  if (!out) throw FormatError("write failed: " + path);
}

LembData read_lemb(const std::string& path) {
  check_endianness();
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open: " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "LEMB", 4) != 0)
    throw FormatError(path + ": bad magic at byte offset 0 (expected \"LEMB\")");
  const auto version = read_raw<std::uint32_t>(in, path, 4);
  if (version != 1)
    throw FormatError(path + ": unsupported version " + std::to_string(version) +
                      " at byte offset 4");
  LembData d;
  d.count = read_raw<std::uint32_t>(in, path, 8);
  d.dim = read_raw<std::uint32_t>(in, path, 12);
  d.curvature = read_raw<double>(in, path, 16);
  const std::size_t n = static_cast<std::size_t>(d.count) * d.dim;
  d.rows.resize(n);
  in.read(reinterpret_cast<char*>(d.rows.data()),
          static_cast<std::streamsize>(n * sizeof(float)));
  if (!in) throw FormatError(path + ": truncated payload at byte offset 24");
  return d;
}

void write_pointset(const std::string& path, const PointSet& ps) {
  check_endianness();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open for writing: " + path);
  write_raw(out, static_cast<std::uint32_t>(ps.size()));
  for (const auto& p : ps.points)
    for (double v : p) write_raw(out, static_cast<float>(v));
  if (!out) throw FormatError("write failed: " + path);
}

PointSet read_pointset(const std::string& path) {
  check_endianness();
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open: " + path);
  const auto count = read_raw<std::uint32_t>(in, path, 0);
  PointSet ps;
  ps.points.resize(count);
  for (std::uint32_t i = 0; i < count; ++i)
    for (int k = 0; k < 3; ++k)
      ps.points[i][static_cast<std::size_t>(k)] =
          static_cast<double>(read_raw<float>(in, path, 4 + (i * 3 + static_cast<std::uint32_t>(k)) * 4));
  return ps;
}

void write_text_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open for writing: " + path);
  out << contents;
  if (!out) throw FormatError("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace hyperemb
