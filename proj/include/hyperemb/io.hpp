#pragma once

// On-disk formats.
//
// LEMB embedding file (all modules):
//   bytes 0-3  magic ASCII "LEMB"
//   u32 LE     version = 1
//   u32 LE     count
//   u32 LE     dim n
//   f64 LE     curvature c
//   count*n f32 LE space components, row-major
//
// Raw point set file: u32 LE count, then count * 3 f32 LE coordinates.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "hyperemb/losses.hpp"

namespace hyperemb {

struct LembData {
  std::uint32_t count = 0;
  std::uint32_t dim = 0;
  double curvature = 1.0;
  std::vector<float> rows;  // count * dim, row-major

  std::vector<std::vector<double>> to_rows() const;
};

void write_lemb(const std::string& path, const LembData& data);
LembData read_lemb(const std::string& path);  // throws FormatError with byte offset

LembData lemb_from_rows(const std::vector<std::vector<double>>& rows, double curvature);

void write_pointset(const std::string& path, const PointSet& ps);
PointSet read_pointset(const std::string& path);

void write_text_file(const std::string& path, const std::string& contents);
std::string read_text_file(const std::string& path);

}  // namespace hyperemb
