#pragma once

// Flat binary snapshot layout, little-endian throughout:
//   int64 dims, int64 n, float64 L, then n^dims interleaved (re, im) float64
//   pairs in row-major order.

#include <filesystem>
#include <iosfwd>

#include "extinguish/domain.hpp"

namespace extinguish {

void write_field(std::ostream& out, const Field& u);
Field read_field(std::istream& in);

void write_field(const std::filesystem::path& path, const Field& u);
Field read_field(const std::filesystem::path& path);

}  // namespace extinguish
