#include "extinguish/field_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "extinguish/errors.hpp"

namespace extinguish {

namespace {

template <typename T>
void put_le(std::ostream& out, T value) {
  static_assert(sizeof(T) == 8);
  unsigned char bytes[8];
  std::memcpy(bytes, &value, 8);
  if constexpr (std::endian::native == std::endian::big) {
    for (int i = 0; i < 4; ++i) std::swap(bytes[i], bytes[7 - i]);
  }
  out.write(reinterpret_cast<const char*>(bytes), 8);
}

template <typename T>
T get_le(std::istream& in) {
  static_assert(sizeof(T) == 8);
  unsigned char bytes[8];
  if (!in.read(reinterpret_cast<char*>(bytes), 8)) throw std::runtime_error("truncated field snapshot");
  if constexpr (std::endian::native == std::endian::big) {
    for (int i = 0; i < 4; ++i) std::swap(bytes[i], bytes[7 - i]);
  }
  T value;
  std::memcpy(&value, bytes, 8);
  return value;
}

}  // namespace

void write_field(std::ostream& out, const Field& u) {
  const auto& grid = u.grid();
  put_le<std::int64_t>(out, grid.dims());
  put_le<std::int64_t>(out, grid.n());
  put_le<double>(out, grid.length());
  for (const Complex& value : u.values()) {
    put_le<double>(out, value.real());
    put_le<double>(out, value.imag());
  }
  if (!out) throw std::runtime_error("failed writing field snapshot");
}

Field read_field(std::istream& in) {
  const auto dims = get_le<std::int64_t>(in);
  const auto n = get_le<std::int64_t>(in);
  const auto length = get_le<double>(in);
  const PeriodicGrid grid = PeriodicGrid::make(static_cast<int>(dims), n, length);
  Field u(grid);
  for (Complex& value : u.values()) {
    const double re = get_le<double>(in);
    const double im = get_le<double>(in);
    value = Complex(re, im);
  }
  return u;
}

void write_field(const std::filesystem::path& path, const Field& u) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_field(out, u);
}

Field read_field(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_field(in);
}

}  // namespace extinguish
