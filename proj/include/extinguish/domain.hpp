#pragma once

// Periodic box [-L/2, L/2)^N standing in for R^N, complex fields on it, and
// the spectral operators and norms used throughout.
//
// Transform convention: forward is unnormalized, hat(u)_k = sum_j u_j e^{-i k.x_j};
// inverse carries the 1/n^N factor. With cell volume h^N this gives
//   ||u||_{L2}^2 = h^N sum_j |u_j|^2 = (h^N / n^N) sum_k |hat(u)_k|^2.

#include <Eigen/Core>
#include <array>
#include <complex>
#include <cstdint>
#include <memory>

namespace extinguish {

using Index = Eigen::Index;
using Complex = std::complex<double>;
using ComplexArray = Eigen::ArrayXcd;
using RealArray = Eigen::ArrayXd;

inline constexpr int kMaxDims = 5;

/// Default cap on n^N; 2^24 points is 256 MiB per complex field.
inline constexpr Index kDefaultPointBudget = Index(1) << 24;

class PeriodicGrid {
 public:
  /// Throws DomainError for dims outside 1..5, n < 4 or not a power of two, L <= 0;
  /// MemoryBudgetError when n^dims exceeds max_points.
  static PeriodicGrid make(int dims, Index n, double box_length, Index max_points = kDefaultPointBudget);

  int dims() const;
  Index n() const;
  double length() const;
  double spacing() const;
  /// Total number of grid points n^dims.
  Index size() const;
  /// h^dims.
  double cell_volume() const;

  /// Signed wavenumbers 2 pi j / L in FFT order, one dimension.
  const RealArray& wavenumbers() const;
  /// |k|^2 over the full spectral grid, row-major like the field values.
  const RealArray& k_squared() const;
  double max_k_squared() const;

  /// Physical coordinate -L/2 + j h of index j along any axis.
  double coordinate(Index j) const;
  /// Row-major decomposition of a flat index; only the first dims() entries are meaningful.
  std::array<Index, kMaxDims> multi_index(Index flat) const;

  /// out = unnormalized forward DFT of in. in and out must not alias.
  void forward(const ComplexArray& in, ComplexArray& out) const;
  /// out = normalized inverse DFT of in. in and out must not alias.
  void inverse(const ComplexArray& in, ComplexArray& out) const;

  friend bool operator==(const PeriodicGrid& lhs, const PeriodicGrid& rhs);

 private:
  struct State;
  explicit PeriodicGrid(std::shared_ptr<const State> state) : state_(std::move(state)) {}
  std::shared_ptr<const State> state_;
};

/// Complex field sampled on a PeriodicGrid.
class Field {
 public:
  explicit Field(PeriodicGrid grid);
  Field(PeriodicGrid grid, ComplexArray values);

  static Field zeros(const PeriodicGrid& grid) { return Field(grid); }

  const PeriodicGrid& grid() const { return grid_; }
  const ComplexArray& values() const { return values_; }
  ComplexArray& values() { return values_; }
  Index size() const { return values_.size(); }

  bool all_finite() const;

 private:
  PeriodicGrid grid_;
  ComplexArray values_;
};

/// Throws GridMismatchError unless both fields live on equal grids.
void require_same_grid(const Field& u, const Field& v);

/// Forward transform of the field values.
ComplexArray to_spectral(const Field& u);
Field from_spectral(const PeriodicGrid& grid, const ComplexArray& coefficients);

/// Multiplies the spectrum of u by a per-mode symbol.
Field apply_symbol(const Field& u, const ComplexArray& symbol);

Field laplacian(const Field& u);

/// (h^N sum |u_j|^p)^{1/p}. p below 1 is accepted as a quasi-norm.
double lp_norm(const Field& u, double p);

/// h^N sum |u_j|^p, the p-th power of lp_norm without the root.
double lp_integral(const Field& u, double p);

/// Parseval form of the H^ell norm, ell in {0,1,2}: weight (1+|k|^2)^ell.
double sobolev_norm(const Field& u, int ell);

/// (||u||^2 + ||Lap u||^2)^{1/2}, equivalent to the H^2 norm.
double sobolev_norm_split(const Field& u);

/// ||grad u||^2 computed spectrally as (h^N/n^N) sum |k|^2 |hat(u)|^2.
double gradient_norm_squared(const Field& u);

/// h^N sum u_j conj(v_j).
Complex inner(const Field& u, const Field& v);

/// Independent complex Gaussian coefficients on modes with |index|_inf <= kmax,
/// scaled to the requested L2 norm. Throws DomainError if kmax >= n/2.
Field band_limited_random(const PeriodicGrid& grid, std::uint64_t seed, int kmax, double amplitude);

/// amplitude * exp(-|x|^2 / (2 width^2)) centered at the origin.
Field gaussian(const PeriodicGrid& grid, double amplitude, double width);

/// Fraction of L2 mass at points with some coordinate |x_j| >= 0.4 L (the outer 10% on each side).
double tail_mass_fraction(const Field& u);

/// Sets |u_j| < cutoff to exactly zero.
void flush_tiny(Field& u, double cutoff = 1e-300);

}  // namespace extinguish
