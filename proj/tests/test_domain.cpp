#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "extinguish/domain.hpp"
#include "extinguish/errors.hpp"
#include "extinguish/field_io.hpp"
#include "oracles.hpp"

using namespace extinguish;
constexpr double kPi = std::numbers::pi;

namespace {

Field plane_wave(const PeriodicGrid& grid, int k) {
  Field u(grid);
  for (Index j = 0; j < grid.size(); ++j) u.values()[j] = std::polar(1.0, 2 * kPi * k * grid.coordinate(j) / grid.length());
  return u;
}

double max_abs(const ComplexArray& v) { return v.abs().maxCoeff(); }

}  // namespace

TEST_CASE("grid wavenumbers use FFT ordering") {
  const auto grid = PeriodicGrid::make(1, 8, 2 * kPi);
  const std::vector<double> expect{0, 1, 2, 3, -4, -3, -2, -1};
  for (int j = 0; j < 8; ++j) CHECK(grid.wavenumbers()[j] == doctest::Approx(expect[j]).epsilon(1e-15));

  const auto g2 = PeriodicGrid::make(2, 4, 1.0);
  CHECK(g2.size() == 16);
  CHECK(g2.wavenumbers()[2] == doctest::Approx(-4 * kPi));
  CHECK(g2.wavenumbers()[1] == doctest::Approx(2 * kPi));
}

TEST_CASE("grid validation") {
  CHECK_THROWS_AS(PeriodicGrid::make(1, 5, 1.0), DomainError);
  CHECK_THROWS_AS(PeriodicGrid::make(0, 8, 1.0), DomainError);
  CHECK_THROWS_AS(PeriodicGrid::make(6, 4, 1.0), DomainError);
  CHECK_THROWS_AS(PeriodicGrid::make(1, 8, -1.0), DomainError);
  CHECK_THROWS_AS(PeriodicGrid::make(3, 64, 1.0, 1000), MemoryBudgetError);
}

TEST_CASE("laplacian on plane waves, constants and a Gaussian") {
  const auto grid = PeriodicGrid::make(1, 64, 2 * kPi);
  const Field e1 = plane_wave(grid, 1);
  CHECK(max_abs(laplacian(e1).values() + e1.values()) < 1e-12);

  const Field c(grid, ComplexArray::Constant(64, Complex(3.0, -1.0)));
  CHECK(max_abs(laplacian(c).values()) < 1e-13);

  const auto big = PeriodicGrid::make(1, 512, 40.0);
  const Field gauss = gaussian(big, 1.0, 1.0);
  const Field lap = laplacian(gauss);
  double worst = 0.0;
  for (Index j = 0; j < big.size(); ++j)
    worst = std::max(worst, std::abs(lap.values()[j] - oracle::gaussian_second_derivative(big.coordinate(j))));
  CHECK(worst < 1e-10);
}

TEST_CASE("lp norms") {
  const auto grid = PeriodicGrid::make(2, 16, 3.0);
  const Field c(grid, ComplexArray::Constant(grid.size(), Complex(0.0, -2.0)));
  for (double p : {1.0, 1.5, 2.0, 0.8}) CHECK(lp_norm(c, p) == doctest::Approx(2.0 * std::pow(9.0, 1.0 / p)).epsilon(1e-13));
  CHECK(lp_norm(Field(grid), 2.0) == 0.0);

  const auto line = PeriodicGrid::make(1, 512, 40.0);
  const Field gauss = gaussian(line, 1.0, 1.0);
  CHECK(lp_norm(gauss, 2.0) == doctest::Approx(std::sqrt(oracle::gaussian_l2_squared())).epsilon(1e-13));
  CHECK(lp_norm(gauss, 2.0) == doctest::Approx(1.33133).epsilon(1e-5));
}

TEST_CASE("Sobolev norms") {
  const auto grid = PeriodicGrid::make(1, 64, 10.0);
  const Field u = band_limited_random(grid, 3, 10, 1.7);
  CHECK(sobolev_norm(u, 0) == doctest::Approx(lp_norm(u, 2.0)).epsilon(1e-13));

  const Field wave = plane_wave(grid, 3);
  const double k = 2 * kPi * 3 / 10.0;
  CHECK(std::pow(sobolev_norm(wave, 1), 2) == doctest::Approx((1 + k * k) * 10.0).epsilon(1e-12));
  CHECK(std::pow(sobolev_norm(wave, 2), 2) == doctest::Approx(std::pow(1 + k * k, 2) * 10.0).epsilon(1e-12));
  CHECK(std::pow(sobolev_norm_split(wave), 2) == doctest::Approx((1 + k * k * k * k) * 10.0).epsilon(1e-12));
  for (int ell : {0, 1, 2}) CHECK(sobolev_norm(Field(grid), ell) == 0.0);
  CHECK_THROWS_AS(sobolev_norm(u, 3), DomainError);
}

TEST_CASE("inner products") {
  const auto grid = PeriodicGrid::make(1, 32, 2 * kPi);
  const Field one(grid, ComplexArray::Constant(32, 1.0));
  CHECK(inner(one, one).real() == doctest::Approx(2 * kPi).epsilon(1e-14));
  CHECK(std::abs(inner(plane_wave(grid, 1), plane_wave(grid, 2))) < 1e-13);
  const Field u = band_limited_random(grid, 9, 5, 2.0);
  const Complex uu = inner(u, u);
  CHECK(std::abs(uu.imag()) < 1e-13);
  CHECK(uu.real() == doctest::Approx(std::pow(lp_norm(u, 2.0), 2)).epsilon(1e-13));
  const auto other = PeriodicGrid::make(1, 32, 1.0);
  CHECK_THROWS_AS(inner(u, Field(other)), GridMismatchError);
}

TEST_CASE("Parseval, self-adjointness and integration by parts") {
  const auto grid = PeriodicGrid::make(2, 32, 12.0);
  const Field u = band_limited_random(grid, 1, 8, 1.0);
  const Field v = band_limited_random(grid, 2, 8, 3.0);
  const ComplexArray uh = to_spectral(u), vh = to_spectral(v);
  const Complex spectral = grid.cell_volume() / grid.size() * (uh * vh.conjugate()).sum();
  CHECK(std::abs(inner(u, v) - spectral) < 1e-12 * std::abs(spectral));

  const Complex left = inner(laplacian(u), v), right = inner(u, laplacian(v));
  CHECK(std::abs(left - right) < 1e-11 * std::abs(left));

  const double ibp = inner(laplacian(u), u).real();
  CHECK(ibp == doctest::Approx(-gradient_norm_squared(u)).epsilon(1e-11));
}

TEST_CASE("interpolation between L^{2m} and L^2") {
  const auto grid = PeriodicGrid::make(1, 128, 20.0);
  for (double m : {0.3, 0.5, 0.8}) {
    const Field u = band_limited_random(grid, 4, 12, 1.0);
    // 1/(m+1) = alpha/(2m) + (1-alpha)/2.
    const double alpha = (1.0 / (m + 1) - 0.5) / (1.0 / (2 * m) - 0.5);
    const double lhs = lp_norm(u, m + 1), rhs = std::pow(lp_norm(u, 2 * m), alpha) * std::pow(lp_norm(u, 2.0), 1 - alpha);
    CHECK(lhs <= rhs * (1 + 1e-12));
  }
}

TEST_CASE("band-limited random fields") {
  const auto grid = PeriodicGrid::make(1, 8, 1.0);
  const Field c = band_limited_random(grid, 7, 0, 2.0);
  CHECK(lp_norm(c, 2.0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK((c.values() - c.values()[0]).abs().maxCoeff() < 1e-14);
  const Field a = band_limited_random(grid, 7, 3, 1.0), b = band_limited_random(grid, 7, 3, 1.0);
  CHECK((a.values() == b.values()).all());
  CHECK_THROWS_AS(band_limited_random(grid, 7, 4, 1.0), DomainError);

  // No energy above kmax.
  const auto big = PeriodicGrid::make(2, 32, 5.0);
  const Field r = band_limited_random(big, 11, 3, 1.0);
  const ComplexArray hat = to_spectral(r);
  for (Index flat = 0; flat < big.size(); ++flat) {
    const auto idx = big.multi_index(flat);
    bool outside = false;
    for (int d = 0; d < 2; ++d) {
      const Index s = idx[d] < 16 ? idx[d] : idx[d] - 32;
      if (std::abs(s) > 3) outside = true;
    }
    if (outside) CHECK(std::abs(hat[flat]) < 1e-12);
  }
}

TEST_CASE("tail mass fraction") {
  const auto grid = PeriodicGrid::make(1, 512, 40.0);
  CHECK(tail_mass_fraction(gaussian(grid, 1.0, 1.0)) < 1e-100);
  const Field c(grid, ComplexArray::Constant(512, 1.0));
  CHECK(tail_mass_fraction(c) == doctest::Approx(0.2).epsilon(0.01));
}

TEST_CASE("field binary round trip") {
  const auto grid = PeriodicGrid::make(3, 8, 2.5);
  const Field u = band_limited_random(grid, 5, 2, 1.0);
  std::stringstream buf;
  write_field(buf, u);
  const Field v = read_field(buf);
  CHECK(v.grid() == grid);
  CHECK((u.values() == v.values()).all());
}
