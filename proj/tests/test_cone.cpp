#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "extinguish/cone.hpp"
#include "extinguish/errors.hpp"

using namespace extinguish;
using cd = std::complex<double>;

TEST_CASE("cone membership") {
  CHECK(cone_contains(0.5, cd(0, 1)));
  CHECK_FALSE(cone_contains(0.25, cd(1, 0)));
  // Equality on the Re(a) < 0 side is admitted.
  CHECK(cone_contains(0.25, cd(-4, 3)));
  // Equality on the Re(a) >= 0 side is not.
  CHECK_FALSE(cone_contains(0.25, cd(4, 3)));
  CHECK_FALSE(cone_contains(0.5, cd(0, 0)));
  CHECK_FALSE(cone_contains(0.5, cd(1, -1)));
}

TEST_CASE("cone rejects bad exponents and non-finite coefficients") {
  CHECK_THROWS_AS(cone_contains(0.0, cd(0, 1)), DomainError);
  CHECK_THROWS_AS(cone_contains(1.0, cd(0, 1)), DomainError);
  CHECK_THROWS_AS(cone_contains(1.5, cd(0, 1)), DomainError);
  CHECK_THROWS_AS(cone_contains(0.5, cd(NAN, 1)), DomainError);
  CHECK_THROWS_AS(cone_contains(0.5, cd(0, INFINITY)), DomainError);
}

TEST_CASE("rotation with negative real part") {
  const Rotation<double> r = rotate(ConeParams<double>{0.3, cd(-1, 1)});
  CHECK(std::abs(r.b - std::polar(1.0, -std::numbers::pi / 4)) < 1e-15);
  const cd ab = cd(-1, 1) * r.b;
  CHECK(std::abs(ab - cd(0, std::sqrt(2.0))) < 1e-15);
}

TEST_CASE("rotation with non-negative real part") {
  const double m = 0.25;
  const Rotation<double> r = rotate(ConeParams<double>{m, cd(0, 1)});
  const double expected = (std::numbers::pi / 2 - std::atan(0.75)) / 2;
  CHECK(r.theta_b == doctest::Approx(expected).epsilon(1e-15));
  CHECK(r.theta_b == doctest::Approx(0.46365).epsilon(1e-5));
  const double diff = std::numbers::pi / 2 - r.theta_b;
  CHECK(2 * std::sqrt(m) * std::sin(diff) == doctest::Approx(0.8944).epsilon(1e-4));
  CHECK((1 - m) * std::cos(diff) == doctest::Approx(0.3354).epsilon(1e-3));
  CHECK(r.b.real() > 0);
  CHECK(r.b.imag() < 0);
}

TEST_CASE("rotation requires cone membership") {
  CHECK_THROWS_AS(rotate(ConeParams<double>{0.5, cd(-3, 0)}), DomainError);
}

TEST_CASE("g on simple values") {
  CHECK(g_apply(0.5, cd(4, 0)) == cd(2, 0));
  CHECK(g_apply(0.5, cd(0, 0)) == cd(0, 0));
  CHECK(std::abs(g_apply(0.5, cd(0, -9)) - cd(0, -3)) < 1e-15);
}

TEST_CASE("Liskevich-Perelmuter sides") {
  auto c = lp_check(0.5, cd(1, 0), cd(0, 0));
  CHECK(c.lhs == doctest::Approx(0.0));
  CHECK(c.rhs == doctest::Approx(0.5));
  c = lp_check(0.5, cd(0.3, -2), cd(0.3, -2));
  CHECK(c.lhs == 0.0);
  CHECK(c.rhs == 0.0);
  // w = (sqrt2 - i)(2 + i) = (2 sqrt2 + 1) + (sqrt2 - 2) i.
  c = lp_check(0.5, cd(2, 0), cd(0, 1));
  const double s2 = std::sqrt(2.0);
  CHECK(c.lhs == doctest::Approx(2 * std::sqrt(0.5) * (2 - s2)).epsilon(1e-14));
  CHECK(c.rhs == doctest::Approx(0.5 * (2 * s2 + 1)).epsilon(1e-14));
  CHECK(c.lhs == doctest::Approx(0.8284).epsilon(1e-4));
  CHECK(c.rhs == doctest::Approx(1.9142).epsilon(1e-4));
}

TEST_CASE("templated on long double") {
  const long double m = 0.5L;
  CHECK(cone_contains(m, std::complex<long double>(0, 1)));
  const auto r = rotate(ConeParams<long double>{m, {0.0L, 1.0L}});
  CHECK(std::abs(std::abs(r.b) - 1.0L) < 1e-18L);
}

TEST_CASE("scaling invariance of membership") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int i = 0; i < 10000; ++i) {
    const double m = 0.01 + 0.98 * (u(rng) + 5) / 10;
    const cd a(u(rng), u(rng));
    const double t = std::exp(u(rng));
    CHECK(cone_contains(m, a) == cone_contains(m, t * a));
  }
}
