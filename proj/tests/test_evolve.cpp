#include <doctest.h>

#include <cmath>
#include <numbers>

#include "extinguish/errors.hpp"
#include "extinguish/evolve.hpp"
#include "oracles.hpp"

using namespace extinguish;

namespace {

Field plane_wave(const PeriodicGrid& grid, int k) {
  Field u(grid);
  for (Index j = 0; j < grid.size(); ++j)
    u.values()[j] = std::polar(1.0, 2 * std::numbers::pi * k * grid.coordinate(j) / grid.length());
  return u;
}

Field constant(const PeriodicGrid& grid, Complex c) { return Field(grid, ComplexArray::Constant(grid.size(), c)); }

}  // namespace

TEST_CASE("scalar nonlinear flow against RK4") {
  const ConeParams<double> p{0.5, {0.0, 1.0}};
  CHECK(nonlinear_flow_exact(p, Complex(1.0, 0.0), 2.0) == Complex(0.0, 0.0));
  CHECK(nonlinear_flow_exact(p, Complex(1.0, 0.0), 3.0) == Complex(0.0, 0.0));
  const Complex one = nonlinear_flow_exact(p, Complex(1.0, 0.0), 1.0);
  CHECK(std::abs(one - 0.25) < 1e-15);
  CHECK(std::abs(one - oracle::rk4_pointwise_flow(0.5, {0.0, 1.0}, 1.0, 1.0)) < 1e-10);

  const ConeParams<double> q{0.5, {1.0, 1.0}};
  const Complex rotated = nonlinear_flow_exact(q, Complex(1.0, 0.0), 1.0);
  CHECK(std::abs(rotated - 0.25 * std::polar(1.0, std::log(4.0))) < 1e-14);
  CHECK(std::abs(rotated - oracle::rk4_pointwise_flow(0.5, {1.0, 1.0}, 1.0, 1.0)) < 1e-10);

  const ConeParams<double> r{0.3, {-0.4, 0.8}};
  const Complex z0(0.7, -1.2);
  CHECK(std::abs(nonlinear_flow_exact(r, z0, 0.6) - oracle::rk4_pointwise_flow(0.3, {-0.4, 0.8}, z0, 0.6)) < 1e-10);
}

TEST_CASE("linear flow") {
  const auto grid = PeriodicGrid::make(1, 32, 2 * std::numbers::pi);
  const Field e1 = plane_wave(grid, 1);
  CHECK((linear_flow_exact(e1, std::numbers::pi).values() + e1.values()).abs().maxCoeff() < 1e-13);
  const Field c = constant(grid, Complex(2.0, 1.0));
  CHECK((linear_flow_exact(c, 0.37).values() - c.values()).abs().maxCoeff() < 1e-14);
  const Field u = band_limited_random(grid, 3, 12, 1.3);
  CHECK(lp_norm(linear_flow_exact(u, 0.9), 2.0) == doctest::Approx(1.3).epsilon(1e-13));
}

TEST_CASE("source evaluation") {
  const auto grid = PeriodicGrid::make(1, 128, 20.0);
  const SourceTerm s = SourceTerm::vanishing_profile(gaussian(grid, 5.0, 1.0), 1.0, 1e-3, 6.0);
  CHECK(lp_norm(source_eval(s, 1.0, grid), 2.0) == 0.0);
  CHECK(lp_norm(source_eval(s, 2.0, grid), 2.0) == 0.0);
  CHECK(lp_norm(source_eval(s, 0.0, grid), 2.0) == doctest::Approx(std::sqrt(1e-3)).epsilon(1e-13));
  CHECK(std::pow(lp_norm(source_eval(s, 0.5, grid), 2.0), 2) == doctest::Approx(1e-3 * std::pow(0.5, 6)).epsilon(1e-12));

  const SourceTerm b = SourceTerm::separable(gaussian(grid, 1.0, 1.0), 2.0, Envelope::bump);
  CHECK(envelope_value(b, 1.0) == doctest::Approx(1.0));
  CHECK(envelope_value(b, 2.5) == 0.0);
  CHECK(SourceTerm::zero().is_zero());
  CHECK_THROWS_AS(SourceTerm::vanishing_profile(Field(grid), 1.0, 1e-3, 6.0), DomainError);
}

TEST_CASE("trivial steps") {
  const auto grid = PeriodicGrid::make(1, 64, 20.0);
  const ConeParams<double> p{0.5, {0.0, 1.0}};
  CHECK(lp_norm(step_backward_euler(Field(grid), 0.01, Field(grid), p, {}), 2.0) == 0.0);
  CHECK(lp_norm(step_strang(Field(grid), 0.0, 0.01, SourceTerm::zero(), p), 2.0) == 0.0);
}

TEST_CASE("backward Euler dissipates mass without forcing") {
  const auto grid = PeriodicGrid::make(1, 128, 20.0);
  const ConeParams<double> p{0.4, {-0.3, 1.0}};
  Field u = band_limited_random(grid, 8, 10, 2.0);
  for (int i = 0; i < 20; ++i) {
    const Field next = step_backward_euler(u, 0.01, Field(grid), p, {});
    CHECK(lp_norm(next, 2.0) <= lp_norm(u, 2.0) * (1 + 1e-12));
    u = next;
  }
}

TEST_CASE("Strang without dispersion reproduces the pointwise flow") {
  const auto grid = PeriodicGrid::make(1, 64, 20.0);
  const ConeParams<double> p{0.5, {0.5, 1.0}};
  const Field u0 = band_limited_random(grid, 2, 10, 3.0);
  Field u = u0;
  const double dt = 0.01;
  for (int n = 0; n < 50; ++n) {
    u = step_strang(u, n * dt, dt, SourceTerm::zero(), p, false);
    const Field exact = nonlinear_flow_exact(p, u0, (n + 1) * dt);
    CHECK((u.values() - exact.values()).abs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("backward Euler without dispersion follows its scalar recursion") {
  // With the Laplacian off, each point solves z + i dt a g(z) ... independently; compare with
  // the scalar oracle of the same implicit map (dense Newton on one point).
  const auto grid = PeriodicGrid::make(1, 16, 1.0);
  const ConeParams<double> p{0.5, {0.0, 1.0}};
  const Field u0 = constant(grid, Complex(1.0, 0.0));
  EvolveConfig ec{p, u0};
  ec.dispersion = false;
  ec.dt = 0.01;
  ec.t_end = 3.0;
  ec.solve.tol = 1e-14;
  const EvolveResult r = evolve(ec);
  // Scalar map: r_{n+1} + dt r_{n+1}^m = r_n for real positive data.
  double rr = 1.0;
  int steps = 0;
  while (rr > 0 && steps < 1000) {
    // Solve s^2 + dt s - rr = 0 with s = sqrt(r_{n+1}).
    const double s = 0.5 * (-ec.dt + std::sqrt(ec.dt * ec.dt + 4 * rr));
    rr = s * s;
    ++steps;
    if (steps == 100) CHECK(std::abs(r.series.mass[100] - rr * rr * 1.0) < 1e-10);
  }
  const auto t_num = detect_extinction(r.series, 1e-12);
  REQUIRE(t_num);
  // Backward Euler is first order: its extinction time is within a few steps of 2.
  CHECK(std::abs(*t_num - 2.0) < 0.05);
}

TEST_CASE("evolve with zero data stays zero") {
  const auto grid = PeriodicGrid::make(1, 64, 20.0);
  EvolveConfig ec{ConeParams<double>{0.5, {0.0, 1.0}}, Field(grid)};
  ec.t_end = 0.1;
  ec.dt = 0.01;
  ec.stop_on_extinction = false;
  const EvolveResult r = evolve(ec);
  CHECK(r.series.size() == 11);
  for (double y : r.series.mass) CHECK(y == 0.0);
}

TEST_CASE("unforced mass strictly decreases until extinction") {
  const auto grid = PeriodicGrid::make(1, 256, 30.0);
  EvolveConfig ec{ConeParams<double>{0.5, {0.0, 1.0}}, gaussian(grid, 1.0, 1.0)};
  ec.dt = 2e-3;
  ec.t_end = 5.0;
  ec.cadence = 5;
  const EvolveResult r = evolve(ec);
  const double floor = 1e-12 * r.series.mass[0];
  for (std::size_t j = 1; j < r.series.size(); ++j)
    if (r.series.mass[j - 1] > floor) CHECK(r.series.mass[j] < r.series.mass[j - 1]);
  CHECK(detect_extinction(r.series, 1e-12));
  CHECK(r.final_time < ec.t_end);
}

TEST_CASE("backward Euler is first order") {
  const auto grid = PeriodicGrid::make(1, 128, 20.0);
  auto final_state = [&](double dt) {
    EvolveConfig ec{ConeParams<double>{0.5, {0.0, 1.0}}, gaussian(grid, 1.0, 1.0)};
    ec.dt = dt;
    ec.t_end = 0.4;
    ec.cadence = 1000000;
    ec.solve.tol = 1e-14;
    return evolve(ec).final_state;
  };
  auto distance = [](const Field& u, const Field& v) {
    return lp_norm(Field(u.grid(), ComplexArray(u.values() - v.values())), 2.0);
  };
  const Field ref = final_state(2.5e-4);
  const double e1 = distance(final_state(0.01), ref), e2 = distance(final_state(0.005), ref),
               e4 = distance(final_state(0.0025), ref);
  MESSAGE("error ratios " << e1 / e2 << " " << e2 / e4);
  CHECK(e1 / e2 == doctest::Approx(2.0).epsilon(0.2));
  CHECK(e2 / e4 == doctest::Approx(2.0).epsilon(0.2));
}

TEST_CASE("snapshots, callbacks and the divergence guard") {
  const auto grid = PeriodicGrid::make(1, 64, 20.0);
  EvolveConfig ec{ConeParams<double>{0.5, {0.0, 1.0}}, gaussian(grid, 1.0, 1.0)};
  ec.scheme = Scheme::strang;
  ec.dt = 0.01;
  ec.t_end = 0.5;
  ec.cadence = 10;
  ec.snapshot_times = {0.0, 0.25};
  int records = 0, steps = 0;
  ec.on_record = [&](double, const Field&) { ++records; };
  ec.on_step = [&](double, double, const Field&, const Field&) { ++steps; };
  const EvolveResult r = evolve(ec);
  CHECK(r.snapshots.size() == 2);
  CHECK(r.snapshots[1].first == doctest::Approx(0.25));
  CHECK(records == static_cast<int>(r.series.size()));
  CHECK(steps == r.steps);

  EvolveConfig bad = ec;
  bad.dt = -1;
  CHECK_THROWS_AS(evolve(bad), DomainError);
  bad = ec;
  bad.params.a = {1.0, 0.0};
  CHECK_THROWS_AS(evolve(bad), DomainError);
}
