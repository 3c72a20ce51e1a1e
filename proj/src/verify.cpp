#include "extinguish/verify.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>

#include "extinguish/cone.hpp"
#include "extinguish/diagnostics.hpp"
#include "extinguish/domain.hpp"
#include "extinguish/errors.hpp"
#include "extinguish/evolve.hpp"
#include "extinguish/resolvent.hpp"

namespace extinguish {

namespace {

using Rng = std::mt19937_64;
const Complex kI(0.0, 1.0);

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string num(Complex z) { return num(z.real()) + "," + num(z.imag()); }

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

/// Random (m, a) strictly inside the cone: arg(a) in (phi_m, pi - phi_m), |a| log-uniform in [0.1, 10].
ConeParams<double> random_admissible(Rng& rng, double m_lo = 0.01, double m_hi = 0.99) {
  const double m = uniform(rng, m_lo, m_hi);
  const double phi = cone_boundary_angle(m);
  double theta = uniform(rng, phi, std::numbers::pi - phi);
  if (theta <= phi) theta = std::nextafter(phi, 4.0);
  const double radius = std::exp(uniform(rng, std::log(0.1), std::log(10.0)));
  return {m, std::polar(radius, theta)};
}

/// Tracks the worst sample of one property.
struct Tracker {
  PropertyResult result;
  bool seen = false;
  double worst_failure = -std::numeric_limits<double>::infinity();

  Tracker(std::string suite, std::string name, std::string detail) {
    result.suite = std::move(suite);
    result.name = std::move(name);
    result.detail = std::move(detail);
    result.worst = -std::numeric_limits<double>::infinity();
  }

  /// Records a statistic; `ok` says whether this sample satisfies the property.
  void add(double value, bool ok, const std::function<std::string()>& dump) {
    if (!seen || value > result.worst) result.worst = value;
    seen = true;
    if (ok) return;
    if (result.passed || value >= worst_failure) {
      result.counterexample = dump();
      worst_failure = value;
    }
    result.passed = false;
  }

  PropertyResult finish() {
    if (!seen) result.worst = 0.0;
    return result;
  }
};

// ---------------------------------------------------------------------------
// cone

void cone_suite(std::uint64_t seed, long long trials, std::vector<PropertyResult>& out) {
  Rng rng(seed);
  Tracker lp("cone", "lp_inequality", "(lhs - rhs) / max(1, rhs) <= 1e-12");
  Tracker modulus("cone", "g_modulus", "| |g(z)| - |z|^m | / |z|^m <= 1e-13");
  Tracker holder("cone", "holder_bound", "|g(z1) - g(z2)| / |z1 - z2|^m <= 3");

  for (long long i = 0; i < trials; ++i) {
    const double m = uniform(rng, 0.01, 0.99);
    const Complex z1(uniform(rng, -10, 10), uniform(rng, -10, 10));
    const Complex z2(uniform(rng, -10, 10), uniform(rng, -10, 10));
    const auto dump = [&] { return "m=" + num(m) + " z1=" + num(z1) + " z2=" + num(z2); };

    const LpCheck<double> c = lp_check(m, z1, z2);
    const double excess = (c.lhs - c.rhs) / std::max(1.0, c.rhs);
    lp.add(excess, excess <= 1e-12, dump);

    const double expect = std::pow(std::abs(z1), m);
    const double rel = std::abs(std::abs(g_apply(m, z1)) - expect) / expect;
    modulus.add(rel, rel <= 1e-13, dump);

    const double dist = std::abs(z1 - z2);
    if (dist > 0) {
      const double ratio = std::abs(g_apply(m, z1) - g_apply(m, z2)) / std::pow(dist, m);
      holder.add(ratio, ratio <= 3.0, dump);
    }
  }
  out.push_back(lp.finish());
  out.push_back(modulus.finish());
  out.push_back(holder.finish());

  Tracker rot("cone", "rotation_invariants", "max violation of |b|=1, Re b>0, Im b<0, strict ab inequality; <= 1e-12");
  const long long rotations = std::min<long long>(trials, 100000);
  for (long long i = 0; i < rotations; ++i) {
    const ConeParams<double> p = random_admissible(rng);
    const Rotation<double> r = rotate(p);
    const Complex ab = p.a * r.b;
    const double scale = std::abs(p.a);
    const double unit = std::abs(std::abs(r.b) - 1.0);
    const double margin = 2.0 * std::sqrt(p.m) * ab.imag() - (1.0 - p.m) * ab.real();
    const double violation = std::max({unit, -r.b.real(), r.b.imag(), -ab.real() / scale, 0.0});
    const bool ok = unit <= 1e-12 && r.b.real() > 0 && r.b.imag() < 0 && margin > 0 && ab.real() >= -1e-12 * scale;
    rot.add(violation, ok, [&] { return "m=" + num(p.m) + " a=" + num(p.a) + " b=" + num(r.b); });
  }
  out.push_back(rot.finish());

  Tracker scaling("cone", "scaling_invariance", "count of (m, a, t) with cone_contains(a) != cone_contains(t a)");
  double mismatches = 0;
  for (long long i = 0; i < rotations; ++i) {
    const double m = uniform(rng, 0.01, 0.99);
    const Complex a(uniform(rng, -5, 5), uniform(rng, -1, 5));
    const double t = std::exp(uniform(rng, std::log(1e-3), std::log(1e3)));
    const bool same = cone_contains(m, a) == cone_contains(m, t * a);
    if (!same) mismatches += 1;
    scaling.add(mismatches, same, [&] { return "m=" + num(m) + " a=" + num(a) + " t=" + num(t); });
  }
  out.push_back(scaling.finish());

  // Field-level monotonicity on a 1D grid.
  Tracker mono("cone", "field_monotonicity", "-Re(-i a int (g(u)-g(v)) conj(u-v)) / scale <= 1e-10");
  const PeriodicGrid grid = PeriodicGrid::make(1, 128, 20.0);
  std::vector<ConeParams<double>> coefficients;
  for (int k = 0; k < 10; ++k) coefficients.push_back(random_admissible(rng, 0.05, 0.95));
  const long long pairs = std::min<long long>(trials, 1000);
  for (long long i = 0; i < pairs; ++i) {
    const Field u = band_limited_random(grid, rng(), 1 + static_cast<int>(rng() % 30), uniform(rng, 0.01, 5.0));
    const Field v = band_limited_random(grid, rng(), 1 + static_cast<int>(rng() % 30), uniform(rng, 0.01, 5.0));
    for (const auto& p : coefficients) {
      const ComplexArray dg = g_field(p.m, u).values() - g_field(p.m, v).values();
      const ComplexArray du = u.values() - v.values();
      const double value = (-kI * p.a * grid.cell_volume() * (dg * du.conjugate()).sum()).real();
      const double scale = std::abs(p.a) * grid.cell_volume() * (dg.abs() * du.abs()).sum();
      const double stat = scale > 0 ? -value / scale : 0.0;
      mono.add(stat, value >= -1e-10 * scale, [&] { return "m=" + num(p.m) + " a=" + num(p.a) + " pair=" + std::to_string(i); });
    }
  }
  out.push_back(mono.finish());
}

// ---------------------------------------------------------------------------
// resolvent

void resolvent_suite(std::uint64_t seed, long long trials, std::vector<PropertyResult>& out) {
  Rng rng(seed);
  const PeriodicGrid grid = PeriodicGrid::make(1, 64, 20.0);
  std::vector<ConeParams<double>> coefficients{{0.5, {0.0, 1.0}}, {0.3, {-1.0, 1.0}}, {0.7, {0.2, 1.0}}};
  coefficients.push_back(random_admissible(rng, 0.2, 0.8));

  SolveOptions opts;
  opts.tol = 1e-12;
  opts.max_iter = 20000;

  Tracker contraction("resolvent", "contraction", "||u - v|| / ((1/b0) ||F - G||) <= 1 + 1e-8");
  Tracker apriori("resolvent", "a_priori_constant",
                  "empirical M = max (||u||_H2^2 + ||u||_{m+1}^{m+1} + ||u||_{2m}^{2m}) / ||F||^2 (reported)");
  Tracker lapsign("resolvent", "laplacian_sign",
                  "-Re(i a <g(u), Lap u>) / (||u||_H2 ||u||_{2m}^m) <= 1e-8");

  for (double lambda : {1e-3, 1e-2, 1e-1}) {
    for (double b0 : {0.5, 1.0, 2.0}) {
      for (long long i = 0; i < trials; ++i) {
        const ConeParams<double>& p = coefficients[static_cast<std::size_t>(i) % coefficients.size()];
        const Field f = band_limited_random(grid, rng(), 1 + static_cast<int>(rng() % 20), uniform(rng, 0.1, 3.0));
        const Field g = band_limited_random(grid, rng(), 1 + static_cast<int>(rng() % 20), uniform(rng, 0.1, 3.0));
        const auto dump = [&] {
          return "lambda=" + num(lambda) + " b0=" + num(b0) + " m=" + num(p.m) + " a=" + num(p.a) + " trial=" +
                 std::to_string(i);
        };
        std::optional<ResolventSolution> su, sv;
        try {
          su = solve_resolvent({lambda, b0, p, f}, opts);
          sv = solve_resolvent({lambda, b0, p, g}, opts);
        } catch (const ConvergenceError& e) {
          contraction.add(std::numeric_limits<double>::infinity(), false,
                          [&] { return dump() + " non-convergence residual=" + num(e.residual()); });
          continue;
        }
        const double diff_f = lp_norm(Field(grid, ComplexArray(f.values() - g.values())), 2.0);
        const double diff_u = lp_norm(Field(grid, ComplexArray(su->u.values() - sv->u.values())), 2.0);
        const double ratio = diff_u / (diff_f / b0);
        contraction.add(ratio, ratio <= 1.0 + 1e-8, dump);

        for (const auto* s : {&*su, &*sv}) {
          const Field& u = s->u;
          const Field& rhs = s == &*su ? f : g;
          const double h2 = sobolev_norm(u, 2);
          const double combo = h2 * h2 + lp_integral(u, p.m + 1.0) + lp_integral(u, 2.0 * p.m);
          const double ratio_m = combo / std::pow(lp_norm(rhs, 2.0), 2);
          apriori.add(ratio_m, std::isfinite(ratio_m), dump);

          const Field gu = g_field(p.m, u);
          const double value = (kI * p.a * inner(gu, laplacian(u))).real();
          const double scale = h2 * lp_norm(gu, 2.0);
          const double stat = scale > 0 ? -value / scale : 0.0;
          lapsign.add(stat, value >= -1e-8 * scale, dump);
        }
      }
    }
  }
  out.push_back(contraction.finish());
  out.push_back(apriori.finish());
  out.push_back(lapsign.finish());

  // Plain Picard residuals after the first step, for lambda |a| <= 0.1 b0. An increase
  // must hand over to the relaxed update, which then has to converge.
  Tracker picard("resolvent", "picard_monotone",
                 "count of non-monotone plain Picard runs; each must converge after the relaxation fallback");
  const long long picard_trials = std::min<long long>(trials, 50) * 9;
  SolveOptions picard_opts;
  picard_opts.mode = SolveMode::picard;
  picard_opts.tol = 1e-12;
  picard_opts.max_iter = 2000;
  double violations = 0;
  for (long long i = 0; i < picard_trials; ++i) {
    const ConeParams<double>& p = coefficients[static_cast<std::size_t>(i) % coefficients.size()];
    const double b0 = uniform(rng, 0.5, 2.0);
    const double lambda = uniform(rng, 0.1, 1.0) * 0.1 * b0 / std::abs(p.a);
    const Field f = band_limited_random(grid, rng(), 1 + static_cast<int>(rng() % 10), uniform(rng, 0.5, 3.0));
    const auto dump = [&] { return "lambda=" + num(lambda) + " b0=" + num(b0) + " m=" + num(p.m) + " a=" + num(p.a); };
    try {
      const ResolventSolution s = solve_resolvent({lambda, b0, p, f}, picard_opts);
      if (s.relaxed) violations += 1;
      picard.add(violations, true, dump);
    } catch (const ConvergenceError&) {
      picard.add(violations, false, dump);
    }
  }
  out.push_back(picard.finish());
}

// ---------------------------------------------------------------------------
// evolve

double l2_distance(const Field& u, const Field& v) { return lp_norm(Field(u.grid(), ComplexArray(u.values() - v.values())), 2.0); }

void evolve_suite(std::uint64_t seed, long long trials, std::vector<PropertyResult>& out) {
  Rng rng(seed);
  const PeriodicGrid grid = PeriodicGrid::make(1, 128, 20.0);
  const long long runs = std::min<long long>(trials, 4);

  Tracker mass("evolve", "mass_non_increasing", "max (y_{j+1} - y_j) / y_0 over f=0 runs <= 1e-12");
  Tracker gradient("evolve", "gradient_non_increasing", "max increase of ||grad u||^2 per step / initial <= 1e-8");
  Tracker contraction("evolve", "data_contraction", "max (||u-v|| - bound) / scale over records <= 1e-8");

  for (long long r = 0; r < runs; ++r) {
    const ConeParams<double> p = random_admissible(rng, 0.3, 0.8);
    const Field u0 = band_limited_random(grid, rng(), 6, uniform(rng, 0.5, 2.0));
    const auto dump = [&] { return "m=" + num(p.m) + " a=" + num(p.a) + " run=" + std::to_string(r); };
    for (Scheme scheme : {Scheme::backward_euler, Scheme::strang}) {
      EvolveConfig ec{p, u0};
      ec.scheme = scheme;
      ec.dt = scheme == Scheme::strang ? 2e-3 : 1e-2;
      ec.t_end = 1.0;
      ec.stop_on_extinction = false;
      double worst_grad = 0.0;
      const double grad0 = gradient_norm_squared(u0);
      ec.on_step = [&](double, double, const Field& a, const Field& b) {
        worst_grad = std::max(worst_grad, (gradient_norm_squared(b) - gradient_norm_squared(a)) / grad0);
      };
      const EvolveResult result = evolve(ec);
      double worst_mass = -std::numeric_limits<double>::infinity();
      for (std::size_t j = 1; j < result.series.size(); ++j)
        worst_mass = std::max(worst_mass, (result.series.mass[j] - result.series.mass[j - 1]) / result.series.mass[0]);
      mass.add(worst_mass, worst_mass <= 1e-12, dump);
      gradient.add(worst_grad, worst_grad <= 1e-8, dump);
    }

    // Two trajectories, perturbed datum and source.
    const Field shape = gaussian(grid, 1.0, 1.5);
    EvolveConfig a{p, u0};
    a.dt = 1e-2;
    a.t_end = 1.0;
    a.stop_on_extinction = false;
    a.source = SourceTerm::separable(shape, 0.5, Envelope::bump);
    EvolveConfig b = a;
    b.u0.values() += band_limited_random(grid, rng(), 4, 0.1).values();
    b.source = SourceTerm::separable(Field(grid, ComplexArray(1.2 * shape.values())), 0.5, Envelope::bump);
    std::vector<Field> ua, ub;
    a.on_record = [&](double, const Field& u) { ua.push_back(u); };
    b.on_record = [&](double, const Field& u) { ub.push_back(u); };
    const EvolveResult ra = evolve(a);
    evolve(b);
    const double scale = lp_norm(u0, 2.0) + 0.5 * lp_norm(shape, 2.0);
    double integral = 0.0;
    double worst = -std::numeric_limits<double>::infinity();
    const double base = l2_distance(a.u0, b.u0);
    for (std::size_t j = 0; j < ua.size() && j < ub.size(); ++j) {
      if (j > 0) {
        // Backward Euler samples the source at the right endpoint.
        const double t = ra.series.times[j];
        const double dt = t - ra.series.times[j - 1];
        integral += dt * l2_distance(source_eval(a.source, t, grid), source_eval(b.source, t, grid));
      }
      const double excess = (l2_distance(ua[j], ub[j]) - base - integral) / scale;
      worst = std::max(worst, excess);
    }
    contraction.add(worst, worst <= 1e-8, dump);
  }
  out.push_back(mass.finish());
  out.push_back(gradient.finish());
  out.push_back(contraction.finish());

  // Without the Laplacian the flow is pointwise and extinguishes at r0^{1-m}/((1-m) Im a).
  Tracker oracle("evolve", "zero_dispersion_extinction", "|T_num - T_exact| / dt <= 1");
  for (double amplitude : {1.0, 0.5, 2.0}) {
    const ConeParams<double> p{0.5, {0.0, 1.0}};
    EvolveConfig ec{p, Field(grid, ComplexArray::Constant(grid.size(), Complex(amplitude, 0.0)))};
    ec.scheme = Scheme::strang;
    ec.dispersion = false;
    ec.stop_on_extinction = false;
    ec.dt = 1e-3;
    ec.t_end = 4.0 * std::sqrt(amplitude) + 0.1;
    const EvolveResult result = evolve(ec);
    const auto t_num = detect_extinction(result.series, 1e-300);
    const double exact = std::pow(amplitude, 1.0 - p.m) / ((1.0 - p.m) * p.a.imag());
    const double stat = t_num ? std::abs(*t_num - exact) / ec.dt : std::numeric_limits<double>::infinity();
    oracle.add(stat, stat <= 1.0, [&] { return "r0=" + num(amplitude) + " t_num=" + (t_num ? num(*t_num) : "none"); });
  }
  out.push_back(oracle.finish());
}

// ---------------------------------------------------------------------------
// diagnostics

/// Extinction time of y' = -C y^delta by quadrature of dt/dsigma = e^{-(1-delta) sigma}/C, y = e^{-sigma}.
double quadrature_extinction_time(double y0, double c, double delta) {
  const double q = 1.0 - delta;
  const double s0 = -std::log(y0);
  const double span = 60.0 / q;
  const int steps = 200000;
  const double h = span / steps;
  double total = 0.0;
  for (int k = 0; k < steps; ++k) {
    // Simpson on each panel.
    const double a = s0 + k * h;
    total += h / 6.0 * (std::exp(-q * a) + 4.0 * std::exp(-q * (a + 0.5 * h)) + std::exp(-q * (a + h)));
  }
  return total / c;
}

double rk4_value(double y0, double c, double delta, double t_end) {
  const auto rhs = [&](double y) { return -c * std::pow(std::max(y, 0.0), delta); };
  double y = y0;
  double t = 0.0;
  while (t < t_end) {
    // Step limited by the local relative rate, so the stiff start is resolved.
    const double h = std::min({1e-3, 2e-3 * y / std::abs(rhs(y)), t_end - t});
    const double k1 = rhs(y);
    const double k2 = rhs(y + 0.5 * h * k1);
    const double k3 = rhs(y + 0.5 * h * k2);
    const double k4 = rhs(y + h * k3);
    y += h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
    t += h;
  }
  return y;
}

void diagnostics_suite(std::uint64_t seed, long long trials, std::vector<PropertyResult>& out) {
  Rng rng(seed);

  Tracker range("diagnostics", "delta_range", "count of (N, ell, m) where delta in (1/2,1) disagrees with N < 2 ell");
  double bad = 0;
  for (int dims = 1; dims <= 5; ++dims) {
    for (int ell = 1; ell <= 2; ++ell) {
      for (double m : {0.01, 0.1, 0.25, 0.5, 0.75, 0.9, 0.99}) {
        const double d = delta_exponent(dims, ell, m).delta;
        const bool extinct = d > 0.5 && d < 1.0;
        const double theta = (m + 1.0) / (2.0 * d);
        const bool ok = extinct == (dims < 2 * ell) && d > 0.5 && theta > 0.0 && theta < 1.0;
        if (!ok) bad += 1;
        range.add(bad, ok, [&] { return "N=" + std::to_string(dims) + " ell=" + std::to_string(ell) + " m=" + num(m); });
      }
    }
  }
  out.push_back(range.finish());

  Tracker ode("diagnostics", "comparator_vs_rk4", "relative gap between the closed form and the quadrature/RK4 oracle <= 1e-8");
  const long long samples = std::min<long long>(trials, 200);
  for (long long i = 0; i < samples; ++i) {
    const double y0 = std::exp(uniform(rng, std::log(1e-2), std::log(1e2)));
    const double c = uniform(rng, 0.1, 5.0);
    const bool finite = i % 2 == 0;
    const double delta = finite ? uniform(rng, 0.55, 0.95) : uniform(rng, 1.0, 2.5);
    double rel;
    if (finite) {
      const double exact = ode_comparator_bound(y0, c, delta);
      rel = std::abs(exact - quadrature_extinction_time(y0, c, delta)) / exact;
    } else {
      const double t = uniform(rng, 0.5, 10.0);
      const double exact = ode_comparator_value(y0, c, delta, t);
      rel = std::abs(exact - rk4_value(y0, c, delta, t)) / exact;
    }
    ode.add(rel, rel <= 1e-8, [&] { return "y0=" + num(y0) + " C=" + num(c) + " delta=" + num(delta); });
  }
  out.push_back(ode.finish());

  // Comparator dominance on a dispersive f=0 run.
  Tracker dominance("diagnostics", "comparator_dominance",
                    "max (y^{1-d} - (y(T0)^{1-d} - (1-d) C_emp (t-T0))) / y(T0)^{1-d} <= 1e-6, plus monotone mass");
  {
    const PeriodicGrid grid = PeriodicGrid::make(1, 256, 30.0);
    const ConeParams<double> p{0.5, {0.0, 1.0}};
    EvolveConfig ec{p, gaussian(grid, 1.0, 1.0)};
    ec.scheme = Scheme::backward_euler;
    ec.dt = 1e-3;
    ec.t_end = 3.0;
    const EvolveResult result = evolve(ec);
    const auto& s = result.series;
    const double d = delta_exponent(1, 1, p.m).delta;
    const ExtinctionFit fit = fit_extinction_constant(s, d, p, 0.0);
    const double head = std::pow(s.mass.front(), 1.0 - d);
    double worst = -std::numeric_limits<double>::infinity();
    bool monotone = true;
    for (std::size_t j = 0; j < s.size(); ++j) {
      const double comparator = head - (1.0 - d) * fit.c_emp * s.times[j];
      worst = std::max(worst, (std::pow(s.mass[j], 1.0 - d) - comparator) / head);
      if (j > 0 && s.mass[j] > s.mass[j - 1]) monotone = false;
    }
    dominance.add(worst, monotone && worst <= 1e-6, [&] { return "C_emp=" + num(fit.c_emp); });
  }
  out.push_back(dominance.finish());

  // Gagliardo-Nirenberg ratios stay bounded over a random ensemble.
  Tracker gn("diagnostics", "gn_ratio_bounded", "largest ratio over band-limited ensembles (N, ell) in {(1,1),(2,1),(3,1),(1,2)}");
  const long long fields = std::min<long long>(trials, 100);
  const std::vector<std::pair<int, int>> cases{{1, 1}, {2, 1}, {3, 1}, {1, 2}};
  for (const auto& [dims, ell] : cases) {
    const PeriodicGrid grid = PeriodicGrid::make(dims, dims == 1 ? 128 : (dims == 2 ? 32 : 16), 20.0);
    for (long long i = 0; i < fields; ++i) {
      const double m = uniform(rng, 0.1, 0.9);
      const Field u = band_limited_random(grid, rng(), 1 + static_cast<int>(rng() % (grid.n() / 2 - 1)), uniform(rng, 0.1, 10.0));
      const double ratio = gn_ratio(u, ell, m);
      gn.add(ratio, std::isfinite(ratio) && ratio > 0 && ratio < 1e6,
             [&] { return "N=" + std::to_string(dims) + " ell=" + std::to_string(ell) + " m=" + num(m); });
    }
  }
  out.push_back(gn.finish());
}

}  // namespace

bool VerifyReport::passed() const {
  return std::all_of(properties.begin(), properties.end(), [](const PropertyResult& p) { return p.passed; });
}

std::string VerifyReport::to_json() const {
  nlohmann::ordered_json j;
  j["suite"] = suite;
  j["seed"] = seed;
  j["trials"] = trials;
  j["passed"] = passed();
  j["properties"] = nlohmann::ordered_json::array();
  for (const auto& p : properties) {
    nlohmann::ordered_json e;
    e["suite"] = p.suite;
    e["name"] = p.name;
    e["passed"] = p.passed;
    if (std::isfinite(p.worst))
      e["worst"] = p.worst;
    else
      e["worst"] = nullptr;
    e["detail"] = p.detail;
    if (!p.passed) e["counterexample"] = p.counterexample;
    j["properties"].push_back(std::move(e));
  }
  return j.dump(2);
}

VerifyReport verify_suite(const std::string& name, std::uint64_t seed, long long trials) {
  if (trials < 1) throw DomainError("trials must be at least 1");
  const std::vector<std::pair<std::string, void (*)(std::uint64_t, long long, std::vector<PropertyResult>&)>> suites{
      {"cone", cone_suite}, {"resolvent", resolvent_suite}, {"evolve", evolve_suite}, {"diagnostics", diagnostics_suite}};
  VerifyReport report;
  report.suite = name;
  report.seed = seed;
  report.trials = trials;
  bool matched = false;
  for (const auto& [suite_name, run] : suites) {
    if (name != "all" && name != suite_name) continue;
    matched = true;
    run(seed, trials, report.properties);
  }
  if (!matched) throw DomainError("unknown suite '" + name + "' (cone, resolvent, evolve, diagnostics, all)");
  return report;
}

}  // namespace extinguish
