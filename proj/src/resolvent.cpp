#include "extinguish/resolvent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "extinguish/errors.hpp"

namespace extinguish {

namespace {

const Complex kI(0.0, 1.0);

double target_residual(const ResolventProblem& problem, const SolveOptions& opts) {
  return opts.tol * std::max(1.0, lp_norm(problem.rhs, 2.0));
}

double l2(const PeriodicGrid& grid, const ComplexArray& values) {
  return std::sqrt(grid.cell_volume() * values.abs2().sum());
}

ComplexArray g_values(double m, const ComplexArray& u) {
  ComplexArray out(u.size());
  for (Index j = 0; j < u.size(); ++j) out[j] = g_apply(m, u[j]);
  return out;
}

void require_options(const SolveOptions& opts) {
  if (!(opts.tol > 0)) throw DomainError("solver tolerance must be positive");
  if (opts.max_iter < 1) throw DomainError("max_iter must be at least 1");
  if (!(opts.relaxation > 0 && opts.relaxation <= 1)) throw DomainError("relaxation must lie in (0,1]");
  if (!(opts.epsilon_reg >= 0)) throw DomainError("epsilon_reg must be non-negative");
}

// -------------------------------------------------------------------------
// Douglas-Rachford on 0 in T1 u + T2 u with
//   T1 u = lambda(-i Lap) u + (b0/2) u - i F   (Fourier diagonal)
//   T2 u = (b0/2) u - i a lambda g(u)          (pointwise)
// The reported iterate is u = J2(z), for which -i a lambda g(u) = (z - alpha u)/gamma
// holds pointwise. Measuring the residual there, rather than at the transform
// output, keeps FFT round-off in near-zero regions from being amplified by the
// m-Holder nonlinearity. z is tracked in both spaces so the residual
//   (b0 + i lambda|k|^2) u^ + (z^ - alpha u^)/gamma - i F^
// costs no extra transforms.

ResolventSolution solve_splitting(const ResolventProblem& problem, const SolveOptions& opts, const Field& guess) {
  const auto& grid = problem.rhs.grid();
  const double m = problem.params.m;
  const Complex a = problem.params.a;
  const double lambda = problem.lambda;
  const double b0 = problem.b0;

  const double half = 0.5 * b0;
  const double stiff = problem.dispersion ? lambda * grid.max_k_squared() : 0.0;
  const double gamma = 1.0 / std::sqrt(half * (half + stiff));
  const double alpha = 1.0 + gamma * half;
  const Complex beta = problem.nonlinearity ? -kI * gamma * lambda * a : Complex(0.0);

  ComplexArray linear_symbol = ComplexArray::Constant(grid.size(), Complex(b0, 0.0));
  if (problem.dispersion) linear_symbol += kI * lambda * grid.k_squared();
  const ComplexArray denominator = 1.0 + gamma * (linear_symbol - half);
  const ComplexArray rhs_hat = kI * to_spectral(problem.rhs);
  const double parseval = grid.cell_volume() / static_cast<double>(grid.size());

  const double target = target_residual(problem, opts);

  // z such that J2(z) reproduces the guess.
  ComplexArray z = alpha * guess.values();
  if (problem.nonlinearity) z += beta * g_values(m, guess.values());
  ComplexArray z_hat;
  grid.forward(z, z_hat);

  ComplexArray u(grid.size()), u_hat, x_hat, x;
  std::vector<double> history;
  Field best(grid);
  double best_residual = std::numeric_limits<double>::infinity();

  for (int iter = 1; iter <= opts.max_iter; ++iter) {
    for (Index j = 0; j < grid.size(); ++j) u[j] = solve_pointwise_shift(m, alpha, beta, z[j]);
    grid.forward(u, u_hat);

    const double r = std::sqrt(
        parseval * (linear_symbol * u_hat + (z_hat - alpha * u_hat) / gamma - rhs_hat).abs2().sum());
    history.push_back(r);
    if (r < best_residual) {
      best_residual = r;
      best.values() = u;
    }
    if (r <= target) return {Field(grid, u), iter, r};
    if (!std::isfinite(r)) break;

    x_hat = (2.0 * u_hat - z_hat + gamma * rhs_hat) / denominator;
    grid.inverse(x_hat, x);
    z += x - u;
    z_hat += x_hat - u_hat;
  }
  throw ConvergenceError("splitting solver did not reach the residual target", std::move(best), std::move(history));
}

// -------------------------------------------------------------------------
// Picard: v = Linv(F + a lambda g(u)). The residual at v is a lambda (g(u) - g(v)).

ResolventSolution solve_picard(const ResolventProblem& problem, const SolveOptions& opts, const Field& guess) {
  const auto& grid = problem.rhs.grid();
  const double m = problem.params.m;
  const Complex coeff = problem.nonlinearity ? problem.params.a * problem.lambda : Complex(0.0);

  ComplexArray symbol = ComplexArray::Constant(grid.size(), Complex(0.0, -problem.b0));
  if (problem.dispersion) symbol += problem.lambda * grid.k_squared();
  const double target = target_residual(problem, opts);
  double omega = opts.relaxation;
  bool fell_back = false;

  ComplexArray u = guess.values();
  ComplexArray gu = g_values(m, u);
  ComplexArray hat, v, gv;
  std::vector<double> history;
  Field best(grid);
  double best_residual = std::numeric_limits<double>::infinity();
  int since_improvement = 0;

  for (int iter = 1; iter <= opts.max_iter; ++iter) {
    ComplexArray forcing = problem.rhs.values() + coeff * gu;
    grid.forward(forcing, hat);
    hat /= symbol;
    grid.inverse(hat, v);
    gv = g_values(m, v);
    const double r = l2(grid, coeff * (gu - gv));
    history.push_back(r);
    if (r < best_residual) {
      best_residual = r;
      best.values() = v;
      since_improvement = 0;
    } else {
      ++since_improvement;
    }
    if (r <= target) return {Field(grid, v), iter, r, fell_back};
    if (!std::isfinite(r)) break;
    const bool increased = iter >= 3 && r > history[history.size() - 2];
    if (!fell_back && (increased || since_improvement >= 5)) {
      omega = 0.5;
      fell_back = true;
      since_improvement = 0;
    }
    if (omega == 1.0) {
      u = v;
      gu = gv;
    } else {
      u = (1.0 - omega) * u + omega * v;
      gu = g_values(m, u);
    }
  }
  throw ConvergenceError("picard iteration did not reach the residual target", std::move(best), std::move(history));
}

// -------------------------------------------------------------------------
// Newton on the regularized map. Each linearized system
//   b0 d + lambda(-i Lap) d - i a lambda Dg_eps(u)[d] = i(-G)
// is itself solved by Douglas-Rachford with a 2x2 real pointwise block.

struct Block {
  // Real 2x2 matrix acting on (re, im).
  double a11, a12, a21, a22;
};

Complex apply_inverse(const Block& blk, Complex w) {
  const double det = blk.a11 * blk.a22 - blk.a12 * blk.a21;
  const double re = (blk.a22 * w.real() - blk.a12 * w.imag()) / det;
  const double im = (-blk.a21 * w.real() + blk.a11 * w.imag()) / det;
  return {re, im};
}

Complex apply_block(const Block& blk, Complex d) {
  return {blk.a11 * d.real() + blk.a12 * d.imag(), blk.a21 * d.real() + blk.a22 * d.imag()};
}

// Real-linear map d -> c1 d + c2 Re(conj(z) d) z.
Block linearized_block(Complex c1, Complex c2, Complex z) {
  const Complex c2z = c2 * z;
  return {c1.real() + c2z.real() * z.real(), -c1.imag() + c2z.real() * z.imag(),
          c1.imag() + c2z.imag() * z.real(), c1.real() + c2z.imag() * z.imag()};
}

ComplexArray g_eps_values(double m, double eps, const ComplexArray& u) {
  ComplexArray out(u.size());
  for (Index j = 0; j < u.size(); ++j) {
    const double s = std::pow(std::norm(u[j]) + eps * eps, 0.5 * (m - 1.0));
    out[j] = s * u[j];
  }
  return out;
}

ResolventSolution solve_newton(const ResolventProblem& problem, const SolveOptions& opts, const Field& guess) {
  const auto& grid = problem.rhs.grid();
  const double m = problem.params.m;
  const Complex a = problem.params.a;
  const double lambda = problem.lambda;
  const double b0 = problem.b0;
  const double eps = opts.epsilon_reg;
  const Complex coeff = problem.nonlinearity ? a * lambda : Complex(0.0);

  const double half = 0.5 * b0;
  const double stiff = problem.dispersion ? lambda * grid.max_k_squared() : 0.0;
  const double gamma = 1.0 / std::sqrt(half * (half + stiff));
  const double alpha = 1.0 + gamma * half;
  ComplexArray denominator = ComplexArray::Constant(grid.size(), Complex(alpha, 0.0));
  if (problem.dispersion) denominator += kI * gamma * lambda * grid.k_squared();
  ComplexArray lap_symbol = ComplexArray::Constant(grid.size(), Complex(0.0, -b0));
  if (problem.dispersion) lap_symbol += lambda * grid.k_squared();

  const double target = target_residual(problem, opts);

  // G(u) = (lambda|k|^2 - i b0) u - a lambda g_eps(u) - F, evaluated spectrally.
  auto regularized_residual = [&](const ComplexArray& u) {
    ComplexArray hat, lin;
    grid.forward(u, hat);
    hat *= lap_symbol;
    grid.inverse(hat, lin);
    return ComplexArray(lin - coeff * g_eps_values(m, eps, u) - problem.rhs.values());
  };

  ComplexArray u = guess.values();
  std::vector<double> history;
  Field best(grid, u);
  double best_residual = std::numeric_limits<double>::infinity();
  int total = 0;

  for (int outer = 0; outer < opts.max_iter; ++outer) {
    const ComplexArray g_res = regularized_residual(u);
    const double true_r = residual(problem, Field(grid, u));
    history.push_back(true_r);
    if (true_r < best_residual) {
      best_residual = true_r;
      best.values() = u;
    }
    if (true_r <= target) return {Field(grid, u), std::max(total, 1), true_r};
    if (!std::isfinite(true_r)) break;

    // Pointwise blocks for alpha d + gamma(-i a lambda) Dg_eps(u)[d].
    std::vector<Block> blocks(static_cast<size_t>(grid.size()));
    std::vector<Block> jac(static_cast<size_t>(grid.size()));
    for (Index j = 0; j < grid.size(); ++j) {
      const double q = std::norm(u[j]) + eps * eps;
      const double s = std::pow(q, 0.5 * (m - 1.0));
      const double sp = (m - 1.0) * std::pow(q, 0.5 * (m - 3.0));
      const Complex c = problem.nonlinearity ? -kI * a * lambda : Complex(0.0);
      Block nb = linearized_block(c * s, c * sp, u[j]);
      jac[j] = nb;
      blocks[j] = {alpha + gamma * nb.a11, gamma * nb.a12, gamma * nb.a21, alpha + gamma * nb.a22};
    }

    // Linear Douglas-Rachford for the Newton correction; rhs is i(-G).
    const ComplexArray shift = gamma * to_spectral(Field(grid, ComplexArray(-kI * g_res)));
    const double inner_target = std::max(1e-3 * l2(grid, g_res), 0.1 * target);
    ComplexArray z = ComplexArray::Zero(grid.size()), d(grid.size()), y, x, hat, res(grid.size());
    for (int inner = 0; inner < 4 * opts.max_iter; ++inner) {
      ++total;
      for (Index j = 0; j < grid.size(); ++j) d[j] = apply_inverse(blocks[j], z[j]);
      y = 2.0 * d - z;
      grid.forward(y, hat);
      hat = (hat + shift) / denominator;
      grid.inverse(hat, x);
      for (Index j = 0; j < grid.size(); ++j) res[j] = half * x[j] + (y[j] - x[j]) / gamma + apply_block(jac[j], x[j]);
      z += x - d;
      if (l2(grid, res) <= inner_target) break;
    }

    // Backtracking on the regularized residual.
    const double current = l2(grid, g_res);
    double step = 1.0;
    ComplexArray trial;
    for (int ls = 0; ls < 30; ++ls) {
      trial = u + step * x;
      if (l2(grid, regularized_residual(trial)) < (1.0 - 1e-4 * step) * current) break;
      step *= 0.5;
    }
    u = trial;
  }
  throw ConvergenceError("newton iteration did not reach the residual target", std::move(best), std::move(history));
}

}  // namespace

Complex solve_pointwise_shift(double m, double alpha, Complex beta, Complex w) {
  const double rho = std::abs(w);
  if (rho == 0.0) return {0.0, 0.0};
  const double beta_abs = std::abs(beta);
  if (beta_abs == 0.0) return w / alpha;

  // Solve H(s) = ln|alpha e^s + beta e^{ms}| - ln rho = 0 for s = ln|v|.
  // H is increasing with slope in (m, 1), so Newton from an upper bound
  // with a bisection safeguard converges quickly.
  const double log_rho = std::log(rho);
  auto eval = [&](double s, double& slope) {
    const Complex p = alpha * std::exp(s);
    const Complex q = beta * std::exp(m * s);
    const Complex sum = p + q;
    slope = ((p + m * q) / sum).real();
    return std::log(std::abs(sum)) - log_rho;
  };

  double hi = std::min(log_rho - std::log(alpha), (log_rho - std::log(beta_abs)) / m);
  double slope;
  double h_hi = eval(hi, slope);
  double lo = hi - h_hi / m;
  double s = hi - h_hi / slope;
  for (int iter = 0; iter < 60; ++iter) {
    if (!(s > lo && s < hi)) s = 0.5 * (lo + hi);
    const double h = eval(s, slope);
    if (h > 0)
      hi = s;
    else
      lo = s;
    const double step = h / slope;
    s -= step;
    if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(s))) break;
  }
  const double r = std::exp(s);
  return w / (alpha + beta * std::pow(r, m - 1.0));
}

Field g_field(double m, const Field& u) { return Field(u.grid(), g_values(m, u.values())); }

void validate(const ResolventProblem& problem) {
  if (!(problem.lambda > 0) || !std::isfinite(problem.lambda)) throw DomainError("lambda must be positive");
  if (!(problem.b0 > 0) || !std::isfinite(problem.b0)) throw DomainError("b0 must be positive");
  require_cone(problem.params);
}

double residual(const ResolventProblem& problem, const Field& u) {
  require_same_grid(problem.rhs, u);
  ComplexArray r = -kI * problem.b0 * u.values() - problem.rhs.values();
  if (problem.dispersion) r -= problem.lambda * laplacian(u).values();
  if (problem.nonlinearity) r -= problem.params.a * problem.lambda * g_values(problem.params.m, u.values());
  return l2(u.grid(), r);
}

ResolventSolution solve_resolvent(const ResolventProblem& problem, const SolveOptions& opts) {
  return solve_resolvent(problem, opts, Field(problem.rhs.grid()));
}

ResolventSolution solve_resolvent(const ResolventProblem& problem, const SolveOptions& opts,
                                  const Field& initial_guess) {
  validate(problem);
  require_options(opts);
  require_same_grid(problem.rhs, initial_guess);

  if (problem.rhs.values().isZero(0.0)) return {Field(problem.rhs.grid()), 1, 0.0};

  switch (opts.mode) {
    case SolveMode::picard:
      return solve_picard(problem, opts, initial_guess);
    case SolveMode::newton:
      return solve_newton(problem, opts, initial_guess);
    case SolveMode::splitting:
    default:
      return solve_splitting(problem, opts, initial_guess);
  }
}

}  // namespace extinguish
