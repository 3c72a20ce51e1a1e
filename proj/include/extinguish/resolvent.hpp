#pragma once

// Stationary problem  -lambda Lap u - a lambda g(u) - i b0 u = F.
//
// Multiplying by i turns it into  b0 u + lambda A u = i F  with the monotone
// operator A u = -i Lap u - i a g(u). The linear part is diagonal in Fourier
// space and the nonlinear part is pointwise, so both have closed-form
// resolvents; the default solver alternates between them (Douglas-Rachford).

#include <stdexcept>
#include <vector>

#include "extinguish/cone.hpp"
#include "extinguish/domain.hpp"

namespace extinguish {

enum class SolveMode {
  /// Douglas-Rachford splitting between the spectral and pointwise resolvents.
  splitting,
  /// u <- (1-w) u + w Linv(F + a lambda g(u)), Linv the inverse of lambda|k|^2 - i b0.
  picard,
  /// Newton on the regularized g_eps(z) = (|z|^2 + eps^2)^{(m-1)/2} z.
  newton,
};

struct SolveOptions {
  /// Residual target relative to max(1, ||F||).
  double tol = 1e-10;
  int max_iter = 500;
  /// Picard relaxation; a residual increase after the first step, or stagnation, drops it to 0.5 once.
  double relaxation = 1.0;
  double epsilon_reg = 1e-12;
  SolveMode mode = SolveMode::splitting;
};

struct ResolventProblem {
  double lambda;
  double b0;
  ConeParams<double> params;
  Field rhs;
  /// Test hooks: drop the a-term or the Laplacian from the equation.
  bool nonlinearity = true;
  bool dispersion = true;
};

struct ResolventSolution {
  Field u;
  int iterations;
  double residual;
  /// Picard only: the iteration switched to the relaxed update.
  bool relaxed = false;
};

/// Raised when the iteration misses its target; keeps the best iterate seen.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, Field best, std::vector<double> history)
      : std::runtime_error(what), best_(std::move(best)), history_(std::move(history)) {}

  const Field& best() const { return best_; }
  const std::vector<double>& history() const { return history_; }
  double residual() const { return history_.empty() ? 0.0 : history_.back(); }

 private:
  Field best_;
  std::vector<double> history_;
};

/// Throws DomainError unless lambda > 0, b0 > 0 and a is in the cone.
void validate(const ResolventProblem& problem);

/// L2 norm of -lambda Lap u - a lambda g(u) - i b0 u - F.
double residual(const ResolventProblem& problem, const Field& u);

ResolventSolution solve_resolvent(const ResolventProblem& problem, const SolveOptions& opts);
ResolventSolution solve_resolvent(const ResolventProblem& problem, const SolveOptions& opts,
                                  const Field& initial_guess);

/// Pointwise solution v of alpha v + beta g(v) = w for alpha > 0, Re(beta) > 0.
Complex solve_pointwise_shift(double m, double alpha, Complex beta, Complex w);

/// g applied at every grid point.
Field g_field(double m, const Field& u);

}  // namespace extinguish
