#pragma once

// Independent reference computations used by the tests. Nothing here calls
// into the library's solvers or transforms.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace oracle {

using cd = std::complex<double>;

/// Grid points x_j = -L/2 + j L/n.
inline Eigen::VectorXd grid_points(int n, double length) {
  Eigen::VectorXd x(n);
  for (int j = 0; j < n; ++j) x[j] = -0.5 * length + j * length / n;
  return x;
}

/// Dense periodic second-derivative matrix from explicit cosine sums over the
/// wavenumbers 2 pi k / L, k = -n/2 .. n/2 - 1.
inline Eigen::MatrixXd spectral_second_derivative(int n, double length) {
  Eigen::MatrixXd d2 = Eigen::MatrixXd::Zero(n, n);
  const double h = length / n;
  for (int j = 0; j < n; ++j) {
    for (int l = 0; l < n; ++l) {
      double sum = 0.0;
      for (int k = -n / 2; k < n / 2; ++k) {
        const double kk = 2.0 * std::numbers::pi * k / length;
        sum -= kk * kk * std::cos(kk * (j - l) * h);
      }
      d2(j, l) = sum / n;
    }
  }
  return d2;
}

inline cd g(double m, cd z) {
  const double r = std::abs(z);
  return r == 0.0 ? cd(0.0) : std::pow(r, m - 1.0) * z;
}

/// Solves -lambda D2 u - a lambda g(u) - i b0 u = F by damped Newton on the
/// 2n real unknowns, with dense LU for every linear system.
inline Eigen::VectorXcd dense_resolvent(int n, double length, double lambda, double b0, double m, cd a,
                                        const Eigen::VectorXcd& rhs, double tol = 1e-14, int max_iter = 200) {
  const Eigen::MatrixXd d2 = spectral_second_derivative(n, length);
  const cd i(0.0, 1.0);

  auto residual = [&](const Eigen::VectorXcd& u) {
    Eigen::VectorXcd r = (-lambda * d2).cast<cd>() * u - i * b0 * u - rhs;
    for (int j = 0; j < n; ++j) r[j] -= a * lambda * g(m, u[j]);
    return r;
  };

  // Start from the linear solution.
  Eigen::MatrixXcd linear = (-lambda * d2).cast<cd>() - i * b0 * Eigen::MatrixXcd::Identity(n, n);
  Eigen::VectorXcd u = linear.lu().solve(rhs);
  Eigen::VectorXcd r = residual(u);

  for (int it = 0; it < max_iter && r.norm() > tol * std::max(1.0, rhs.norm()); ++it) {
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    for (int j = 0; j < n; ++j) {
      for (int l = 0; l < n; ++l) {
        jac(j, l) = -lambda * d2(j, l);
        jac(n + j, n + l) = -lambda * d2(j, l);
      }
      // -i b0 acting on (x, y): (b0 y, -b0 x).
      jac(j, n + j) += b0;
      jac(n + j, j) -= b0;
      // -a lambda Dg(u): Dg[d] = r^{m-1} (d + (m-1) Re(conj(z) d) z / r^2).
      const cd z = u[j];
      const double rz = std::abs(z);
      if (rz > 0) {
        const double s = std::pow(rz, m - 1.0);
        const cd c = -a * lambda * s;
        // Columns: derivative with respect to Re d and Im d.
        const cd col_re = c * (1.0 + (m - 1.0) * z.real() * z / (rz * rz));
        const cd col_im = c * (i + (m - 1.0) * z.imag() * z / (rz * rz));
        jac(j, j) += col_re.real();
        jac(n + j, j) += col_re.imag();
        jac(j, n + j) += col_im.real();
        jac(n + j, n + j) += col_im.imag();
      }
    }
    Eigen::VectorXd rr(2 * n);
    rr << r.real(), r.imag();
    const Eigen::VectorXd step = jac.partialPivLu().solve(-rr);
    Eigen::VectorXcd du(n);
    for (int j = 0; j < n; ++j) du[j] = cd(step[j], step[n + j]);

    double t = 1.0;
    const double r0 = r.norm();
    for (int k = 0; k < 40; ++k, t *= 0.5) {
      const Eigen::VectorXcd trial = u + t * du;
      const Eigen::VectorXcd rt = residual(trial);
      if (rt.norm() < (1.0 - 1e-4 * t) * r0 || k == 39) {
        u = trial;
        r = rt;
        break;
      }
    }
  }
  return u;
}

/// RK4 for r' = -Im(a) r^m, theta' = Re(a) r^{m-1}; returns r e^{i theta}.
inline cd rk4_pointwise_flow(double m, cd a, cd z0, double t, int steps = 200000) {
  double r = std::abs(z0);
  double th = std::arg(z0);
  const double h = t / steps;
  auto fr = [&](double rr) { return -a.imag() * std::pow(rr, m); };
  auto fth = [&](double rr) { return a.real() * std::pow(rr, m - 1.0); };
  for (int k = 0; k < steps; ++k) {
    const double k1 = fr(r), l1 = fth(r);
    const double k2 = fr(r + 0.5 * h * k1), l2 = fth(r + 0.5 * h * k1);
    const double k3 = fr(r + 0.5 * h * k2), l3 = fth(r + 0.5 * h * k2);
    const double k4 = fr(r + h * k3), l4 = fth(r + h * k3);
    r += h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
    th += h / 6.0 * (l1 + 2 * l2 + 2 * l3 + l4);
  }
  return std::polar(r, th);
}

/// RK4 for y' = -C y^delta up to time t with steps resolving the local rate.
inline double rk4_comparator(double y0, double c, double delta, double t_end) {
  double y = y0, t = 0.0;
  auto f = [&](double v) { return -c * std::pow(std::max(v, 0.0), delta); };
  while (t < t_end) {
    const double h = std::min({1e-4, 1e-3 * y / std::abs(f(y)), t_end - t});
    const double k1 = f(y), k2 = f(y + 0.5 * h * k1), k3 = f(y + 0.5 * h * k2), k4 = f(y + h * k3);
    y += h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
    t += h;
  }
  return y;
}

/// Time for y' = -C y^delta (delta < 1) to reach zero, by RK4 quadrature of
/// dt/dsigma = e^{-(1-delta) sigma}/C along y = e^{-sigma}.
inline double quadrature_extinction_time(double y0, double c, double delta) {
  const double q = 1.0 - delta;
  const double s0 = -std::log(y0), span = 60.0 / q;
  const int steps = 400000;
  const double h = span / steps;
  double total = 0.0;
  for (int k = 0; k < steps; ++k) {
    const double s = s0 + k * h;
    total += h / 6.0 * (std::exp(-q * s) + 4.0 * std::exp(-q * (s + 0.5 * h)) + std::exp(-q * (s + h)));
  }
  return total / c;
}

/// Closed forms for e^{-x^2/2} on the line.
inline double gaussian_l2_squared() { return std::sqrt(std::numbers::pi); }
inline double gaussian_second_derivative(double x) { return (x * x - 1.0) * std::exp(-0.5 * x * x); }

}  // namespace oracle
