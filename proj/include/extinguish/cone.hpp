#pragma once

// Pointwise complex algebra of the damping coefficient a and the sublinear
// nonlinearity g(z) = |z|^{m-1} z. Everything here is templated on the real
// scalar so the same code serves double, long double and float checks.

#include <cmath>
#include <complex>
#include <numbers>

#include "extinguish/errors.hpp"

namespace extinguish {

/// Exponent m in (0,1) and complex damping coefficient a.
template <typename Real>
struct ConeParams {
  Real m;
  std::complex<Real> a;
};

/// Unit rotation b = exp(-i theta_b) that keeps a*b inside the open cone.
template <typename Real>
struct Rotation {
  std::complex<Real> b;
  Real theta_b;
};

template <typename Real>
struct LpCheck {
  Real lhs;
  Real rhs;
};

namespace detail {

template <typename Real>
void require_exponent(Real m) {
  if (!(m > Real(0) && m < Real(1))) throw DomainError("exponent m must lie in the open interval (0,1)");
}

}  // namespace detail

/// Membership of a in C(m): Im(a) > 0, 2 sqrt(m) Im(a) >= (1-m)|Re(a)|, and the
/// strict version of the second inequality whenever Re(a) >= 0.
template <typename Real>
bool cone_contains(Real m, std::complex<Real> a) {
  detail::require_exponent(m);
  if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
    throw DomainError("damping coefficient a must be finite");
  if (!(a.imag() > Real(0))) return false;
  const Real lhs = Real(2) * std::sqrt(m) * a.imag();
  const Real slope = Real(1) - m;
  if (lhs < slope * std::abs(a.real())) return false;
  if (a.real() >= Real(0) && !(lhs > slope * a.real())) return false;
  return true;
}

template <typename Real>
bool cone_contains(const ConeParams<Real>& params) {
  return cone_contains(params.m, params.a);
}

/// Throws DomainError naming the violated condition.
template <typename Real>
void require_cone(const ConeParams<Real>& params) {
  if (!cone_contains(params))
    throw DomainError("damping coefficient violates 2 sqrt(m) Im(a) >= (1-m)|Re(a)| with Im(a) > 0 "
                      "(strict when Re(a) >= 0)");
}

/// Angle arctan((1-m)/(2 sqrt m)): a with Re(a) >= 0 is admissible iff Arg(a) exceeds it.
template <typename Real>
Real cone_boundary_angle(Real m) {
  return std::atan((Real(1) - m) / (Real(2) * std::sqrt(m)));
}

/// Rotation b with |b| = 1, Re(b) > 0, Im(b) < 0 and
/// 2 sqrt(m) Im(ab) > (1-m) Re(ab) >= 0.
///
/// For Re(a) < 0 the rotation is theta_b = Arg(a) - pi/2, so that ab = i|a|.
/// Otherwise theta_b = (Arg(a) - phi_m)/2 with phi_m = cone_boundary_angle(m),
/// which puts Arg(ab) halfway between phi_m and Arg(a) <= pi/2.
template <typename Real>
Rotation<Real> rotate(const ConeParams<Real>& params) {
  require_cone(params);
  const Real theta_a = std::arg(params.a);
  Real theta_b;
  if (params.a.real() < Real(0)) {
    theta_b = theta_a - std::numbers::pi_v<Real> / Real(2);
  } else {
    theta_b = (theta_a - cone_boundary_angle(params.m)) / Real(2);
  }
  return {std::polar(Real(1), -theta_b), theta_b};
}

/// g(z) = |z|^{m-1} z, with g(0) = 0 exactly.
template <typename Real>
std::complex<Real> g_apply(Real m, std::complex<Real> z) {
  const Real r = std::abs(z);
  if (r == Real(0)) return {Real(0), Real(0)};
  return std::pow(r, m - Real(1)) * z;
}

/// Both sides of 2 sqrt(m)|Im w| <= (1-m) Re w with w = (g(z1) - g(z2)) conj(z1 - z2).
template <typename Real>
LpCheck<Real> lp_check(Real m, std::complex<Real> z1, std::complex<Real> z2) {
  const std::complex<Real> w = (g_apply(m, z1) - g_apply(m, z2)) * std::conj(z1 - z2);
  return {Real(2) * std::sqrt(m) * std::abs(w.imag()), (Real(1) - m) * w.real()};
}

}  // namespace extinguish
