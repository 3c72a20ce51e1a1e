#pragma once

// Verification layer: extinction exponent arithmetic, the scalar comparator
// y' + C y^delta <= 0 for the mass y = ||u||^2, extinction detection, decay
// fits, the discrete mass balance and Gagliardo-Nirenberg ratios.

#include <optional>
#include <vector>

#include "extinguish/cone.hpp"
#include "extinguish/domain.hpp"

namespace extinguish {

/// Per-record time series. All columns have equal length.
struct DiagnosticsSeries {
  std::vector<double> times;
  std::vector<double> mass;         ///< ||u||_{L2}^2
  std::vector<double> lmp1;         ///< ||u||_{L^{m+1}}^{m+1}
  std::vector<double> h1;           ///< ||u||_{H1}
  std::vector<double> h2;           ///< ||u||_{H2}
  std::vector<double> source_work;  ///< Im int f conj(u), signed
  std::vector<double> tail_mass;    ///< mass fraction in the outer 10% of the box

  std::size_t size() const { return times.size(); }
  bool empty() const { return times.empty(); }
  /// Checks equal lengths, strictly increasing times, finite non-negative entries.
  bool well_formed() const;
};

struct ExtinctionExponent {
  double delta;
  /// (2 delta - 1)/(1 - delta); +inf when delta = 1.
  double source_exponent;
};

/// delta = ((2 ell + N) + m (2 ell - N)) / (4 ell). The source exponent is
/// evaluated in the reduced form 2 (N + m(2 ell - N)) / ((2 ell - N)(1 - m)).
ExtinctionExponent delta_exponent(int dims, int ell, double m);

/// Zero crossing of the exact solution of y' = -C y^delta: y0^{1-delta}/((1-delta) C)
/// for delta < 1; +inf for delta >= 1 (exponential or algebraic decay only).
double ode_comparator_bound(double y0, double c, double delta);

/// Exact solution of y' = -C y^delta at time t.
double ode_comparator_value(double y0, double c, double delta, double t);

struct ExtinctionFit {
  double c_emp;
  double t_star_bound;
};

/// C_emp = min over records t >= from_time with mass > floor_fraction * mass(0) of
/// 2 Im(a) lmp1 / mass^delta; T* bound = from_time + mass(from_time)^{1-delta}/((1-delta) C_emp).
/// Throws InsufficientDataError with fewer than 3 usable records.
ExtinctionFit fit_extinction_constant(const DiagnosticsSeries& series, double delta, const ConeParams<double>& params,
                                      double from_time, double floor_fraction = 1e-12);

struct ExtinctionReport {
  std::optional<double> t_num;
  double delta;
  double c_emp;
  double t_star_bound;
  bool satisfied;
};

/// Earliest recorded time from which mass stays <= rel_threshold * mass(0) for every later record.
std::optional<double> detect_extinction(const DiagnosticsSeries& series, double rel_threshold);

enum class DecayKind { exponential, power };

struct DecayFit {
  /// Exponential: rate c in mass ~ e^{-c t}. Power: p in mass ~ (1 + s (t - t_lo))^{-p}.
  double rate_or_exponent;
  double r2;
  /// Abscissa scale s used by the power fit (1 for exponential).
  double time_scale;
};

/// Least squares on log(mass) against t or against log(1 + s (t - t_lo)).
/// For the power kind a non-positive time_scale requests a search over s maximizing r^2.
/// Throws InsufficientDataError with fewer than 5 positive-mass records in [t_lo, t_hi].
DecayFit fit_decay(const DiagnosticsSeries& series, DecayKind kind, double t_lo, double t_hi,
                   double time_scale = 1.0);

/// Per-interval residual of the trapezoidal mass balance, in rate form:
///   (y_{j+1} - y_j)/(2 dt_j) + Im(a) avg(lmp1) - avg(source_work).
std::vector<double> mass_balance_residual(const DiagnosticsSeries& series, const ConeParams<double>& params);

/// ||u||_2^{((2l+N)+m(2l-N))/(2l)} / (||u||_{H^l}^{N(1-m)/(2l)} ||u||_{m+1}^{m+1}).
/// Throws DomainError for (near-)zero fields.
double gn_ratio(const Field& u, int ell, double m);

}  // namespace extinguish
