#include "extinguish/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "extinguish/errors.hpp"

namespace extinguish {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct LineFit {
  double slope;
  double intercept;
  double r2;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  const double slope = sxx > 0 ? sxy / sxx : 0.0;
  const double intercept = my - slope * mx;
  double ss_res = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - (intercept + slope * x[i]);
    ss_res += e * e;
  }
  const double r2 = syy > 0 ? 1.0 - ss_res / syy : 1.0;
  return {slope, intercept, r2};
}

}  // namespace

bool DiagnosticsSeries::well_formed() const {
  const std::size_t n = times.size();
  if (mass.size() != n || lmp1.size() != n || h1.size() != n || h2.size() != n || source_work.size() != n ||
      tail_mass.size() != n)
    return false;
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0 && !(times[i] > times[i - 1])) return false;
    for (double v : {times[i], mass[i], lmp1[i], h1[i], h2[i], tail_mass[i]})
      if (!std::isfinite(v) || v < 0) return false;
    if (!std::isfinite(source_work[i])) return false;
  }
  return true;
}

ExtinctionExponent delta_exponent(int dims, int ell, double m) {
  if (dims < 1) throw DomainError("dimension must be at least 1");
  if (ell != 1 && ell != 2) throw DomainError("sobolev order ell must be 1 or 2");
  if (!(m > 0 && m < 1)) throw DomainError("exponent m must lie in (0,1)");
  const double n = dims;
  const double l2 = 2.0 * ell;
  const double delta = ((l2 + n) + m * (l2 - n)) / (2.0 * l2);
  const double gap = (l2 - n) * (1.0 - m);
  const double source_exponent = gap == 0.0 ? kInf : 2.0 * (n + m * (l2 - n)) / gap;
  return {delta, source_exponent};
}

double ode_comparator_bound(double y0, double c, double delta) {
  if (!(delta > 0)) throw DomainError("delta must be positive");
  if (y0 <= 0) return 0.0;
  if (!(c > 0)) return kInf;
  if (delta >= 1) return kInf;
  return std::pow(y0, 1.0 - delta) / ((1.0 - delta) * c);
}

double ode_comparator_value(double y0, double c, double delta, double t) {
  if (y0 <= 0) return 0.0;
  if (delta < 1) {
    const double base = std::pow(y0, 1.0 - delta) - (1.0 - delta) * c * t;
    return base <= 0 ? 0.0 : std::pow(base, 1.0 / (1.0 - delta));
  }
  if (delta == 1) return y0 * std::exp(-c * t);
  return std::pow(std::pow(y0, 1.0 - delta) + (delta - 1.0) * c * t, -1.0 / (delta - 1.0));
}

ExtinctionFit fit_extinction_constant(const DiagnosticsSeries& series, double delta, const ConeParams<double>& params,
                                      double from_time, double floor_fraction) {
  if (series.empty()) throw InsufficientDataError("empty series");
  const double floor = floor_fraction * series.mass.front();
  std::size_t start = series.size();
  for (std::size_t i = 0; i < series.size(); ++i) {
    if (series.times[i] >= from_time) {
      start = i;
      break;
    }
  }
  double c_emp = kInf;
  std::size_t usable = 0;
  for (std::size_t i = start; i < series.size(); ++i) {
    if (!(series.mass[i] > floor)) continue;
    ++usable;
    c_emp = std::min(c_emp, 2.0 * params.a.imag() * series.lmp1[i] / std::pow(series.mass[i], delta));
  }
  if (usable < 3) throw InsufficientDataError("need at least 3 records above the mass floor");
  if (!(c_emp > 0) || delta >= 1) return {c_emp, kInf};
  const double t_bound =
      series.times[start] + std::pow(series.mass[start], 1.0 - delta) / ((1.0 - delta) * c_emp);
  return {c_emp, t_bound};
}

std::optional<double> detect_extinction(const DiagnosticsSeries& series, double rel_threshold) {
  if (!(rel_threshold > 0)) throw DomainError("threshold must be positive");
  if (series.empty()) return std::nullopt;
  const double limit = rel_threshold * series.mass.front();
  std::optional<std::size_t> first;
  for (std::size_t i = series.size(); i-- > 0;) {
    if (series.mass[i] > limit) break;
    first = i;
  }
  if (!first) return std::nullopt;
  return series.times[*first];
}

DecayFit fit_decay(const DiagnosticsSeries& series, DecayKind kind, double t_lo, double t_hi, double time_scale) {
  std::vector<double> t, y;
  for (std::size_t i = 0; i < series.size(); ++i) {
    if (series.times[i] < t_lo || series.times[i] > t_hi || !(series.mass[i] > 0)) continue;
    t.push_back(series.times[i]);
    y.push_back(std::log(series.mass[i]));
  }
  if (t.size() < 5) throw InsufficientDataError("decay fit needs at least 5 positive-mass records in the window");

  if (kind == DecayKind::exponential) {
    const LineFit fit = least_squares(t, y);
    return {-fit.slope, fit.r2, 1.0};
  }

  const double origin = t.front();
  auto fit_with = [&](double scale) {
    std::vector<double> x(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) x[i] = std::log1p(scale * (t[i] - origin));
    return least_squares(x, y);
  };
  if (time_scale > 0) {
    const LineFit fit = fit_with(time_scale);
    return {-fit.slope, fit.r2, time_scale};
  }

  // Coarse scan in log(scale), then golden-section refinement around the best.
  double best_log = 0, best_r2 = -kInf;
  for (int i = 0; i <= 120; ++i) {
    const double ls = -6.0 + 0.1 * i;
    const double r2 = fit_with(std::exp(ls * std::log(10.0))).r2;
    if (r2 > best_r2) {
      best_r2 = r2;
      best_log = ls;
    }
  }
  double lo = best_log - 0.1, hi = best_log + 0.1;
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  auto score = [&](double ls) { return fit_with(std::pow(10.0, ls)).r2; };
  double c = hi - phi * (hi - lo), d = lo + phi * (hi - lo);
  double fc = score(c), fd = score(d);
  for (int it = 0; it < 60; ++it) {
    if (fc > fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - phi * (hi - lo);
      fc = score(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + phi * (hi - lo);
      fd = score(d);
    }
  }
  const double scale = std::pow(10.0, 0.5 * (lo + hi));
  const LineFit fit = fit_with(scale);
  return {-fit.slope, fit.r2, scale};
}

std::vector<double> mass_balance_residual(const DiagnosticsSeries& series, const ConeParams<double>& params) {
  std::vector<double> out;
  if (series.size() < 2) return out;
  out.reserve(series.size() - 1);
  const double damping = params.a.imag();
  for (std::size_t i = 0; i + 1 < series.size(); ++i) {
    const double dt = series.times[i + 1] - series.times[i];
    const double rate = (series.mass[i + 1] - series.mass[i]) / (2.0 * dt);
    const double absorbed = damping * 0.5 * (series.lmp1[i] + series.lmp1[i + 1]);
    const double work = 0.5 * (series.source_work[i] + series.source_work[i + 1]);
    out.push_back(rate + absorbed - work);
  }
  return out;
}

double gn_ratio(const Field& u, int ell, double m) {
  if (ell != 1 && ell != 2) throw DomainError("sobolev order ell must be 1 or 2");
  if (!(m > 0 && m < 1)) throw DomainError("exponent m must lie in (0,1)");
  const double peak = u.values().abs().maxCoeff();
  if (!(peak > 1e-150) || !std::isfinite(peak)) throw DomainError("gn_ratio needs a field bounded away from zero");
  const double l2 = lp_norm(u, 2.0);
  const double hl = sobolev_norm(u, ell);
  const double lq = lp_integral(u, m + 1.0);
  if (!(l2 > 0) || !(hl > 0) || !(lq > 0)) throw DomainError("gn_ratio norms underflowed");
  const double n = u.grid().dims();
  const double two_l = 2.0 * ell;
  const double top = ((two_l + n) + m * (two_l - n)) / two_l;
  const double sob = n * (1.0 - m) / two_l;
  return std::exp(top * std::log(l2) - sob * std::log(hl) - std::log(lq));
}

}  // namespace extinguish
