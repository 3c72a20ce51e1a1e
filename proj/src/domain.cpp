#include "extinguish/domain.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <random>
#include <utility>

#include "extinguish/errors.hpp"

namespace extinguish {

namespace {

// The FFTW planner is not thread safe; execution of an existing plan on new
// arrays is. Plans are cached per (dims, n) for the life of the process.
struct PlanPair {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
};

std::mutex& planner_mutex() {
  static std::mutex mutex;
  return mutex;
}

PlanPair plans_for(int dims, Index n) {
  static std::map<std::pair<int, Index>, PlanPair> cache;
  std::lock_guard<std::mutex> lock(planner_mutex());
  auto key = std::make_pair(dims, n);
  if (auto it = cache.find(key); it != cache.end()) return it->second;

  std::array<int, kMaxDims> shape{};
  Index total = 1;
  for (int d = 0; d < dims; ++d) {
    shape[d] = static_cast<int>(n);
    total *= n;
  }
  auto* in = fftw_alloc_complex(static_cast<size_t>(total));
  auto* out = fftw_alloc_complex(static_cast<size_t>(total));
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  PlanPair plans;
  plans.forward = fftw_plan_dft(dims, shape.data(), in, out, FFTW_FORWARD, flags);
  plans.backward = fftw_plan_dft(dims, shape.data(), in, out, FFTW_BACKWARD, flags);
  fftw_free(in);
  fftw_free(out);
  cache.emplace(key, plans);
  return plans;
}

bool is_power_of_two(Index n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

struct PeriodicGrid::State {
  int dims;
  Index n;
  double length;
  double spacing;
  Index size;
  RealArray wavenumbers;
  RealArray k_squared;
  double max_k_squared;
  PlanPair plans;
};

PeriodicGrid PeriodicGrid::make(int dims, Index n, double box_length, Index max_points) {
  if (dims < 1 || dims > kMaxDims) throw DomainError("grid dimension must be in 1..5");
  if (n < 4 || !is_power_of_two(n)) throw DomainError("points per dimension must be a power of two >= 4");
  if (!(box_length > 0) || !std::isfinite(box_length)) throw DomainError("box length must be positive");

  Index size = 1;
  for (int d = 0; d < dims; ++d) {
    if (size > max_points / n) throw MemoryBudgetError("grid point count exceeds the configured budget");
    size *= n;
  }

  auto state = std::make_shared<State>();
  state->dims = dims;
  state->n = n;
  state->length = box_length;
  state->spacing = box_length / static_cast<double>(n);
  state->size = size;

  const double dk = 2.0 * std::numbers::pi / box_length;
  state->wavenumbers.resize(n);
  for (Index j = 0; j < n; ++j) {
    const Index signed_j = j < n / 2 ? j : j - n;
    state->wavenumbers[j] = dk * static_cast<double>(signed_j);
  }
  const RealArray k2_1d = state->wavenumbers.square();

  // Row-major accumulation: the last axis varies fastest.
  state->k_squared = RealArray::Zero(size);
  for (Index flat = 0; flat < size; ++flat) {
    Index rest = flat;
    double sum = 0.0;
    for (int d = dims - 1; d >= 0; --d) {
      sum += k2_1d[rest % n];
      rest /= n;
    }
    state->k_squared[flat] = sum;
  }
  state->max_k_squared = state->k_squared.maxCoeff();
  state->plans = plans_for(dims, n);
  return PeriodicGrid(std::move(state));
}

int PeriodicGrid::dims() const { return state_->dims; }
Index PeriodicGrid::n() const { return state_->n; }
double PeriodicGrid::length() const { return state_->length; }
double PeriodicGrid::spacing() const { return state_->spacing; }
Index PeriodicGrid::size() const { return state_->size; }
double PeriodicGrid::cell_volume() const { return std::pow(state_->spacing, state_->dims); }
const RealArray& PeriodicGrid::wavenumbers() const { return state_->wavenumbers; }
const RealArray& PeriodicGrid::k_squared() const { return state_->k_squared; }
double PeriodicGrid::max_k_squared() const { return state_->max_k_squared; }

double PeriodicGrid::coordinate(Index j) const {
  return -0.5 * state_->length + static_cast<double>(j) * state_->spacing;
}

std::array<Index, kMaxDims> PeriodicGrid::multi_index(Index flat) const {
  std::array<Index, kMaxDims> idx{};
  for (int d = state_->dims - 1; d >= 0; --d) {
    idx[d] = flat % state_->n;
    flat /= state_->n;
  }
  return idx;
}

void PeriodicGrid::forward(const ComplexArray& in, ComplexArray& out) const {
  out.resize(state_->size);
  fftw_execute_dft(state_->plans.forward, reinterpret_cast<fftw_complex*>(const_cast<Complex*>(in.data())),
                   reinterpret_cast<fftw_complex*>(out.data()));
}

void PeriodicGrid::inverse(const ComplexArray& in, ComplexArray& out) const {
  out.resize(state_->size);
  fftw_execute_dft(state_->plans.backward, reinterpret_cast<fftw_complex*>(const_cast<Complex*>(in.data())),
                   reinterpret_cast<fftw_complex*>(out.data()));
  out /= static_cast<double>(state_->size);
}

bool operator==(const PeriodicGrid& lhs, const PeriodicGrid& rhs) {
  if (lhs.state_ == rhs.state_) return true;
  return lhs.dims() == rhs.dims() && lhs.n() == rhs.n() && lhs.length() == rhs.length();
}

Field::Field(PeriodicGrid grid) : grid_(std::move(grid)), values_(ComplexArray::Zero(grid_.size())) {}

Field::Field(PeriodicGrid grid, ComplexArray values) : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.size()) throw DomainError("field length does not match grid point count");
}

bool Field::all_finite() const { return values_.real().allFinite() && values_.imag().allFinite(); }

void require_same_grid(const Field& u, const Field& v) {
  if (!(u.grid() == v.grid())) throw GridMismatchError("fields live on different grids");
}

ComplexArray to_spectral(const Field& u) {
  ComplexArray hat;
  u.grid().forward(u.values(), hat);
  return hat;
}

Field from_spectral(const PeriodicGrid& grid, const ComplexArray& coefficients) {
  ComplexArray values;
  grid.inverse(coefficients, values);
  return Field(grid, std::move(values));
}

Field apply_symbol(const Field& u, const ComplexArray& symbol) {
  ComplexArray hat = to_spectral(u);
  hat *= symbol;
  return from_spectral(u.grid(), hat);
}

Field laplacian(const Field& u) {
  ComplexArray hat = to_spectral(u);
  hat *= -u.grid().k_squared();
  return from_spectral(u.grid(), hat);
}

double lp_integral(const Field& u, double p) {
  const double h = u.grid().cell_volume();
  if (p == 2.0) return h * u.values().abs2().sum();
  return h * u.values().abs().pow(p).sum();
}

double lp_norm(const Field& u, double p) { return std::pow(lp_integral(u, p), 1.0 / p); }

namespace {

double spectral_weight_sum(const Field& u, const RealArray& weight) {
  const ComplexArray hat = to_spectral(u);
  const auto& grid = u.grid();
  return grid.cell_volume() / static_cast<double>(grid.size()) * (weight * hat.abs2()).sum();
}

}  // namespace

double sobolev_norm(const Field& u, int ell) {
  if (ell < 0 || ell > 2) throw DomainError("sobolev order must be 0, 1 or 2");
  const RealArray weight = (1.0 + u.grid().k_squared()).pow(ell);
  return std::sqrt(spectral_weight_sum(u, weight));
}

double sobolev_norm_split(const Field& u) {
  const double base = lp_integral(u, 2.0);
  const double lap = lp_integral(laplacian(u), 2.0);
  return std::sqrt(base + lap);
}

double gradient_norm_squared(const Field& u) { return spectral_weight_sum(u, u.grid().k_squared()); }

Complex inner(const Field& u, const Field& v) {
  require_same_grid(u, v);
  return u.grid().cell_volume() * (u.values() * v.values().conjugate()).sum();
}

Field band_limited_random(const PeriodicGrid& grid, std::uint64_t seed, int kmax, double amplitude) {
  if (kmax < 0 || kmax >= grid.n() / 2) throw DomainError("kmax must lie below the Nyquist index n/2");
  std::mt19937_64 engine(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const Index n = grid.n();
  ComplexArray hat = ComplexArray::Zero(grid.size());
  for (Index flat = 0; flat < grid.size(); ++flat) {
    const auto idx = grid.multi_index(flat);
    bool inside = true;
    for (int d = 0; d < grid.dims() && inside; ++d) {
      const Index signed_j = idx[d] < n / 2 ? idx[d] : idx[d] - n;
      inside = std::abs(signed_j) <= kmax;
    }
    if (!inside) continue;
    const double re = normal(engine);
    const double im = normal(engine);
    hat[flat] = Complex(re, im);
  }
  Field u = from_spectral(grid, hat);
  const double norm = lp_norm(u, 2.0);
  if (norm > 0) u.values() *= amplitude / norm;
  return u;
}

Field gaussian(const PeriodicGrid& grid, double amplitude, double width) {
  Field u(grid);
  for (Index flat = 0; flat < grid.size(); ++flat) {
    const auto idx = grid.multi_index(flat);
    double r2 = 0.0;
    for (int d = 0; d < grid.dims(); ++d) {
      const double x = grid.coordinate(idx[d]);
      r2 += x * x;
    }
    u.values()[flat] = amplitude * std::exp(-r2 / (2.0 * width * width));
  }
  return u;
}

double tail_mass_fraction(const Field& u) {
  const auto& grid = u.grid();
  const double edge = 0.4 * grid.length();
  double tail = 0.0;
  double total = 0.0;
  for (Index flat = 0; flat < grid.size(); ++flat) {
    const double w = std::norm(u.values()[flat]);
    total += w;
    const auto idx = grid.multi_index(flat);
    for (int d = 0; d < grid.dims(); ++d) {
      if (std::abs(grid.coordinate(idx[d])) >= edge) {
        tail += w;
        break;
      }
    }
  }
  return total > 0 ? tail / total : 0.0;
}

void flush_tiny(Field& u, double cutoff) {
  for (auto& value : u.values()) {
    if (std::abs(value) < cutoff) value = Complex(0.0, 0.0);
  }
}

}  // namespace extinguish
