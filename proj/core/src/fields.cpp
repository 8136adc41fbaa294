#include "rheocontrol/fields.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace rheo {

void StaggeredField::zero_boundary() {
  const int nx = grid_.nx(), ny = grid_.ny();
  for (int j = 0; j < ny; ++j) {
    u(0, j) = 0.0;
    u(nx, j) = 0.0;
  }
  for (int i = 0; i < nx; ++i) {
    v(i, 0) = 0.0;
    v(i, ny) = 0.0;
  }
}

void StaggeredField::require_same_grid(const StaggeredField& o) const {
  if (!(grid_ == o.grid_)) throw ShapeError("StaggeredField: mismatched grids");
}

StaggeredField& StaggeredField::operator+=(const StaggeredField& o) {
  require_same_grid(o);
  for (std::size_t n = 0; n < u_.size(); ++n) u_[n] += o.u_[n];
  for (std::size_t n = 0; n < v_.size(); ++n) v_[n] += o.v_[n];
  return *this;
}

StaggeredField& StaggeredField::operator-=(const StaggeredField& o) {
  require_same_grid(o);
  for (std::size_t n = 0; n < u_.size(); ++n) u_[n] -= o.u_[n];
  for (std::size_t n = 0; n < v_.size(); ++n) v_[n] -= o.v_[n];
  return *this;
}

StaggeredField& StaggeredField::operator*=(double c) {
  for (double& x : u_) x *= c;
  for (double& x : v_) x *= c;
  return *this;
}

void StaggeredField::axpy(double c, const StaggeredField& o) {
  require_same_grid(o);
  for (std::size_t n = 0; n < u_.size(); ++n) u_[n] += c * o.u_[n];
  for (std::size_t n = 0; n < v_.size(); ++n) v_[n] += c * o.v_[n];
}

double StaggeredField::max_abs() const {
  double m = 0.0;
  for (double x : u_) m = std::max(m, std::abs(x));
  for (double x : v_) m = std::max(m, std::abs(x));
  return m;
}

double PressureField::mean() const {
  double s = 0.0;
  for (double x : a_) s += x;
  return s / static_cast<double>(a_.size());
}

void PressureField::shift_to_zero_mean() {
  const double m = mean();
  for (double& x : a_) x -= m;
}

double PressureField::max_abs() const {
  double m = 0.0;
  for (double x : a_) m = std::max(m, std::abs(x));
  return m;
}

PressureField& PressureField::operator-=(const PressureField& o) {
  if (!(grid_ == o.grid_)) throw ShapeError("PressureField: mismatched grids");
  for (std::size_t n = 0; n < a_.size(); ++n) a_[n] -= o.a_[n];
  return *this;
}

double SymTensorField::shear_sq_at(int i, int j) const {
  const double a = t12(i, j), b = t12(i + 1, j), c = t12(i, j + 1), d = t12(i + 1, j + 1);
  return 0.25 * (a * a + b * b + c * c + d * d);
}

double SymTensorField::norm_at(int i, int j) const {
  const double a = t11(i, j), b = t22(i, j);
  return std::sqrt(a * a + b * b + 2.0 * shear_sq_at(i, j));
}

SymTensorField& SymTensorField::operator-=(const SymTensorField& o) {
  if (!(grid_ == o.grid_)) throw ShapeError("SymTensorField: mismatched grids");
  for (std::size_t n = 0; n < t11_.size(); ++n) t11_[n] -= o.t11_[n];
  for (std::size_t n = 0; n < t22_.size(); ++n) t22_[n] -= o.t22_[n];
  for (std::size_t n = 0; n < t12_.size(); ++n) t12_[n] -= o.t12_[n];
  return *this;
}

StaggeredField random_field(const MacGrid& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  StaggeredField f(g);
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 1; i < g.nx(); ++i) f.u(i, j) = gauss(rng);
  for (int j = 1; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) f.v(i, j) = gauss(rng);
  return f;
}

StaggeredField random_solenoidal_field(const MacGrid& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const int nx = g.nx(), ny = g.ny();
  const double h = g.h();
  // Nodal stream function, zero on the boundary ring.
  std::vector<double> psi(static_cast<std::size_t>(g.n_nodes()), 0.0);
  const auto ni = [&](int a, int b) { return static_cast<std::size_t>(b * (nx + 1) + a); };
  for (int b = 1; b < ny; ++b)
    for (int a = 1; a < nx; ++a) psi[ni(a, b)] = gauss(rng) * h;
  StaggeredField f(g);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i <= nx; ++i) f.u(i, j) = (psi[ni(i, j + 1)] - psi[ni(i, j)]) / h;
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i < nx; ++i) f.v(i, j) = -(psi[ni(i + 1, j)] - psi[ni(i, j)]) / h;
  return f;
}

StaggeredField smooth_random_field(const MacGrid& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const int nx = g.nx(), ny = g.ny();
  const double h = g.h();
  std::vector<double> psi(static_cast<std::size_t>(g.n_nodes()), 0.0);
  const auto ni = [&](int a, int b) { return static_cast<std::size_t>(b * (nx + 1) + a); };
  // A handful of low sine modes with random amplitudes.
  double amp[3][3];
  for (auto& row : amp)
    for (double& c : row) c = gauss(rng);
  for (int b = 0; b <= ny; ++b)
    for (int a = 0; a <= nx; ++a) {
      const double x = a * h / g.Lx(), y = b * h / g.Ly();
      double s = 0.0;
      for (int p = 1; p <= 3; ++p)
        for (int q = 1; q <= 3; ++q)
          s += amp[p - 1][q - 1] * std::sin(p * M_PI * x) * std::sin(q * M_PI * y) /
               static_cast<double>(p * p + q * q);
      psi[ni(a, b)] = s;
    }
  StaggeredField f(g);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i <= nx; ++i) f.u(i, j) = (psi[ni(i, j + 1)] - psi[ni(i, j)]) / h;
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i < nx; ++i) f.v(i, j) = -(psi[ni(i + 1, j)] - psi[ni(i, j)]) / h;
  // Small rough component so the direction is not purely low-frequency.
  std::normal_distribution<double> small(0.0, 0.05);
  for (int j = 0; j < ny; ++j)
    for (int i = 1; i < nx; ++i) f.u(i, j) += small(rng) * h;
  for (int j = 1; j < ny; ++j)
    for (int i = 0; i < nx; ++i) f.v(i, j) += small(rng) * h;
  return f;
}

}  // namespace rheo
