#pragma once

#include <cstdint>
#include <vector>

#include "rheocontrol/grid.hpp"

namespace rheo {

// Velocity-shaped field on the staggered grid: x-component on vertical
// faces, y-component on horizontal faces.  Boundary faces are stored (so
// analytic samples round-trip), but fields in the no-slip class keep them
// at zero; zero_boundary() enforces that role.
class StaggeredField {
public:
  explicit StaggeredField(const MacGrid& g)
      : grid_(g),
        u_(static_cast<std::size_t>(g.n_u()), 0.0),
        v_(static_cast<std::size_t>(g.n_v()), 0.0) {}

  const MacGrid& grid() const { return grid_; }

  double u(int i, int j) const { return u_[static_cast<std::size_t>(grid_.ui(i, j))]; }
  double v(int i, int j) const { return v_[static_cast<std::size_t>(grid_.vi(i, j))]; }
  double& u(int i, int j) { return u_[static_cast<std::size_t>(grid_.ui(i, j))]; }
  double& v(int i, int j) { return v_[static_cast<std::size_t>(grid_.vi(i, j))]; }

  std::vector<double>& u_data() { return u_; }
  std::vector<double>& v_data() { return v_; }
  const std::vector<double>& u_data() const { return u_; }
  const std::vector<double>& v_data() const { return v_; }

  void zero_boundary();

  StaggeredField& operator+=(const StaggeredField& o);
  StaggeredField& operator-=(const StaggeredField& o);
  StaggeredField& operator*=(double c);
  // this += c * o
  void axpy(double c, const StaggeredField& o);

  double max_abs() const;

  void require_same_grid(const StaggeredField& o) const;

private:
  MacGrid grid_;
  std::vector<double> u_, v_;
};

// Scalar field at cell centers (pressure, divergence, viscosity, ...).
class PressureField {
public:
  explicit PressureField(const MacGrid& g)
      : grid_(g), a_(static_cast<std::size_t>(g.n_cells()), 0.0) {}

  const MacGrid& grid() const { return grid_; }

  double at(int i, int j) const { return a_[static_cast<std::size_t>(grid_.ci(i, j))]; }
  double& at(int i, int j) { return a_[static_cast<std::size_t>(grid_.ci(i, j))]; }

  std::vector<double>& data() { return a_; }
  const std::vector<double>& data() const { return a_; }

  double mean() const;
  void shift_to_zero_mean();
  double max_abs() const;

  PressureField& operator-=(const PressureField& o);

private:
  MacGrid grid_;
  std::vector<double> a_;
};

// Symmetric 2x2 tensor field: diagonal components at cell centers, shear
// component at mesh nodes (the natural home of du/dy + dv/dx on a staggered
// grid; node collocation is what keeps the strain/divergence pair
// second-order accurate at walls).  Cell-centered invariants recombine the
// shear through its four corner nodes.
class SymTensorField {
public:
  explicit SymTensorField(const MacGrid& g)
      : grid_(g),
        t11_(static_cast<std::size_t>(g.n_cells()), 0.0),
        t22_(static_cast<std::size_t>(g.n_cells()), 0.0),
        t12_(static_cast<std::size_t>(g.n_nodes()), 0.0) {}

  const MacGrid& grid() const { return grid_; }

  double t11(int i, int j) const { return t11_[static_cast<std::size_t>(grid_.ci(i, j))]; }
  double t22(int i, int j) const { return t22_[static_cast<std::size_t>(grid_.ci(i, j))]; }
  double& t11(int i, int j) { return t11_[static_cast<std::size_t>(grid_.ci(i, j))]; }
  double& t22(int i, int j) { return t22_[static_cast<std::size_t>(grid_.ci(i, j))]; }
  // Shear value at node (i, j), i in [0, nx], j in [0, ny].
  double t12(int i, int j) const { return t12_[static_cast<std::size_t>(grid_.ni(i, j))]; }
  double& t12(int i, int j) { return t12_[static_cast<std::size_t>(grid_.ni(i, j))]; }

  std::vector<double>& t11_data() { return t11_; }
  std::vector<double>& t22_data() { return t22_; }
  std::vector<double>& t12_data() { return t12_; }
  const std::vector<double>& t11_data() const { return t11_; }
  const std::vector<double>& t22_data() const { return t22_; }
  const std::vector<double>& t12_data() const { return t12_; }

  // Mean of the squared shear over the cell's four corner nodes.
  double shear_sq_at(int i, int j) const;
  // Frobenius-type cell invariant sqrt(t11^2 + t22^2 + 2 * shear_sq).
  double norm_at(int i, int j) const;

  SymTensorField& operator-=(const SymTensorField& o);

private:
  MacGrid grid_;
  std::vector<double> t11_, t22_, t12_;
};

// Deterministic pseudo-random fields for estimators and property tests.
// All randomness in the library flows through explicitly seeded generators.
StaggeredField random_field(const MacGrid& g, std::uint64_t seed);
// Discrete curl of a random nodal stream function: divergence-free to
// machine precision and zero on all boundary faces.
StaggeredField random_solenoidal_field(const MacGrid& g, std::uint64_t seed);
// Superposition of a few low-frequency solenoidal modes plus a small white
// component; useful as a well-conditioned direction for difference checks.
StaggeredField smooth_random_field(const MacGrid& g, std::uint64_t seed);

}  // namespace rheo
