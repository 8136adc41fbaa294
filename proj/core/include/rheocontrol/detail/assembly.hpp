#pragma once

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <vector>

#include "rheocontrol/detail/stencils.hpp"
#include "rheocontrol/fields.hpp"

// Sparse assemblies of the operators defined by the stencil emissions, plus
// the bordered saddle operator and a direct linear core.  Everything here is
// private to the library, so Eigen stays out of the installed interface.

namespace rheo::detail {

using SpMat = Eigen::SparseMatrix<double>;
using Vec = Eigen::VectorXd;

// Interior-unknown index of a face, -1 for boundary faces.
inline int face_dof(const MacGrid& g, const Face& f) {
  return f.s == Slot::U ? g.udof(f.i, f.j) : g.vdof(f.i, f.j);
}

// Strain operator, (2*n_cells + n_nodes) x n_veldof: diagonal components at
// cells (rows comp * n_cells + cell), the shear component at nodes (rows
// 2 * n_cells + node).
SpMat strain_matrix(const MacGrid& g);

// Divergence operator, n_cells x n_veldof.
SpMat div_matrix(const MacGrid& g);

// Full-gradient operator used by the embedding eigenproblems.
SpMat grad_matrix(const MacGrid& g);

// D^T B D with diagonal B: cell viscosity b_c on the diagonal rows, twice
// the quarter-sum of adjacent b_c on each node shear row (the trapezoid
// pairing weight times the mean adjacent viscosity) — the frozen
// effective-viscosity operator of the fixed-point iteration.
SpMat strain_weighted_matrix(const MacGrid& g, const std::vector<double>& b_cell);

// D^T B D where B scatters per-cell 6x6 blocks over the local components
// (t11_c, t22_c, four corner shears): b_c * G + a_c * (G tau)(G tau)^T with
// G = diag(1, 1, 1/2, 1/2, 1/2, 1/2) and tau the strain values at those
// slots — the exact derivative of the stress term at strain state eta.
SpMat strain_jacobian_matrix(const MacGrid& g, const std::vector<double>& a_cell,
                             const std::vector<double>& b_cell, const SymTensorField& eta);

// Centred advection of the z argument for frozen advecting field w.
SpMat advection_matrix(const MacGrid& g, const StaggeredField& w);

// 0.5 * (A_w - A_w^T): the skew convection operator, exactly antisymmetric.
SpMat skew_convection_matrix(const MacGrid& g, const StaggeredField& w);

// Derivative of convect(w, y) with respect to w at frozen y.
SpMat convection_w_jacobian(const MacGrid& g, const StaggeredField& y);

// Bordered saddle operator on unknowns (velocity dofs, cell pressures, one
// gauge multiplier):
//   [ Avv   -Div^T   0       ]
//   [ Div    0       h^2 e_m ]
//   [ 0     h^2 e_m^T  0     ]
// with e_m the last-cell indicator.  The gauge row pins that cell's pressure,
// removing the constant mode; the multiplier relaxes the (redundant) last
// continuity row and vanishes at any compatible right-hand side.  A single
// entry keeps the LU factors sparse; callers renormalise the pressure to zero
// mean afterwards.
SpMat saddle_matrix(const MacGrid& g, const SpMat& Avv);

Vec field_to_vec(const StaggeredField& y);
StaggeredField vec_to_field(const MacGrid& g, const Vec& x);
PressureField vec_to_pressure(const MacGrid& g, const Vec& x);

// Sparse LU with iterative refinement to a relative-residual target.
class DirectSolver {
 public:
  void factorize(const SpMat& A);
  // Throws LinearSolveError if the refined residual cannot reach rel_tol.
  Vec solve(const Vec& b, double rel_tol, int max_refine = 8) const;
  double last_relative_residual() const { return last_rel_; }

 private:
  SpMat A_;
  Eigen::SparseLU<SpMat> lu_;
  mutable double last_rel_ = 0.0;
};

}  // namespace rheo::detail
