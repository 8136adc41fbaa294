#pragma once

#include <vector>

#include "rheocontrol/fields.hpp"

namespace rheo {

// Discrete differential operators on the staggered grid.  The library keeps
// three structural identities exact to roundoff, because the solver's energy
// bookkeeping depends on them:
//   1. inner_product(div_stress(T), v) == -tensor_inner_product(T, sym_gradient(v))
//      for every v that vanishes on the boundary (discrete integration by parts);
//   2. inner_product(convect(w, z), z) == 0 for all w, z (skew convection);
//   3. inner_product(grad_pressure(p), v) == -inner_product(divergence(v), p)
//      for every boundary-vanishing v.

// Symmetric velocity gradient.  Diagonal entries are central differences at
// cell centers; the shear entry is collocated at mesh nodes (its natural
// position), reading tangential wall values through reflected ghosts.
SymTensorField sym_gradient(const StaggeredField& y);

// MAC divergence at cell centers; exact for affine fields.
PressureField divergence(const StaggeredField& y);

// Tensor divergence back to faces, defined as minus the adjoint of
// sym_gradient (identity 1); boundary faces of the result stay zero.
StaggeredField div_stress(const SymTensorField& T);

// Pressure gradient on faces, minus the adjoint of divergence (identity 3).
StaggeredField grad_pressure(const PressureField& p);

// Skew-symmetric convection (w . grad) z: half the difference of the centred
// advection operator and its transpose, so identity 2 holds for every
// advecting field, divergence-free or not.
StaggeredField convect(const StaggeredField& w, const StaggeredField& z);

// Quadratures.  Velocity fields use the h^2 face sum with halved boundary
// faces (exact for constants); tensors use the weighted Frobenius pairing
// (factor 2 on the shear component); pressure uses the plain midpoint rule.
double inner_product(const StaggeredField& a, const StaggeredField& b);
double inner_product(const PressureField& a, const PressureField& b);
double tensor_inner_product(const SymTensorField& a, const SymTensorField& b);

double norm2(const StaggeredField& a);
double norm2(const PressureField& a);
double norm2(const SymTensorField& a);

// Full-gradient seminorm: cell terms for the in-line derivatives plus node
// terms for the transverse ones (wall ghosts reflected).  Dominates
// norm2(sym_gradient(y)) for every field, which keeps the embedding
// constants below one by construction.
double grad_norm2(const StaggeredField& y);

// Sobolev-type norm sqrt(norm2(y)^2 + grad_norm2(y)^2); the solver's
// iterate-difference metric.
double norm_w12(const StaggeredField& y);

// L^q norm of the speed, evaluated at cell centers from face averages.
double norm_lq(const StaggeredField& y, double q);

// Flattening between fields and the interior-unknown vector (u dofs first,
// then v dofs, in grid numbering).
std::vector<double> to_dofs(const StaggeredField& y);
StaggeredField from_dofs(const MacGrid& g, const std::vector<double>& dofs);

}  // namespace rheo
