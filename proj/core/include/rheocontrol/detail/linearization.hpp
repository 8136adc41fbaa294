#pragma once

#include <vector>

#include "rheocontrol/detail/assembly.hpp"
#include "rheocontrol/exponent_field.hpp"

// Cell-sampled rheology data shared by the nonlinear solver and the adjoint
// machinery of the optimizer.

namespace rheo::detail {

// Exponent sampled at cell centers; throws ConfigError when the field's
// domain disagrees with the grid's.
std::vector<double> alpha_at_cells(const MacGrid& g, const ExponentField& field);

// Stress of the strain field, cell by cell.
SymTensorField stress_field(const SymTensorField& T, const std::vector<double>& alpha);

// Frozen fixed-point viscosity b_c = (1 + |T_c|)^(alpha_c - 2), floored at
// 1e-12; each floor hit increments *clamps when given.
std::vector<double> effective_viscosity(const MacGrid& g, const SymTensorField& T,
                                        const std::vector<double>& alpha, int* clamps);

// Exact derivative coefficients of the stress law at T:
//   dS/deta = a * eta (x) eta + b * Id,
//   b = (1 + r)^(alpha - 2),  a = (alpha - 2) (1 + r)^(alpha - 3) / r
// (a -> 0 as r -> 0).  Unclamped: used where derivative consistency with
// the discrete residual matters (Newton mode, adjoint solves).
void stress_linearization(const MacGrid& g, const SymTensorField& T,
                          const std::vector<double>& alpha, std::vector<double>* a_cell,
                          std::vector<double>* b_cell);

// Full saddle Jacobian of the discrete residual at state y: exact stress
// derivative plus both convection derivatives, bordered by the divergence
// and gauge rows.
SpMat state_jacobian(const MacGrid& g, const StaggeredField& y, const ExponentField& field);

}  // namespace rheo::detail
