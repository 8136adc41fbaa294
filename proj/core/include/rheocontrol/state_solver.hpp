#pragma once

#include <vector>

#include "rheocontrol/exponent_field.hpp"
#include "rheocontrol/fields.hpp"
#include "rheocontrol/grid.hpp"

namespace rheo {

// Settings of the nonlinear state solve.  The reference path is a fixed
// point iteration: freeze the effective viscosity (1 + |Dy|)^(alpha - 2)
// and the convecting field at the current iterate and solve the linear
// saddle-point problem for the next one.  An optional Newton mode switches
// to the exact stress/convection Jacobian after a short burn-in.
struct SolverConfig {
  double picard_tol = 1e-9;          // on the iterate difference in ||.||_{1,2}
  int picard_max_iter = 200;
  double linear_tol = 1e-11;         // relative residual of the linear core
  double under_relaxation = 1.0;     // in (0,1]; auto-halved when the residual grows
  double smallness_q = 4.0;          // exponent of the ||u||_q data-size heuristic, > 2
  double smallness_threshold = 1.0;  // warn when ||u||_q exceeds this
  bool use_newton = false;
  int newton_burn_in = 2;            // fixed-point iterations before Newton engages

  void validate() const;  // throws ConfigError on out-of-range values
};

// Converged velocity/pressure pair with the solver's energy bookkeeping.
//
// Invariants on a successful return:
//   - divergence_max <= 1e-10,
//   - residual_norm <= picard_tol,
//   - energy_lhs <= energy_rhs_bound + 1e-8, where energy_rhs_bound is the
//     a-priori estimate c8_hat * ||u||_2 with c8_hat = c1 / c_coer built
//     from the grid's embedding constants and the worst-cell coercivity
//     factor of the converged strain field.
struct StateSolution {
  StaggeredField y;
  PressureField p;
  double residual_norm = 0.0;  // ||momentum residual||_2 / max(1, ||u||_2)
  int iterations = 0;
  double energy_lhs = 0.0;       // ||D y||_2
  double energy_rhs_bound = 0.0; // c8_hat * ||u||_2
  bool smallness_warning = false;

  // Extended diagnostics.
  double step_norm = 0.0;           // last ||y^{k+1} - y^k||_{1,2}
  double divergence_max = 0.0;      // max-norm of divergence(y)
  double energy_identity_gap = 0.0; // relative gap of (S(Dy), Dy) == (u, y)
  double gauge_multiplier = 0.0;    // pressure-gauge unknown, ~0 at solutions
  int clamping_events = 0;          // viscosity clamps at the 1e-12 floor
  bool used_under_relaxation = false;
  std::vector<double> residual_history;  // relative residual per iteration

  explicit StateSolution(const MacGrid& g) : y(g), p(g) {}
};

// Strong-form residual pair.  momentum is zero at a solution:
//   momentum = div_stress(stress(sym_gradient(y), alpha)) - convect(y, y)
//              - grad_pressure(p) + u,
// with boundary faces zeroed (they carry no equation); mass = divergence(y).
struct Residual {
  StaggeredField momentum;
  PressureField mass;
};

Residual residual(const StaggeredField& y, const PressureField& p, const StaggeredField& u,
                  const ExponentField& field);

// Solves the stationary flow problem for the control/body force u.
// Boundary faces of u are ignored (the velocity space is no-slip).  The
// optional warm start seeds the first iterate; it must be discretely
// divergence-free (pass a previous solution's y).
//
// Errors: ConfigError (bad cfg or mismatched domains), LinearSolveError
// (linear core breakdown), PicardDivergenceError (iteration budget
// exhausted; carries the residual history).
StateSolution solve_state(const StaggeredField& u, const ExponentField& field,
                          const SolverConfig& cfg = {},
                          const StaggeredField* warm_start = nullptr);

// Relative gap of the discrete energy identity (S(Dy), Dy) == (u, y),
//   |tensor_inner_product(S(Dy), Dy) - inner_product(u, y)|
//     / max(1, |inner_product(u, y)|).
// Small at convergence because the discrete convection term is exactly
// skew-symmetric and the stress divergence is the exact negative adjoint
// of the strain operator.
double energy_identity_check(const StateSolution& sol, const StaggeredField& u,
                             const ExponentField& field);

}  // namespace rheo
