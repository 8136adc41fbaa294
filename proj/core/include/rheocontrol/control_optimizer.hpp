#pragma once

#include <utility>
#include <vector>

#include "rheocontrol/exponent_field.hpp"
#include "rheocontrol/fields.hpp"
#include "rheocontrol/state_solver.hpp"

namespace rheo {

// Tracking-type control problem: steer the flow toward the target velocity
// y_d with a quadratic control penalty,
//   J(u) = 1/2 ||y_u - y_d||_2^2 + (reg_nu/2) ||u||_2^2,
// where y_u solves the stationary flow problem with body force u.
struct ControlProblem {
  StaggeredField y_d;
  double reg_nu;
  ExponentField field;
  SolverConfig solver_cfg;

  ControlProblem(StaggeredField target, double reg, ExponentField f, SolverConfig cfg = {})
      : y_d(std::move(target)), reg_nu(reg), field(std::move(f)), solver_cfg(std::move(cfg)) {}

  void validate() const;  // throws ConfigError on bad reg_nu / non-finite target
};

// One accepted optimizer iterate.  step is ||u_k - u_{k-1}||_2 (0 at k = 0).
struct TraceRecord {
  int k = 0;
  double J = 0.0;
  double u_norm = 0.0;
  double grad_norm = 0.0;
  double step = 0.0;
};

enum class OptimizeStatus { GradientConverged, MaxIterReached };

// Trace invariants, asserted by the optimizer itself:
//   - J is nonincreasing across accepted records,
//   - (reg_nu/2) * u_norm^2 <= J0 at every record (the minimizing sequence
//     stays bounded).
struct OptimizationTrace {
  std::vector<TraceRecord> records;
  OptimizeStatus status = OptimizeStatus::MaxIterReached;
  double J0 = 0.0;
  int state_solves = 0;  // total nonlinear solves, line-search trials included
};

struct OptimizeOptions {
  int max_iter = 100;
  double grad_tol = 1e-8;
  int lbfgs_memory = 8;       // 0 disables the quasi-Newton accelerant
  double armijo_c = 1e-4;     // sufficient-decrease parameter
  int max_backtracks = 40;    // step halvings before giving up
  int fd_check_cadence = 0;   // 0 = off; else verify the gradient every k-th iterate
  double fd_epsilon = 1e-5;
  double fd_check_tol = 1e-4;

  void validate() const;
};

struct OptimizeResult {
  StaggeredField u;
  StateSolution solution;  // converged state at the returned control
  OptimizationTrace trace;
};

// Objective value together with the state solution it required (reusable as
// a warm start).  Boundary faces of u are ignored: the control space is the
// interior staggered force field.
std::pair<double, StateSolution> evaluate_J(const StaggeredField& u, const ControlProblem& prob,
                                            const StaggeredField* warm_start = nullptr);

// Exact gradient of the discrete objective: solve the adjoint system
// A(y_u)^T lambda = (y_u - y_d) with A the Jacobian of the discrete flow
// residual at the converged state, then combine with the penalty term.
// The finite-difference oracle in the verification suite is the arbiter of
// the sign and scaling conventions.
StaggeredField gradient_J(const StaggeredField& u, const ControlProblem& prob);

// Same, reusing an already converged solution at u.
StaggeredField gradient_from_solution(const StateSolution& sol, const StaggeredField& u,
                                      const ControlProblem& prob);

// Descent with backtracking line search (sufficient decrease, halving) and
// an optional L-BFGS accelerant that falls back to steepest descent when
// curvature information is unusable.  State solves inside the line search
// warm-start from the last accepted state.  Stops when the gradient norm
// reaches grad_tol or the iteration budget runs out; throws LineSearchError
// (with the accepted-J history attached) if no acceptable step exists.
OptimizeResult optimize(const StaggeredField& u0, const ControlProblem& prob,
                        const OptimizeOptions& opts = {});

// Deterministic smooth interior control with unit discrete norm, keyed by
// seed.  Recoverable-target experiments forward-solve from this control, so
// the resulting target is attainable by construction.
StaggeredField recoverable_control(const MacGrid& g, std::uint64_t seed);

}  // namespace rheo
