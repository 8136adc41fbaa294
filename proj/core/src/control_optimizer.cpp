#include "rheocontrol/control_optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <string>

#include "rheocontrol/detail/linearization.hpp"
#include "rheocontrol/operators.hpp"

namespace rheo {

namespace {

bool all_finite(const std::vector<double>& a) {
  for (double v : a)
    if (!std::isfinite(v)) return false;
  return true;
}

StaggeredField interior_control(const StaggeredField& u) {
  StaggeredField c = u;
  c.zero_boundary();
  return c;
}

}  // namespace

void ControlProblem::validate() const {
  if (!(reg_nu > 0.0)) throw ConfigError("control problem: reg_nu must be positive");
  if (!all_finite(y_d.u_data()) || !all_finite(y_d.v_data()))
    throw ConfigError("control problem: target velocity contains non-finite values");
  solver_cfg.validate();
}

void OptimizeOptions::validate() const {
  if (max_iter < 1) throw ConfigError("optimize: max_iter must be >= 1");
  if (!(grad_tol > 0.0)) throw ConfigError("optimize: grad_tol must be positive");
  if (lbfgs_memory < 0) throw ConfigError("optimize: lbfgs_memory must be >= 0");
  if (!(armijo_c > 0.0) || armijo_c >= 1.0)
    throw ConfigError("optimize: armijo_c must lie in (0, 1)");
  if (max_backtracks < 1) throw ConfigError("optimize: max_backtracks must be >= 1");
  if (fd_check_cadence < 0) throw ConfigError("optimize: fd_check_cadence must be >= 0");
  if (!(fd_epsilon > 0.0)) throw ConfigError("optimize: fd_epsilon must be positive");
  if (!(fd_check_tol > 0.0)) throw ConfigError("optimize: fd_check_tol must be positive");
}

std::pair<double, StateSolution> evaluate_J(const StaggeredField& u, const ControlProblem& prob,
                                            const StaggeredField* warm_start) {
  prob.validate();
  if (!all_finite(u.u_data()) || !all_finite(u.v_data()))
    throw ConfigError("evaluate_J: control contains non-finite values");
  u.require_same_grid(prob.y_d);

  const StaggeredField uc = interior_control(u);
  StateSolution sol = solve_state(uc, prob.field, prob.solver_cfg, warm_start);

  StaggeredField diff = sol.y;
  diff -= prob.y_d;
  const double J =
      0.5 * inner_product(diff, diff) + 0.5 * prob.reg_nu * inner_product(uc, uc);
  return {J, std::move(sol)};
}

StaggeredField gradient_from_solution(const StateSolution& sol, const StaggeredField& u,
                                      const ControlProblem& prob) {
  const MacGrid& g = sol.y.grid();
  const int nv = g.n_veldof();

  StaggeredField diff = sol.y;
  diff -= prob.y_d;

  detail::Vec rhs = detail::Vec::Zero(nv + g.n_cells() + 1);
  rhs.head(nv) = detail::field_to_vec(diff);

  detail::Vec lambda;
  try {
    const detail::SpMat A = detail::state_jacobian(g, sol.y, prob.field);
    detail::DirectSolver adjoint;
    adjoint.factorize(detail::SpMat(A.transpose()));
    lambda = adjoint.solve(rhs, prob.solver_cfg.linear_tol);
  } catch (const LinearSolveError& e) {
    throw LinearSolveError(std::string("adjoint system: ") + e.what());
  }

  StaggeredField grad = interior_control(u);
  grad *= prob.reg_nu;
  grad += detail::vec_to_field(g, lambda);
  grad.zero_boundary();
  return grad;
}

StaggeredField gradient_J(const StaggeredField& u, const ControlProblem& prob) {
  auto [J, sol] = evaluate_J(u, prob);
  (void)J;
  return gradient_from_solution(sol, u, prob);
}

namespace {

// Two-loop recursion over the stored (s, y) pairs; the result is the
// quasi-Newton descent direction -H * grad.  Plain dot products suffice:
// the uniform quadrature weight cancels from every ratio.
detail::Vec lbfgs_direction(const std::deque<std::pair<detail::Vec, detail::Vec>>& mem,
                            const detail::Vec& grad) {
  detail::Vec q = -grad;
  if (mem.empty()) return q;

  std::vector<double> alpha(mem.size());
  std::vector<double> rho(mem.size());
  for (std::size_t n = mem.size(); n-- > 0;) {
    const auto& [s, yv] = mem[n];
    rho[n] = 1.0 / yv.dot(s);
    alpha[n] = rho[n] * s.dot(q);
    q -= alpha[n] * yv;
  }
  const auto& [s_last, y_last] = mem.back();
  q *= s_last.dot(y_last) / y_last.dot(y_last);
  for (std::size_t n = 0; n < mem.size(); ++n) {
    const auto& [s, yv] = mem[n];
    const double beta = rho[n] * yv.dot(q);
    q += (alpha[n] - beta) * s;
  }
  return q;
}

}  // namespace

OptimizeResult optimize(const StaggeredField& u0, const ControlProblem& prob,
                        const OptimizeOptions& opts) {
  prob.validate();
  opts.validate();

  const MacGrid& g = prob.y_d.grid();
  OptimizationTrace trace;

  auto evaluate = [&](const StaggeredField& u, const StaggeredField* warm) {
    ++trace.state_solves;
    return evaluate_J(u, prob, warm);
  };

  StaggeredField u = interior_control(u0);
  auto [J, sol] = evaluate(u, nullptr);
  StaggeredField grad = gradient_from_solution(sol, u, prob);

  trace.J0 = J;
  trace.records.push_back({0, J, norm2(u), norm2(grad), 0.0});

  auto check_bound = [&](double u_norm) {
    if (0.5 * prob.reg_nu * u_norm * u_norm > trace.J0 * (1.0 + 1e-12) + 1e-300)
      throw InvariantViolation("optimize: control norm escaped the minimizing-sequence bound");
  };
  check_bound(trace.records.back().u_norm);

  std::deque<std::pair<detail::Vec, detail::Vec>> memory;

  for (int k = 1; k <= opts.max_iter; ++k) {
    if (trace.records.back().grad_norm <= opts.grad_tol) {
      trace.status = OptimizeStatus::GradientConverged;
      return {std::move(u), std::move(sol), std::move(trace)};
    }

    detail::Vec grad_vec = detail::field_to_vec(grad);
    detail::Vec dir_vec = lbfgs_direction(memory, grad_vec);
    StaggeredField dir = detail::vec_to_field(g, dir_vec);
    double slope = inner_product(grad, dir);
    if (!(slope < 0.0)) {  // unusable curvature: drop memory, steepest descent
      memory.clear();
      dir_vec = -grad_vec;
      dir = detail::vec_to_field(g, dir_vec);
      slope = -inner_product(grad, grad);
    }

    // Backtracking line search; a diverged state solve rejects the trial
    // exactly like an insufficient decrease.
    double t = 1.0;
    bool accepted = false;
    StaggeredField u_next = u;
    double J_next = J;
    for (int b = 0; b <= opts.max_backtracks && !accepted; ++b, t *= 0.5) {
      StaggeredField u_try = u;
      u_try.axpy(t, dir);
      try {
        auto [J_try, sol_try] = evaluate(u_try, &sol.y);
        if (J_try <= J + opts.armijo_c * t * slope) {
          u_next = std::move(u_try);
          J_next = J_try;
          sol = std::move(sol_try);
          accepted = true;
        }
      } catch (const PicardDivergenceError&) {
      } catch (const LinearSolveError&) {
      }
    }
    if (!accepted) {
      std::vector<double> history;
      for (const TraceRecord& r : trace.records) history.push_back(r.J);
      throw LineSearchError(
          "optimize: line search found no acceptable step at iteration " + std::to_string(k),
          std::move(history));
    }

    StaggeredField grad_next = gradient_from_solution(sol, u_next, prob);

    if (opts.fd_check_cadence > 0 && k % opts.fd_check_cadence == 0) {
      const StaggeredField d = smooth_random_field(g, 1000 + static_cast<std::uint64_t>(k));
      StaggeredField up = u_next, um = u_next;
      up.axpy(opts.fd_epsilon, d);
      um.axpy(-opts.fd_epsilon, d);
      const double fd =
          (evaluate(up, &sol.y).first - evaluate(um, &sol.y).first) / (2.0 * opts.fd_epsilon);
      const double an = inner_product(grad_next, d);
      // The floor keeps the comparison meaningful near stationary points,
      // where both sides vanish and a pure ratio would just amplify solver
      // noise in the difference quotient.
      const double scale = std::max({std::abs(fd), std::abs(an), 1e-3 * (1.0 + std::abs(J_next))});
      const double rel = std::abs(fd - an) / scale;
      if (rel > opts.fd_check_tol)
        throw InvariantViolation("optimize: adjoint gradient disagrees with finite differences (" +
                                 std::to_string(rel) + " relative)");
    }

    if (opts.lbfgs_memory > 0) {
      detail::Vec s = detail::field_to_vec(u_next) - detail::field_to_vec(u);
      detail::Vec yv = detail::field_to_vec(grad_next) - grad_vec;
      const double sy = s.dot(yv);
      if (sy > 1e-12 * s.norm() * yv.norm()) {
        memory.emplace_back(std::move(s), std::move(yv));
        while (memory.size() > static_cast<std::size_t>(opts.lbfgs_memory)) memory.pop_front();
      }
    }

    StaggeredField moved = u_next;
    moved -= u;
    u = std::move(u_next);
    J = J_next;
    grad = std::move(grad_next);
    trace.records.push_back({k, J, norm2(u), norm2(grad), norm2(moved)});
    check_bound(trace.records.back().u_norm);
  }

  trace.status = trace.records.back().grad_norm <= opts.grad_tol
                     ? OptimizeStatus::GradientConverged
                     : OptimizeStatus::MaxIterReached;
  return {std::move(u), std::move(sol), std::move(trace)};
}

StaggeredField recoverable_control(const MacGrid& g, std::uint64_t seed) {
  StaggeredField u = smooth_random_field(g, seed);
  u.zero_boundary();
  const double n = norm2(u);
  if (!(n > 0.0)) throw InvariantViolation("recoverable control: degenerate random draw");
  u *= 1.0 / n;
  return u;
}

}  // namespace rheo
