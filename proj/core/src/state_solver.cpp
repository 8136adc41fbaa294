#include "rheocontrol/state_solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rheocontrol/detail/linearization.hpp"
#include "rheocontrol/operators.hpp"
#include "rheocontrol/poincare_korn.hpp"
#include "rheocontrol/tensor_model.hpp"

namespace rheo {

namespace detail {

std::vector<double> alpha_at_cells(const MacGrid& g, const ExponentField& field) {
  const Domain& d = field.domain();
  if (d.Lx != g.Lx() || d.Ly != g.Ly())
    throw ConfigError("exponent field domain does not match the grid");
  std::vector<double> a(static_cast<std::size_t>(g.n_cells()));
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i)
      a[static_cast<std::size_t>(g.ci(i, j))] = field.eval(g.cx(i), g.cy(j));
  return a;
}

SymTensorField stress_field(const SymTensorField& T, const std::vector<double>& alpha) {
  const MacGrid& g = T.grid();
  SymTensorField S(g);
  // Viscosity lives at cell centers through the cell invariant; diagonal
  // stress components scale in place, while the node shear takes the mean
  // of the adjacent cell viscosities (gradient of the cell-sum energy).
  std::vector<double> nu(static_cast<std::size_t>(g.n_cells()));
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      const std::size_t n = static_cast<std::size_t>(g.ci(i, j));
      nu[n] = std::pow(1.0 + T.norm_at(i, j), alpha[n] - 2.0);
      S.t11(i, j) = nu[n] * T.t11(i, j);
      S.t22(i, j) = nu[n] * T.t22(i, j);
    }
  for (int b = 0; b <= g.ny(); ++b)
    for (int a = 0; a <= g.nx(); ++a) {
      double s = 0.0;
      int cnt = 0;
      for (int j = b - 1; j <= b; ++j)
        for (int i = a - 1; i <= a; ++i)
          if (i >= 0 && i < g.nx() && j >= 0 && j < g.ny()) {
            s += nu[static_cast<std::size_t>(g.ci(i, j))];
            ++cnt;
          }
      S.t12(a, b) = (s / cnt) * T.t12(a, b);
    }
  return S;
}

std::vector<double> effective_viscosity(const MacGrid& g, const SymTensorField& T,
                                        const std::vector<double>& alpha, int* clamps) {
  std::vector<double> b(static_cast<std::size_t>(g.n_cells()));
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      const std::size_t n = static_cast<std::size_t>(g.ci(i, j));
      double nu = std::pow(1.0 + T.norm_at(i, j), alpha[n] - 2.0);
      if (nu < 1e-12) {
        nu = 1e-12;
        if (clamps) ++*clamps;
      }
      b[n] = nu;
    }
  return b;
}

void stress_linearization(const MacGrid& g, const SymTensorField& T,
                          const std::vector<double>& alpha, std::vector<double>* a_cell,
                          std::vector<double>* b_cell) {
  a_cell->assign(static_cast<std::size_t>(g.n_cells()), 0.0);
  b_cell->assign(static_cast<std::size_t>(g.n_cells()), 0.0);
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      const std::size_t n = static_cast<std::size_t>(g.ci(i, j));
      const double r = T.norm_at(i, j);
      const double al = alpha[n];
      (*b_cell)[n] = std::pow(1.0 + r, al - 2.0);
      (*a_cell)[n] = r > 0.0 ? (al - 2.0) * std::pow(1.0 + r, al - 3.0) / r : 0.0;
    }
}

SpMat state_jacobian(const MacGrid& g, const StaggeredField& y, const ExponentField& field) {
  const SymTensorField T = sym_gradient(y);
  const std::vector<double> alpha = alpha_at_cells(g, field);
  std::vector<double> a_cell, b_cell;
  stress_linearization(g, T, alpha, &a_cell, &b_cell);
  SpMat avv = strain_jacobian_matrix(g, a_cell, b_cell, T);
  avv += skew_convection_matrix(g, y);
  avv += convection_w_jacobian(g, y);
  return saddle_matrix(g, avv);
}

}  // namespace detail

void SolverConfig::validate() const {
  if (!(picard_tol > 0.0)) throw ConfigError("solver: picard_tol must be positive");
  if (picard_max_iter < 1) throw ConfigError("solver: picard_max_iter must be >= 1");
  if (!(linear_tol > 0.0)) throw ConfigError("solver: linear_tol must be positive");
  if (!(under_relaxation > 0.0) || under_relaxation > 1.0)
    throw ConfigError("solver: under_relaxation must lie in (0, 1]");
  if (!(smallness_q > 2.0)) throw ConfigError("solver: smallness_q must exceed 2");
  if (!(smallness_threshold > 0.0)) throw ConfigError("solver: smallness_threshold must be positive");
  if (newton_burn_in < 0) throw ConfigError("solver: newton_burn_in must be >= 0");
}

Residual residual(const StaggeredField& y, const PressureField& p, const StaggeredField& u,
                  const ExponentField& field) {
  const MacGrid& g = y.grid();
  y.require_same_grid(u);
  if (!(p.grid() == g)) throw ShapeError("residual: pressure grid mismatch");

  const SymTensorField T = sym_gradient(y);
  const SymTensorField S = detail::stress_field(T, detail::alpha_at_cells(g, field));

  StaggeredField mom = div_stress(S);
  mom -= convect(y, y);
  mom -= grad_pressure(p);
  mom += u;
  mom.zero_boundary();
  return {std::move(mom), divergence(y)};
}

StateSolution solve_state(const StaggeredField& u, const ExponentField& field,
                          const SolverConfig& cfg, const StaggeredField* warm_start) {
  cfg.validate();
  const MacGrid& g = u.grid();
  const std::vector<double> alpha = detail::alpha_at_cells(g, field);

  StaggeredField force = u;
  force.zero_boundary();
  const double unorm = norm2(force);
  const double scale = std::max(1.0, unorm);

  const int nv = g.n_veldof();
  const int nc = g.n_cells();
  const double h2 = g.h() * g.h();

  StateSolution sol(g);
  if (warm_start) {
    warm_start->require_same_grid(force);
    sol.y = *warm_start;
    sol.y.zero_boundary();
  }

  auto momentum_rel_residual = [&](const StaggeredField& yy, const PressureField& pp) {
    return norm2(residual(yy, pp, force, field).momentum) / scale;
  };

  detail::Vec fixed_rhs = detail::Vec::Zero(nv + nc + 1);
  fixed_rhs.head(nv) = detail::field_to_vec(force);

  double prev_res = momentum_rel_residual(sol.y, sol.p);
  bool converged = false;

  for (int k = 0; k < cfg.picard_max_iter && !converged; ++k) {
    const SymTensorField T = sym_gradient(sol.y);
    const bool newton_now = cfg.use_newton && k >= cfg.newton_burn_in;

    detail::SpMat avv;
    if (newton_now) {
      std::vector<double> a_cell, b_cell;
      detail::stress_linearization(g, T, alpha, &a_cell, &b_cell);
      avv = detail::strain_jacobian_matrix(g, a_cell, b_cell, T);
      avv += detail::skew_convection_matrix(g, sol.y);
      avv += detail::convection_w_jacobian(g, sol.y);
    } else {
      const std::vector<double> nu =
          detail::effective_viscosity(g, T, alpha, &sol.clamping_events);
      avv = detail::strain_weighted_matrix(g, nu);
      avv += detail::skew_convection_matrix(g, sol.y);
    }

    detail::DirectSolver lin;
    lin.factorize(detail::saddle_matrix(g, avv));

    detail::Vec x;
    if (newton_now) {
      const Residual res = residual(sol.y, sol.p, force, field);
      detail::Vec rhs(nv + nc + 1);
      rhs.head(nv) = detail::field_to_vec(res.momentum);
      for (int c = 0; c < nc; ++c) rhs[nv + c] = -res.mass.data()[static_cast<std::size_t>(c)];
      rhs[nv + nc] = -h2 * sol.p.data()[static_cast<std::size_t>(nc - 1)];
      x = lin.solve(rhs, cfg.linear_tol);
    } else {
      x = lin.solve(fixed_rhs, cfg.linear_tol);
    }

    const StaggeredField y_new = detail::vec_to_field(g, x);
    const PressureField p_new = detail::vec_to_pressure(g, x);

    // Accept the step under-relaxed, halving while the momentum residual
    // grows (floor at omega/64 so a necessary residual bump cannot stall
    // the loop forever; the iteration budget is the real guard).
    double omega = cfg.under_relaxation;
    StaggeredField y_cand(g);
    PressureField p_cand(g);
    double cand_res = 0.0;
    for (;;) {
      y_cand = sol.y;
      p_cand = sol.p;
      if (newton_now) {
        y_cand.axpy(omega, y_new);
        for (int c = 0; c < nc; ++c)
          p_cand.data()[static_cast<std::size_t>(c)] += omega * p_new.data()[static_cast<std::size_t>(c)];
      } else {
        y_cand *= 1.0 - omega;
        y_cand.axpy(omega, y_new);
        for (int c = 0; c < nc; ++c)
          p_cand.data()[static_cast<std::size_t>(c)] =
              (1.0 - omega) * p_cand.data()[static_cast<std::size_t>(c)] +
              omega * p_new.data()[static_cast<std::size_t>(c)];
      }
      cand_res = momentum_rel_residual(y_cand, p_cand);
      if (cand_res <= prev_res || omega <= cfg.under_relaxation / 64.0) break;
      omega *= 0.5;
      sol.used_under_relaxation = true;
    }

    StaggeredField diff = y_cand;
    diff -= sol.y;
    sol.step_norm = norm_w12(diff);
    sol.y = y_cand;
    sol.p = p_cand;
    sol.gauge_multiplier = x[nv + nc];
    sol.residual_history.push_back(cand_res);
    prev_res = cand_res;
    sol.iterations = k + 1;

    converged = sol.step_norm < cfg.picard_tol && cand_res <= cfg.picard_tol;
  }

  if (!converged)
    throw PicardDivergenceError(
        "state solve: no convergence within " + std::to_string(cfg.picard_max_iter) +
            " iterations (last relative residual " + std::to_string(prev_res) + ")",
        sol.residual_history);

  sol.residual_norm = prev_res;
  sol.p.shift_to_zero_mean();  // solve pins one cell; report the mean-zero representative
  sol.divergence_max = divergence(sol.y).max_abs();

  const SymTensorField T = sym_gradient(sol.y);
  sol.energy_lhs = norm2(T);

  // Worst-cell coercivity factor of the converged strain field; the thinning
  // branch decays with |T| while the thickening branch is bounded below by 1.
  const TensorConstants tc = TensorConstants::canonical(field.alpha0(), field.alpha_inf());
  double c_coer = 1.0;
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      const double al = alpha[static_cast<std::size_t>(g.ci(i, j))];
      if (al >= 2.0) continue;
      c_coer = std::min(
          c_coer, tc.monotonicity_factor * std::pow(1.0 + T.norm_at(i, j), al - 2.0));
    }
  sol.energy_rhs_bound = embedding_constants(g).c1 / c_coer * unorm;

  if (sol.divergence_max > 1e-10)
    throw InvariantViolation("state solve: converged iterate is not discretely divergence-free (" +
                             std::to_string(sol.divergence_max) + ")");
  if (sol.energy_lhs > sol.energy_rhs_bound + 1e-8)
    throw InvariantViolation("state solve: energy estimate failed (" +
                             std::to_string(sol.energy_lhs) + " > " +
                             std::to_string(sol.energy_rhs_bound) + ")");

  sol.energy_identity_gap = energy_identity_check(sol, force, field);
  sol.smallness_warning =
      sol.used_under_relaxation || norm_lq(force, cfg.smallness_q) > cfg.smallness_threshold;
  return sol;
}

double energy_identity_check(const StateSolution& sol, const StaggeredField& u,
                             const ExponentField& field) {
  const MacGrid& g = sol.y.grid();
  const SymTensorField T = sym_gradient(sol.y);
  const SymTensorField S = detail::stress_field(T, detail::alpha_at_cells(g, field));
  const double lhs = tensor_inner_product(S, T);
  const double rhs = inner_product(u, sol.y);
  return std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs));
}

}  // namespace rheo
