#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "rheocontrol/control_optimizer.hpp"
#include "rheocontrol/operators.hpp"
#include "support/testutil.hpp"

using namespace rheo;

namespace {

const Domain kUnit{1.0, 1.0};

SolverConfig tight_solver() {
  SolverConfig cfg;
  cfg.picard_tol = 1e-11;
  return cfg;
}

// Target reachable by construction: the flow generated by a known control.
ControlProblem recoverable_problem(const MacGrid& g, double reg, std::uint64_t seed) {
  const StaggeredField u_dagger = recoverable_control(g, seed);
  const SolverConfig cfg = tight_solver();
  const ExponentField field = ExponentField::constant(1.8, kUnit);
  return ControlProblem(solve_state(u_dagger, field, cfg).y, reg, field, cfg);
}

}  // namespace

TEST_CASE("problem and options validation rejects bad parameters") {
  const MacGrid g(8, 8, 1.0, 1.0);
  const ExponentField field = ExponentField::constant(1.8, kUnit);
  CHECK_THROWS_AS(ControlProblem(StaggeredField(g), 0.0, field).validate(), ConfigError);
  CHECK_THROWS_AS(ControlProblem(StaggeredField(g), -1.0, field).validate(), ConfigError);
  StaggeredField bad(g);
  bad.u(2, 2) = std::nan("");
  CHECK_THROWS_AS(ControlProblem(bad, 1.0, field).validate(), ConfigError);

  OptimizeOptions o;
  CHECK_NOTHROW(o.validate());
  o.max_iter = 0;
  CHECK_THROWS_AS(o.validate(), ConfigError);
  o = {};
  o.armijo_c = 1.0;
  CHECK_THROWS_AS(o.validate(), ConfigError);
  o = {};
  o.lbfgs_memory = -1;
  CHECK_THROWS_AS(o.validate(), ConfigError);
  o = {};
  o.fd_epsilon = 0.0;
  CHECK_THROWS_AS(o.validate(), ConfigError);
}

TEST_CASE("recoverable controls are deterministic, seed-keyed, unit-norm") {
  const MacGrid g(16, 16, 1.0, 1.0);
  const StaggeredField a = recoverable_control(g, 7);
  const StaggeredField b = recoverable_control(g, 7);
  const StaggeredField c = recoverable_control(g, 8);
  CHECK(testutil::field_dist(a, b) == 0.0);
  CHECK(testutil::field_dist(a, c) > 1e-3);
  CHECK(norm2(a) == doctest::Approx(1.0).epsilon(1e-13));
  for (int j = 0; j < g.ny(); ++j) {
    CHECK(a.u(0, j) == 0.0);
    CHECK(a.u(g.nx(), j) == 0.0);
  }
}

TEST_CASE("adjoint gradient matches central finite differences") {
  const MacGrid g(12, 12, 1.0, 1.0);
  const ControlProblem prob = recoverable_problem(g, 1e-2, 31);
  const StaggeredField u = recoverable_control(g, 99);  // generic point, not the optimum
  const StaggeredField grad = gradient_J(u, prob);

  for (std::uint64_t s = 0; s < 3; ++s) {
    const StaggeredField d = smooth_random_field(g, 500 + s);
    const double eps = 1e-5;
    StaggeredField up = u, um = u;
    up.axpy(eps, d);
    um.axpy(-eps, d);
    const double fd = (evaluate_J(up, prob).first - evaluate_J(um, prob).first) / (2.0 * eps);
    const double an = inner_product(grad, d);
    CHECK(std::abs(fd - an) <= 1e-4 * std::max({std::abs(fd), std::abs(an), 1e-6}));
  }
}

TEST_CASE("at the generating control the gradient is the pure penalty term") {
  // y_d was produced by u_dagger, so the tracking residual is a solver-level
  // zero there and grad J(u_dagger) collapses to reg_nu * u_dagger.
  const MacGrid g(12, 12, 1.0, 1.0);
  const double reg = 1e-2;
  const StaggeredField u_dagger = recoverable_control(g, 31);
  const ControlProblem prob = recoverable_problem(g, reg, 31);

  StaggeredField want = u_dagger;
  want *= reg;
  const StaggeredField got = gradient_J(u_dagger, prob);
  CHECK(testutil::field_dist(got, want) <= 1e-7);
}

TEST_CASE("descent run is monotone, bounded, and reports a consistent trace") {
  const MacGrid g(12, 12, 1.0, 1.0);
  const ControlProblem prob = recoverable_problem(g, 1e-2, 11);
  OptimizeOptions opts;
  opts.max_iter = 12;
  opts.grad_tol = 1e-10;
  const OptimizeResult res = optimize(StaggeredField(g), prob, opts);

  const auto& rec = res.trace.records;
  REQUIRE(rec.size() >= 2);
  CHECK(rec.front().k == 0);
  CHECK(rec.front().step == 0.0);
  CHECK(res.trace.J0 == rec.front().J);
  for (std::size_t k = 1; k < rec.size(); ++k) {
    CHECK(rec[k].J <= rec[k - 1].J);
    CHECK(0.5 * prob.reg_nu * rec[k].u_norm * rec[k].u_norm <= res.trace.J0 * (1.0 + 1e-12));
    CHECK(rec[k].k == static_cast<int>(k));
  }
  CHECK(rec.back().J < 0.1 * res.trace.J0);  // real progress, not a stall
  CHECK(res.trace.state_solves >= static_cast<int>(rec.size()));
  CHECK(norm2(res.u) == doctest::Approx(rec.back().u_norm).epsilon(1e-13));

  // The returned state belongs to the returned control.
  const auto [J_check, sol_check] = evaluate_J(res.u, prob, &res.solution.y);
  CHECK(J_check == doctest::Approx(rec.back().J).epsilon(1e-9));
}

TEST_CASE("the built-in finite-difference audit passes while optimizing") {
  const MacGrid g(12, 12, 1.0, 1.0);
  const ControlProblem prob = recoverable_problem(g, 1e-2, 23);
  OptimizeOptions opts;
  opts.max_iter = 3;
  opts.fd_check_cadence = 1;  // audit the adjoint gradient at every iterate
  CHECK_NOTHROW(optimize(StaggeredField(g), prob, opts));
}

TEST_CASE("quasi-newton memory accelerates the tail or at least never hurts") {
  const MacGrid g(12, 12, 1.0, 1.0);
  const ControlProblem prob = recoverable_problem(g, 1e-2, 47);
  OptimizeOptions plain;
  plain.max_iter = 10;
  plain.lbfgs_memory = 0;
  OptimizeOptions accel = plain;
  accel.lbfgs_memory = 8;
  const double J_plain = optimize(StaggeredField(g), prob, plain).trace.records.back().J;
  const double J_accel = optimize(StaggeredField(g), prob, accel).trace.records.back().J;
  CHECK(J_accel <= J_plain * (1.0 + 1e-9));
}

TEST_CASE("evaluate_J rejects non-finite controls and foreign grids") {
  const MacGrid g(8, 8, 1.0, 1.0);
  const ControlProblem prob = recoverable_problem(g, 1e-2, 3);
  StaggeredField nan_u(g);
  nan_u.v(1, 1) = std::nan("");
  CHECK_THROWS_AS(evaluate_J(nan_u, prob), ConfigError);
  const MacGrid g2(10, 8, 1.0, 1.0);
  CHECK_THROWS_AS(evaluate_J(StaggeredField(g2), prob), ShapeError);
}
