#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "rheocontrol/tensor_model.hpp"
#include "support/testutil.hpp"

using namespace rheo;
using testutil::rel_diff;

// High-precision reference values (40-digit arithmetic, frozen).  Case A is
// a 2-d shear-thinning point, case B a 3-d shear-thickening one, case C the
// potential far in the large-strain tail and deep in its series branch.

TEST_CASE("stress and potential match the frozen references (2-d)") {
  const SymMatrix eta = SymMatrix::sym2(0.7, -0.3, 0.4);
  const double alpha = 1.7;
  CHECK(rel_diff(eta.frobenius(), 0.9486832980505137995996681) < 1e-15);
  const SymMatrix s = stress(eta, alpha);
  CHECK(rel_diff(s(0, 0), 0.5730277593755602658213306) < 1e-14);
  CHECK(rel_diff(s(0, 1), 0.3274444339288915804693318) < 1e-14);
  CHECK(s(0, 1) == s(1, 0));
  CHECK(rel_diff(potential(eta, alpha), 0.3900278146931235039043500) < 1e-14);

  const StressJacobian j = stress_jacobian(eta, alpha);
  const SymMatrix jd = j.apply(SymMatrix::sym2(0.2, 0.1, -0.5));
  CHECK(rel_diff(jd(0, 0), 0.1906892021253143438500794) < 1e-13);
  CHECK(rel_diff(jd(0, 1), -0.3938958366049038735207141) < 1e-13);
}

TEST_CASE("stress and potential match the frozen references (3-d)") {
  const SymMatrix eta = SymMatrix::sym3(1.1, -0.2, 0.35, 0.15, -0.6, 0.05);
  const double alpha = 3.2;
  CHECK(rel_diff(eta.frobenius(), 1.463728116830444710577098) < 1e-15);
  const SymMatrix s = stress(eta, alpha);
  CHECK(rel_diff(s(0, 0), 3.245667456470672184038440) < 1e-14);
  CHECK(rel_diff(s(0, 2), -1.770364067165821191293694) < 1e-14);
  CHECK(rel_diff(potential(eta, alpha), 2.434622385886499587743302) < 1e-14);
}

TEST_CASE("potential references at the extremes and across the branch cut") {
  // Large strain, strongly thinning exponent (closed-form branch).
  CHECK(rel_diff(potential(SymMatrix::sym2(1e4, 0.0, 0.0), 1.2),
                 52558.70651173217399309165) < 1e-13);
  // Tiny strain: the closed form would cancel to noise here, the series
  // branch must keep full accuracy.
  CHECK(rel_diff(potential(SymMatrix::sym2(1e-9, 0.0, 0.0), 1.7),
                 4.999999999000000000487884672975448e-19) < 1e-14);
  // Both sides of the internal branch switch agree with the reference.
  CHECK(rel_diff(potential(SymMatrix::sym2(0.24, 0.0, 0.0), 2.6),
                 0.03147324504824129269976107) < 1e-14);
  CHECK(rel_diff(potential(SymMatrix::sym2(0.26, 0.0, 0.0), 2.6),
                 0.03718990940876661592517842) < 1e-14);
}

TEST_CASE("newtonian exponent reduces stress to the identity map") {
  const SymMatrix eta = SymMatrix::sym2(0.37, -1.25, 0.82);
  const SymMatrix s = stress(eta, 2.0);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) CHECK(s(i, j) == eta(i, j));
  const double r = eta.frobenius();
  CHECK(rel_diff(potential(eta, 2.0), 0.5 * r * r) < 1e-14);
}

TEST_CASE("thickening unit diagonal has the closed-form stress value") {
  // |diag(1,1)| = sqrt(2), so the viscosity factor at alpha = 3 is 1+sqrt(2).
  const SymMatrix s = stress(SymMatrix::sym2(1.0, 1.0, 0.0), 3.0);
  CHECK(rel_diff(s(0, 0), 1.0 + std::sqrt(2.0)) < 1e-15);
  CHECK(rel_diff(s(1, 1), 1.0 + std::sqrt(2.0)) < 1e-15);
  CHECK(s(0, 1) == 0.0);
}

TEST_CASE("stress vanishes at zero strain and its jacobian is the identity there") {
  const SymMatrix zero(2);
  CHECK(stress(zero, 1.4).frobenius() == 0.0);
  CHECK(potential(zero, 1.4) == 0.0);
  const SymMatrix d = SymMatrix::sym2(0.3, -0.7, 0.45);
  const SymMatrix jd = stress_jacobian(zero, 1.4).apply(d);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) CHECK(jd(i, j) == doctest::Approx(d(i, j)).epsilon(1e-15));
}

TEST_CASE("canonical constants follow the exact case split at alpha == 2") {
  const TensorConstants lo = TensorConstants::canonical(1.5, 2.5);
  CHECK(lo.growth_factor == 1.5);
  CHECK(lo.ellipticity_factor == 0.5);
  CHECK(lo.monotonicity_factor == 0.5);

  const TensorConstants hi = TensorConstants::canonical(2.2, 3.0);
  CHECK(hi.growth_factor == 2.0);
  CHECK(hi.ellipticity_factor == 1.0);
  CHECK(hi.monotonicity_factor == 1.0);

  CHECK_THROWS_AS(TensorConstants::canonical(1.0, 2.0), EvalError);
  CHECK_THROWS_AS(TensorConstants::canonical(2.0, 1.5), EvalError);
  CHECK_THROWS_AS(ExponentValue(3.0, 1.5, 2.5), EvalError);
  CHECK_THROWS_AS(ExponentValue(1.2, 1.5, 2.5), EvalError);
}

namespace {

SymMatrix random_sym(std::mt19937_64& rng, int dim, double norm) {
  std::normal_distribution<double> g(0.0, 1.0);
  SymMatrix m(dim);
  for (int i = 0; i < dim; ++i)
    for (int j = i; j < dim; ++j) m.set(i, j, g(rng));
  const double f = m.frobenius();
  return f > 0.0 ? m.scaled(norm / f) : m;
}

}  // namespace

TEST_CASE("all margins stay nonnegative for canonical constants") {
  const TensorConstants c = TensorConstants::canonical(1.1, 4.0);
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> ua(1.1, 4.0);
  std::uniform_real_distribution<double> ulog(-6.0, 6.0);
  for (int s = 0; s < 500; ++s) {
    const int dim = (s % 2) ? 3 : 2;
    const ExponentValue a(ua(rng), c.alpha0, c.alpha_inf);
    const SymMatrix eta = random_sym(rng, dim, std::pow(10.0, ulog(rng)));
    const SymMatrix zeta = random_sym(rng, dim, std::pow(10.0, ulog(rng)));
    double scale = 0.0;
    CHECK(growth_margin(eta, a, c, &scale) >= -1e-12 * std::max(1.0, scale));
    CHECK(ellipticity_margin(eta, zeta, a, c, &scale) >= -1e-12 * std::max(1.0, scale));
    CHECK(coercivity_margin(eta, a, c, &scale) >= -1e-12 * std::max(1.0, scale));
    CHECK(monotonicity_margin(eta, zeta, a, c, &scale) >= -1e-12 * std::max(1.0, scale));
    CHECK(continuity_gap(eta, a, &scale) <= 1e-12 * std::max(1.0, scale));
  }
}

TEST_CASE("scale reports the magnitude of the bounded side") {
  const TensorConstants c = TensorConstants::canonical(1.5, 2.5);
  const ExponentValue a(1.7, 1.5, 2.5);
  const SymMatrix eta = SymMatrix::sym2(0.7, -0.3, 0.4);
  double scale = -1.0;
  growth_margin(eta, a, c, &scale);
  const double nu = std::pow(1.0 + eta.frobenius(), a.alpha - 2.0);
  CHECK(rel_diff(scale, c.growth_factor * nu) < 1e-15);
  coercivity_margin(eta, a, c, &scale);
  const double r = eta.frobenius();
  CHECK(rel_diff(scale, c.monotonicity_factor * nu * r * r) < 1e-15);
}

TEST_CASE("corrupted constants are caught as negative margins") {
  // The struct is a plain aggregate precisely so this fixture can exist:
  // factors deliberately too strong must produce violations.
  TensorConstants bad;
  bad.alpha0 = 1.5;
  bad.alpha_inf = 2.5;
  bad.growth_factor = 0.1;        // true factor is 1.5
  bad.ellipticity_factor = 3.0;   // true factor is 0.5
  bad.monotonicity_factor = 3.0;  // true factor is 0.5
  const ExponentValue a(1.6, 1.5, 2.5);
  const SymMatrix eta = SymMatrix::sym2(1.0, -0.4, 0.25);
  const SymMatrix zeta = SymMatrix::sym2(-0.2, 0.6, 0.1);
  CHECK(growth_margin(eta, a, bad) < 0.0);
  CHECK(ellipticity_margin(eta, zeta, a, bad) < 0.0);
  CHECK(coercivity_margin(eta, a, bad) < 0.0);
  CHECK(monotonicity_margin(eta, zeta, a, bad) < 0.0);
}

TEST_CASE("jacobian agrees with a central finite difference") {
  std::mt19937_64 rng(77);
  for (int s = 0; s < 50; ++s) {
    const int dim = (s % 2) ? 3 : 2;
    const SymMatrix eta = random_sym(rng, dim, 0.5 + 0.1 * s);
    const SymMatrix d = random_sym(rng, dim, 1.0);
    const double alpha = 1.3 + 0.05 * s;
    const double eps = 1e-6 * (1.0 + eta.frobenius());
    const SymMatrix fd =
        (stress(eta + d.scaled(eps), alpha) - stress(eta - d.scaled(eps), alpha)).scaled(0.5 / eps);
    const SymMatrix jd = stress_jacobian(eta, alpha).apply(d);
    CHECK((jd - fd).frobenius() <= 1e-7 * (1.0 + jd.frobenius()));
  }
}

TEST_CASE("potential is the antiderivative of the stress along rays") {
  // d/dt potential(t eta) = stress(t eta) : eta; check with a central
  // difference at several ray positions.
  const SymMatrix eta = SymMatrix::sym2(0.8, -0.5, 0.3);
  for (double alpha : {1.3, 2.0, 3.5}) {
    for (double t : {0.1, 0.7, 2.0}) {
      const double eps = 1e-6;
      const double fd = (potential(eta.scaled(t + eps), alpha) -
                         potential(eta.scaled(t - eps), alpha)) /
                        (2.0 * eps);
      const double exact = stress(eta.scaled(t), alpha).contract(eta);
      CHECK(rel_diff(fd, exact) < 1e-8);
    }
  }
}
