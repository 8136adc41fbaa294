#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <string>
#include <vector>

#include "rheocontrol/errors.hpp"
#include "rheocontrol/manufactured.hpp"
#include "rheocontrol/operators.hpp"
#include "rheocontrol/state_solver.hpp"
#include "rheocontrol/verification.hpp"
#include "support/testutil.hpp"

using namespace rheo;

namespace {

// Forcing values computed independently by high-precision numerical
// differentiation of the stream-function flow (tools/codegen/forcing_oracle.py,
// mpmath at 40 digits); frozen here to guard the generated closed forms.
struct ForcingRow {
  const char* name;
  double x1, x2, f1, f2;
};

const ForcingRow kForcingRows[] = {
    {"newtonian", 0.3, 0.7, -2.902623235082022027812785, -6.666656764917977972187215},
    {"newtonian", 0.13, 0.41, -0.6691989756545699612533711, -13.39721505646156745753812},
    {"newtonian", 0.5, 0.25, 6.77855853092081687649206, 0.421875},
    {"newtonian", 0.77, 0.77, -2.32545391688884273022558, 4.94456625591115726977442},
    {"newtonian", 0.9, 0.1, -1.814677239827628378633243, 0.06363723982762837863324312},
    {"shear_thinning", 0.3, 0.7, -0.7690758443145376280676065, -4.533109374150493572442036},
    {"shear_thinning", 0.13, 0.41, -0.6992574661797318517612643, -8.961227761615970073714565},
    {"shear_thinning", 0.5, 0.25, 4.89065168897313908499365, 0.421875},
    {"shear_thinning", 0.77, 0.77, -0.7744854450847230328965404, 3.39359778410703757244538},
    {"shear_thinning", 0.9, 0.1, -0.8309581054061623507208524, 1.047356374249094406545634},
    {"variable_thin", 0.3, 0.7, -1.58509989622753922982189, -4.857186609456553587981599},
    {"variable_thin", 0.13, 0.41, -0.2208662178226829898784501, -12.16132244820868867980296},
    {"variable_thin", 0.5, 0.25, 4.89065168897313908499365, 0.421875},
    {"variable_thin", 0.77, 0.77, -2.18326582281861758388468, 3.826998320269065143083292},
    {"variable_thin", 0.9, 0.1, -0.8509704273392441210973574, 0.4350218161897889751626909},
    {"variable_thick", 0.3, 0.7, -4.720032067954341904227323, -9.441420476793043395284952},
    {"variable_thick", 0.13, 0.41, -1.278023562206802382871258, -14.77113701604965548813666},
    {"variable_thick", 0.5, 0.25, 9.137892690875288613636956, 0.421875},
    {"variable_thick", 0.77, 0.77, -2.068536615234533828089296, 6.548343912635756065467912},
    {"variable_thick", 0.9, 0.1, -2.986941939130173830007077, -0.3818804959541741270879334},
};

// The quartic stream function's velocity, written out by hand.
void exact_velocity(double x, double y, double* v1, double* v2) {
  *v1 = 64.0 * x * x * (1.0 - x) * (1.0 - x) * y * (1.0 - y) * (1.0 - 2.0 * y);
  *v2 = -64.0 * y * y * (1.0 - y) * (1.0 - y) * x * (1.0 - x) * (1.0 - 2.0 * x);
}

bool same_worst(const WorstSample& a, const WorstSample& b) {
  return a.margin == b.margin && a.scale == b.scale && a.alpha == b.alpha && a.dim == b.dim &&
         a.eta_norm == b.eta_norm && a.zeta_norm == b.zeta_norm && a.index == b.index &&
         a.violations == b.violations;
}

void check_worst_shape(const WorstSample& w, long samples) {
  CHECK(std::isfinite(w.margin));
  CHECK(w.scale >= 0.0);
  CHECK(w.index >= 0);
  CHECK(w.index < samples);
  CHECK((w.dim == 2 || w.dim == 3));
}

}  // namespace

TEST_CASE("manufactured presets round-trip by name") {
  const std::vector<std::string> want = {"zero", "newtonian", "shear_thinning", "variable_thin",
                                         "variable_thick"};
  CHECK(ManufacturedCase::preset_names() == want);
  for (const std::string& name : want) {
    const ManufacturedCase c = ManufacturedCase::preset(name);
    CHECK(c.name() == name);
    CHECK(ManufacturedCase::preset(c.kind()).name() == name);
  }
  CHECK_THROWS_AS(ManufacturedCase::preset("poiseuille"), ConfigError);
}

TEST_CASE("manufactured base flow matches its closed form") {
  const ManufacturedCase c = ManufacturedCase::preset(ManufacturedKind::Newtonian);
  const double pts[][2] = {{0.3, 0.7}, {0.13, 0.41}, {0.5, 0.25}, {0.77, 0.77}, {0.9, 0.1}};
  for (const double* p : pts) {
    double v1 = 0.0, v2 = 0.0, w1 = 0.0, w2 = 0.0;
    c.velocity(p[0], p[1], &v1, &v2);
    exact_velocity(p[0], p[1], &w1, &w2);
    CHECK(std::abs(v1 - w1) <= 1e-13 * std::max(1.0, std::abs(w1)));
    CHECK(std::abs(v2 - w2) <= 1e-13 * std::max(1.0, std::abs(w2)));
    CHECK(rel_diff(c.pressure(p[0], p[1]), std::cos(M_PI * p[0]) * std::cos(M_PI * p[1])) <=
          1e-14);
  }

  // No-slip trace on all four walls.
  const double walls[][2] = {{0.0, 0.37}, {1.0, 0.37}, {0.42, 0.0}, {0.42, 1.0}};
  for (const double* p : walls) {
    double v1 = 1.0, v2 = 1.0;
    c.velocity(p[0], p[1], &v1, &v2);
    CHECK(v1 == 0.0);
    CHECK(v2 == 0.0);
  }

  // Divergence-free by stream-function construction: central differences.
  const double eps = 1e-5;
  double a = 0.0, b = 0.0, d1 = 0.0, d2 = 0.0;
  c.velocity(0.3 + eps, 0.7, &a, &b);
  d1 = a;
  c.velocity(0.3 - eps, 0.7, &a, &b);
  d1 -= a;
  c.velocity(0.3, 0.7 + eps, &a, &b);
  d2 = b;
  c.velocity(0.3, 0.7 - eps, &a, &b);
  d2 -= b;
  CHECK(std::abs((d1 + d2) / (2.0 * eps)) <= 1e-8);
}

TEST_CASE("manufactured forcing matches the differentiation oracle") {
  for (const ForcingRow& r : kForcingRows) {
    CAPTURE(r.name);
    CAPTURE(r.x1);
    CAPTURE(r.x2);
    const ManufacturedCase c = ManufacturedCase::preset(std::string(r.name));
    double f1 = 0.0, f2 = 0.0;
    c.forcing(r.x1, r.x2, &f1, &f2);
    const double scale = std::max({1.0, std::abs(r.f1), std::abs(r.f2)});
    CHECK(std::abs(f1 - r.f1) <= 1e-13 * scale);
    CHECK(std::abs(f2 - r.f2) <= 1e-13 * scale);
  }
}

TEST_CASE("zero case is identically zero") {
  const ManufacturedCase c = ManufacturedCase::preset(ManufacturedKind::Zero);
  CHECK(c.name() == "zero");
  const double pts[][2] = {{0.1, 0.9}, {0.5, 0.5}, {0.77, 0.13}};
  for (const double* p : pts) {
    double v1 = 1.0, v2 = 1.0, f1 = 1.0, f2 = 1.0;
    c.velocity(p[0], p[1], &v1, &v2);
    c.forcing(p[0], p[1], &f1, &f2);
    CHECK(v1 == 0.0);
    CHECK(v2 == 0.0);
    CHECK(f1 == 0.0);
    CHECK(f2 == 0.0);
    CHECK(c.pressure(p[0], p[1]) == 0.0);
  }
  CHECK(c.exponent().eval(0.3, 0.6) == 2.0);
}

TEST_CASE("case exponents expose the advertised rheology") {
  CHECK(ManufacturedCase::preset("newtonian").exponent().eval(0.21, 0.83) == 2.0);
  CHECK(ManufacturedCase::preset("shear_thinning").exponent().eval(0.21, 0.83) == 1.5);

  const ExponentField thin = ManufacturedCase::preset("variable_thin").exponent();
  CHECK(thin.alpha0() == 1.5);
  CHECK(thin.alpha_inf() == 2.0);
  CHECK(rel_diff(thin.eval(0.5, 0.3), 1.5) <= 1e-15);
  CHECK(rel_diff(thin.eval(0.0, 0.3), 2.0) <= 1e-15);

  const ExponentField thick = ManufacturedCase::preset("variable_thick").exponent();
  CHECK(thick.alpha0() == 2.0);
  CHECK(thick.alpha_inf() == 2.5);
  CHECK(rel_diff(thick.eval(0.5, 0.9), 2.5) <= 1e-15);
}

TEST_CASE("manufacture samples the exact fields onto the grid") {
  const MacGrid g(8, 8, 1.0, 1.0);
  const ManufacturedCase c = ManufacturedCase::preset(ManufacturedKind::ShearThinning);
  const Manufactured m = manufacture(c, g);

  double a = 0.0, b = 0.0;
  c.forcing(g.ux(3), g.uy(5), &a, &b);
  CHECK(m.u_field.u(3, 5) == a);
  c.forcing(g.vx(2), g.vy(6), &a, &b);
  CHECK(m.u_field.v(2, 6) == b);
  c.velocity(g.ux(4), g.uy(1), &a, &b);
  CHECK(m.y_exact.u(4, 1) == a);
  c.velocity(g.vx(7), g.vy(3), &a, &b);
  CHECK(m.y_exact.v(7, 3) == b);
  CHECK(m.p_exact.at(2, 2) == c.pressure(g.cx(2), g.cy(2)));

  // Wall-collocated samples vanish with the flow's no-slip trace.
  for (int j = 0; j < g.ny(); ++j) {
    CHECK(m.y_exact.u(0, j) == 0.0);
    CHECK(m.y_exact.u(g.nx(), j) == 0.0);
  }

  CHECK_THROWS_AS(manufacture(c, MacGrid(8, 4, 2.0, 1.0)), ConfigError);
}

TEST_CASE("inequality campaign certifies the canonical constants") {
  const TensorConstants c = TensorConstants::canonical(1.1, 4.0);
  const CampaignResult res = inequality_campaign(c, 2000, 42);
  CHECK(res.passed());
  CHECK(res.samples == 2000);
  CHECK(res.seed == 42);
  CHECK(res.rel_tol == 1e-12);
  for (const WorstSample* w :
       {&res.growth, &res.ellipticity, &res.coercivity, &res.monotonicity, &res.continuity}) {
    CHECK(w->violations == 0);
    check_worst_shape(*w, 2000);
    CHECK(w->alpha >= 1.1);
    CHECK(w->alpha <= 4.0);
  }
}

TEST_CASE("inequality campaign is deterministic in the seed") {
  const TensorConstants c = TensorConstants::canonical(1.2, 3.0);
  const CampaignResult a = inequality_campaign(c, 500, 11);
  const CampaignResult b = inequality_campaign(c, 500, 11);
  CHECK(same_worst(a.growth, b.growth));
  CHECK(same_worst(a.ellipticity, b.ellipticity));
  CHECK(same_worst(a.coercivity, b.coercivity));
  CHECK(same_worst(a.monotonicity, b.monotonicity));
  CHECK(same_worst(a.continuity, b.continuity));

  const CampaignResult d = inequality_campaign(c, 500, 12);
  CHECK(a.growth.margin != d.growth.margin);
}

TEST_CASE("first campaign draw is the origin pair") {
  const TensorConstants c = TensorConstants::canonical(1.1, 4.0);
  const CampaignResult res = inequality_campaign(c, 1, 9);
  CHECK(res.passed());
  for (const WorstSample* w :
       {&res.growth, &res.ellipticity, &res.coercivity, &res.monotonicity, &res.continuity}) {
    CHECK(w->index == 0);
    CHECK(w->eta_norm == 0.0);
    CHECK(w->zeta_norm == 0.0);
  }
  // At the origin the stress jacobian is the identity, so the growth margin
  // is exactly growth_factor - 1.
  CHECK(rel_diff(res.growth.margin, c.growth_factor - 1.0) <= 1e-15);
  CHECK(res.coercivity.margin == 0.0);
  CHECK(res.monotonicity.margin == 0.0);
  CHECK(res.continuity.margin == 0.0);
}

TEST_CASE("campaign counts violations for corrupted constants") {
  const TensorConstants good = TensorConstants::canonical(1.1, 4.0);
  const long n = 800;

  TensorConstants bad = good;
  bad.growth_factor = 0.1;
  const CampaignResult g = inequality_campaign(bad, n, 17);
  CHECK_FALSE(g.passed());
  CHECK(g.growth.violations > 0);
  CHECK(g.growth.margin < 0.0);
  CHECK(g.continuity.violations == 0);

  bad = good;
  bad.ellipticity_factor = 3.0;
  const CampaignResult e = inequality_campaign(bad, n, 17);
  CHECK_FALSE(e.passed());
  CHECK(e.ellipticity.violations > 0);
  CHECK(e.growth.violations == 0);

  bad = good;
  bad.monotonicity_factor = 3.0;
  const CampaignResult m = inequality_campaign(bad, n, 17);
  CHECK_FALSE(m.passed());
  CHECK(m.monotonicity.violations > 0);
  CHECK(m.coercivity.violations > 0);
}

TEST_CASE("campaign honours its pass tolerance") {
  TensorConstants bad = TensorConstants::canonical(1.1, 4.0);
  bad.growth_factor = 0.1;
  // With a huge relative tolerance nothing is counted, but the worst margin
  // still records the (negative) defect.
  const CampaignResult res = inequality_campaign(bad, 300, 17, 100.0);
  CHECK(res.growth.violations == 0);
  CHECK(res.growth.margin < 0.0);
  CHECK(res.rel_tol == 100.0);
}

TEST_CASE("campaign rejects bad arguments") {
  const TensorConstants c = TensorConstants::canonical(1.5, 2.5);
  CHECK_THROWS_AS(inequality_campaign(c, 0, 1), ConfigError);
  TensorConstants empty = c;
  empty.alpha_inf = 1.2;  // below alpha0
  CHECK_THROWS_AS(inequality_campaign(empty, 10, 1), ConfigError);
}

TEST_CASE("stress derivative survives a finite-difference audit") {
  const JacobianCheckResult res = jacobian_fd_campaign(200, 5);
  CHECK(res.passed());
  CHECK(res.samples == 200);
  CHECK(res.seed == 5);
  CHECK(res.worst_jacobian_rel > 0.0);
  CHECK(res.worst_potential_rel > 0.0);
  CHECK(res.worst_alpha >= 1.1);
  CHECK(res.worst_alpha <= 4.0);
  CHECK_FALSE(res.passed(1e-30));

  const JacobianCheckResult again = jacobian_fd_campaign(200, 5);
  CHECK(again.worst_jacobian_rel == res.worst_jacobian_rel);
  CHECK(again.worst_potential_rel == res.worst_potential_rel);
  CHECK(again.worst_alpha == res.worst_alpha);

  CHECK_THROWS_AS(jacobian_fd_campaign(0, 5), ConfigError);
}

TEST_CASE("convergence study validates its grid chain") {
  const ManufacturedCase c = ManufacturedCase::preset(ManufacturedKind::Zero);
  SolverConfig cfg;

  std::vector<MacGrid> two = {MacGrid(8, 8, 1.0, 1.0), MacGrid(16, 16, 1.0, 1.0)};
  CHECK_THROWS_AS(convergence_study(c, two, cfg), ConfigError);

  std::vector<MacGrid> skewed = {MacGrid(8, 8, 1.0, 1.0), MacGrid(12, 12, 1.0, 1.0),
                                 MacGrid(16, 16, 1.0, 1.0)};
  CHECK_THROWS_AS(convergence_study(c, skewed, cfg), ConfigError);

  // A halving chain off the unit square passes the chain check but is
  // rejected by the case sampler.
  std::vector<MacGrid> wide = {MacGrid(8, 4, 2.0, 1.0), MacGrid(16, 8, 2.0, 1.0),
                               MacGrid(32, 16, 2.0, 1.0)};
  CHECK_THROWS_AS(convergence_study(c, wide, cfg), ConfigError);
}

TEST_CASE("zero case study is exact on every level") {
  const ManufacturedCase c = ManufacturedCase::preset(ManufacturedKind::Zero);
  const std::vector<MacGrid> grids = {MacGrid(8, 8, 1.0, 1.0), MacGrid(16, 16, 1.0, 1.0),
                                      MacGrid(32, 32, 1.0, 1.0)};
  SolverConfig cfg;
  const std::vector<ConvergenceRow> rows = convergence_study(c, grids, cfg);
  REQUIRE(rows.size() == 3);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    CHECK(rows[k].n == 8 << k);
    CHECK(rows[k].h == 1.0 / (8 << k));
    CHECK(rows[k].error_l2 == 0.0);
    CHECK(rows[k].error_h1 == 0.0);
  }
  CHECK(std::isnan(rows[0].order_l2));
  CHECK(std::isnan(rows[0].order_h1));
}

TEST_CASE("newtonian study shows second-order velocities") {
  const ManufacturedCase c = ManufacturedCase::preset(ManufacturedKind::Newtonian);
  const std::vector<MacGrid> grids = {MacGrid(8, 8, 1.0, 1.0), MacGrid(16, 16, 1.0, 1.0),
                                      MacGrid(32, 32, 1.0, 1.0)};
  SolverConfig cfg;
  cfg.picard_tol = 1e-9;
  cfg.picard_max_iter = 80;
  const std::vector<ConvergenceRow> rows = convergence_study(c, grids, cfg);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].error_l2 > rows[1].error_l2);
  CHECK(rows[1].error_l2 > rows[2].error_l2);
  CHECK(rows[2].order_l2 > 1.6);
  CHECK(rows[2].order_l2 < 2.4);
  CHECK(rows[2].order_h1 > 1.5);
  CHECK(std::isnan(rows[0].order_l2));
}
