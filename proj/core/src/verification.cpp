#include "rheocontrol/verification.hpp"

#include <cmath>
#include <random>

#include "rheocontrol/errors.hpp"
#include "rheocontrol/operators.hpp"

namespace rheo {

namespace {

// Symmetric random matrix: symmetrized standard-normal entries rescaled to
// the requested Frobenius norm (zero matrix when the target is zero).
SymMatrix random_sym(std::mt19937_64& rng, int dim, double target_norm) {
  std::normal_distribution<double> gauss;
  double a[3][3];
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) a[i][j] = gauss(rng);
  SymMatrix m(dim);
  for (int i = 0; i < dim; ++i)
    for (int j = i; j < dim; ++j) m.set(i, j, 0.5 * (a[i][j] + a[j][i]));
  const double f = m.frobenius();
  if (!(target_norm > 0.0) || !(f > 0.0)) return SymMatrix(dim);
  return m.scaled(target_norm / f);
}

void consider(WorstSample* w, double margin, double scale, double alpha, int dim, double eta_norm,
              double zeta_norm, long index, double rel_tol) {
  if (margin < -rel_tol * scale) ++w->violations;
  if (margin < w->margin) {
    w->margin = margin;
    w->scale = scale;
    w->alpha = alpha;
    w->dim = dim;
    w->eta_norm = eta_norm;
    w->zeta_norm = zeta_norm;
    w->index = index;
  }
}

}  // namespace

CampaignResult inequality_campaign(const TensorConstants& c, long samples, std::uint64_t seed,
                                   double rel_tol) {
  if (samples < 1) throw ConfigError("inequality campaign: samples must be >= 1");
  if (!(c.alpha_inf >= c.alpha0)) throw ConfigError("inequality campaign: alpha range is empty");

  CampaignResult res;
  res.samples = samples;
  res.seed = seed;
  res.rel_tol = rel_tol;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  for (long s = 0; s < samples; ++s) {
    const int dim = (s % 2 == 0) ? 2 : 3;
    const double a = c.alpha0 + (c.alpha_inf - c.alpha0) * unif(rng);
    const double eta_norm = s == 0 ? 0.0 : std::pow(10.0, -6.0 + 12.0 * unif(rng));
    const double zeta_norm = s == 0 ? 0.0 : std::pow(10.0, -6.0 + 12.0 * unif(rng));
    const SymMatrix eta = random_sym(rng, dim, eta_norm);
    const SymMatrix zeta = random_sym(rng, dim, zeta_norm);
    const ExponentValue av(a, c.alpha0, c.alpha_inf);

    double scale = 0.0;
    double m = growth_margin(eta, av, c, &scale);
    consider(&res.growth, m, scale, a, dim, eta_norm, zeta_norm, s, rel_tol);

    m = ellipticity_margin(eta, zeta, av, c, &scale);
    consider(&res.ellipticity, m, scale, a, dim, eta_norm, zeta_norm, s, rel_tol);

    m = coercivity_margin(eta, av, c, &scale);
    consider(&res.coercivity, m, scale, a, dim, eta_norm, zeta_norm, s, rel_tol);

    m = monotonicity_margin(eta, zeta, av, c, &scale);
    consider(&res.monotonicity, m, scale, a, dim, eta_norm, zeta_norm, s, rel_tol);

    m = -continuity_gap(eta, av, &scale);
    consider(&res.continuity, m, scale, a, dim, eta_norm, zeta_norm, s, rel_tol);
  }
  return res;
}

JacobianCheckResult jacobian_fd_campaign(long samples, std::uint64_t seed) {
  if (samples < 1) throw ConfigError("jacobian campaign: samples must be >= 1");

  JacobianCheckResult res;
  res.samples = samples;
  res.seed = seed;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  for (long s = 0; s < samples; ++s) {
    const int dim = (s % 2 == 0) ? 2 : 3;
    const double a = 1.1 + 2.9 * unif(rng);
    const double eta_norm = std::pow(10.0, -3.0 + 6.0 * unif(rng));
    const SymMatrix eta = random_sym(rng, dim, eta_norm);
    const SymMatrix d = random_sym(rng, dim, 1.0);
    const double eps = 1e-6 * (1.0 + eta_norm);

    const SymMatrix an = stress_jacobian(eta, a).apply(d);
    const SymMatrix sp = stress(eta + d.scaled(eps), a);
    const SymMatrix sm = stress(eta - d.scaled(eps), a);
    const SymMatrix fd = (sp - sm).scaled(0.5 / eps);
    const double rel = (fd - an).frobenius() / std::max(an.frobenius(), 1e-300);
    if (rel > res.worst_jacobian_rel) {
      res.worst_jacobian_rel = rel;
      res.worst_alpha = a;
    }

    const double fdp = (potential(eta + d.scaled(eps), a) - potential(eta - d.scaled(eps), a)) /
                       (2.0 * eps);
    const double anp = stress(eta, a).contract(d);
    const double relp = std::abs(fdp - anp) / std::max(std::abs(anp), 1e-300);
    res.worst_potential_rel = std::max(res.worst_potential_rel, relp);
  }
  return res;
}

std::vector<ConvergenceRow> convergence_study(const ManufacturedCase& c,
                                              const std::vector<MacGrid>& grids,
                                              const SolverConfig& cfg) {
  if (grids.size() < 3)
    throw ConfigError("convergence study: need a chain of at least three grids");
  for (std::size_t k = 1; k < grids.size(); ++k) {
    const double ratio = grids[k - 1].h() / grids[k].h();
    if (std::abs(ratio - 2.0) > 0.01)
      throw ConfigError("convergence study: grids must halve h at every step");
  }

  const ExponentField field = c.exponent();
  std::vector<ConvergenceRow> rows;
  for (const MacGrid& g : grids) {
    const Manufactured m = manufacture(c, g);
    const StateSolution sol = solve_state(m.u_field, field, cfg);

    StaggeredField diff = sol.y;
    diff -= m.y_exact;
    ConvergenceRow row;
    row.n = g.nx();
    row.h = g.h();
    row.error_l2 = norm2(diff);
    row.error_h1 = norm2(sym_gradient(diff));
    if (!rows.empty()) {
      row.order_l2 = std::log2(rows.back().error_l2 / row.error_l2);
      row.order_h1 = std::log2(rows.back().error_h1 / row.error_h1);
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace rheo
