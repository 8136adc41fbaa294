#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "rheocontrol/manufactured.hpp"
#include "rheocontrol/state_solver.hpp"
#include "rheocontrol/tensor_model.hpp"

namespace rheo {

// Worst case seen for one bound family during a sampling campaign.  margin
// follows the tensor-model convention (guaranteed side minus bounded side,
// nonnegative when the bound holds); for the continuity identity, margin is
// minus the absolute gap, so the pass criterion is uniform across families:
//   margin >= -rel_tol * scale.
struct WorstSample {
  double margin = std::numeric_limits<double>::infinity();
  double scale = 0.0;      // magnitude of the bounded side at the arg-min
  double alpha = 0.0;
  int dim = 2;
  double eta_norm = 0.0;
  double zeta_norm = 0.0;
  long index = -1;         // sample index of the arg-min
  long violations = 0;     // samples with margin < -rel_tol * scale

  bool clean() const { return violations == 0; }
};

// Report of a randomized certification run over the stress-law bounds.
struct CampaignResult {
  long samples = 0;
  std::uint64_t seed = 0;
  double rel_tol = 1e-12;
  WorstSample growth;        // derivative growth bound
  WorstSample ellipticity;   // derivative ellipticity bound
  WorstSample coercivity;    // stress coercivity bound
  WorstSample monotonicity;  // strong monotonicity bound
  WorstSample continuity;    // |S(eta)| identity

  bool passed() const {
    return growth.clean() && ellipticity.clean() && coercivity.clean() &&
           monotonicity.clean() && continuity.clean();
  }
};

// Evaluates every bound family on `samples` seeded draws: dimension
// alternating between 2 and 3, alpha uniform in [c.alpha0, c.alpha_inf],
// eta/zeta random symmetric with Frobenius norms log-uniform in
// [1e-6, 1e6]; the first draw is forced to eta == zeta == 0.  Works for
// corrupted (non-canonical) constants too, in which case the report counts
// the violations instead of certifying.
CampaignResult inequality_campaign(const TensorConstants& c, long samples, std::uint64_t seed,
                                   double rel_tol = 1e-12);

// Finite-difference cross-check of the stress derivative and of the
// potential's gradient identity on random symmetric directions.
struct JacobianCheckResult {
  long samples = 0;
  std::uint64_t seed = 0;
  double worst_jacobian_rel = 0.0;   // |S'(eta)[d] - FD| relative
  double worst_potential_rel = 0.0;  // |S(eta):d - FD of potential| relative
  double worst_alpha = 0.0;          // alpha at the jacobian arg-max

  bool passed(double tol = 1e-6) const {
    return worst_jacobian_rel <= tol && worst_potential_rel <= tol;
  }
};

// alpha uniform in [1.1, 4], |eta| log-uniform in [1e-3, 1e3] (a range where
// central differences are well conditioned), step 1e-6 * (1 + |eta|).
JacobianCheckResult jacobian_fd_campaign(long samples, std::uint64_t seed);

// One refinement level of a manufactured-solution study.  Orders are
// log2(e_coarse / e_fine) against the previous row (NaN on the first).
struct ConvergenceRow {
  int n = 0;  // cells per side
  double h = 0.0;
  double error_l2 = 0.0;  // ||y_h - y*||_2
  double error_h1 = 0.0;  // ||D(y_h - y*)||_2
  double order_l2 = std::numeric_limits<double>::quiet_NaN();
  double order_h1 = std::numeric_limits<double>::quiet_NaN();
};

// Solves the case on each grid (a refinement chain of at least three
// unit-square grids) and reports errors against the sampled exact solution.
std::vector<ConvergenceRow> convergence_study(const ManufacturedCase& c,
                                              const std::vector<MacGrid>& grids,
                                              const SolverConfig& cfg);

}  // namespace rheo
