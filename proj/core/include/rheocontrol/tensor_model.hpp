#pragma once

#include <array>

#include "rheocontrol/sym_matrix.hpp"

namespace rheo {

// Pointwise exponent value together with the global admissibility bounds
// of the field it was sampled from.  Invariant: 1 < alpha0 <= alpha <= alpha_inf.
struct ExponentValue {
  double alpha;
  double alpha0;
  double alpha_inf;

  ExponentValue(double a, double a0, double ainf);
};

// Certified constants for the growth / ellipticity / coercivity /
// monotonicity bounds of the stress law on an exponent range
// [alpha0, alpha_inf].  canonical() derives them from the range via the
// exact case split at alpha == 2:
//
//   growth_factor       = max(3 - alpha0, alpha_inf - 1)
//   ellipticity_factor  = min(alpha0 - 1, 1)
//   monotonicity_factor = min(alpha0 - 1, 1)
//
// The struct is a plain aggregate so that verification campaigns can also
// run deliberately corrupted fixtures (inflated factors must be reported
// as violations).
struct TensorConstants {
  double alpha0 = 0;
  double alpha_inf = 0;
  double growth_factor = 0;
  double ellipticity_factor = 0;
  double monotonicity_factor = 0;

  static TensorConstants canonical(double alpha0, double alpha_inf);
};

// Shear-dependent stress S(eta) = (1 + |eta|)^(alpha - 2) * eta on
// symmetric n x n matrices.  alpha < 2 is shear thinning, alpha == 2 is
// Newtonian, alpha > 2 is shear thickening.
SymMatrix stress(const SymMatrix& eta, double alpha);

// Scalar potential whose gradient with respect to eta is stress(eta, alpha);
// equals the integral of r (1 + r)^(alpha - 2) dr from 0 to |eta|, so
// potential(0, alpha) == 0.  Evaluated by a closed form away from the
// origin and by its power series near it (the closed form is a difference
// of O(1) terms and would lose all digits for small |eta|).
double potential(const SymMatrix& eta, double alpha);

// Derivative of the stress law, d S_kl / d eta_ij, treating the n^2 matrix
// entries as independent coordinates:
//
//   (alpha - 2)(1 + |eta|)^(alpha - 3) (eta_ij / |eta|) eta_kl
//   + (1 + |eta|)^(alpha - 2) delta_ik delta_jl
//
// with the first term defined as 0 at eta == 0 (its limit along every
// direction).  apply() contracts over (i,j) and yields the directional
// derivative of stress along a symmetric perturbation.
class StressJacobian {
public:
  explicit StressJacobian(int dim);

  int dim() const { return dim_; }

  double operator()(int k, int l, int i, int j) const {
    return a_[static_cast<std::size_t>(((k * dim_ + l) * dim_ + i) * dim_ + j)];
  }

  void set(int k, int l, int i, int j, double v) {
    a_[static_cast<std::size_t>(((k * dim_ + l) * dim_ + i) * dim_ + j)] = v;
  }

  // S'(eta)[zeta]: directional derivative along zeta (zeta symmetric).
  SymMatrix apply(const SymMatrix& zeta) const;

private:
  int dim_;
  std::array<double, 81> a_;
};

StressJacobian stress_jacobian(const SymMatrix& eta, double alpha);

// Margins of the certified bounds.  All four return
// (guaranteed side) - (bounded side), so a correct implementation makes
// them nonnegative up to roundoff for canonical constants.  When given,
// *scale receives the magnitude of the bounded side, the natural yardstick
// for a relative roundoff tolerance.

// Growth bound on the stress derivative: margin =
//   min over (k,l,i,j) of growth_factor * (1+|eta|)^(alpha-2) - |dS_kl/deta_ij|.
double growth_margin(const SymMatrix& eta, const ExponentValue& alpha,
                     const TensorConstants& c, double* scale = nullptr);

// Ellipticity of the stress derivative: margin =
//   S'(eta)[zeta] : zeta - ellipticity_factor * (1+|eta|)^(alpha-2) * |zeta|^2.
double ellipticity_margin(const SymMatrix& eta, const SymMatrix& zeta,
                          const ExponentValue& alpha, const TensorConstants& c,
                          double* scale = nullptr);

// Coercivity of the stress itself: margin = S(eta):eta - bound, where
//   bound = monotonicity_factor * (1+|eta|)^(alpha-2) * |eta|^2   if alpha < 2
//   bound = |eta|^2                                               if alpha >= 2
// (alpha == 2 is routed through the second branch, where the bound is exact).
double coercivity_margin(const SymMatrix& eta, const ExponentValue& alpha,
                         const TensorConstants& c, double* scale = nullptr);

// Strong monotonicity of the stress: margin =
//   (S(eta) - S(zeta)) : (eta - zeta) - bound, where
//   bound = monotonicity_factor * (1+|eta|+|zeta|)^(alpha-2) * |eta-zeta|^2  if alpha < 2
//   bound = |eta - zeta|^2                                                  if alpha >= 2.
double monotonicity_margin(const SymMatrix& eta, const SymMatrix& zeta,
                           const ExponentValue& alpha, const TensorConstants& c,
                           double* scale = nullptr);

// Continuity of the stress law holds as an exact identity,
// |S(eta)| == (1+|eta|)^(alpha-2) |eta|; returns the absolute gap between
// the two sides (zero up to roundoff).
double continuity_gap(const SymMatrix& eta, const ExponentValue& alpha,
                      double* scale = nullptr);

}  // namespace rheo
