#include "rheocontrol/tensor_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace rheo {

namespace {

void require_exponent_range(double alpha0, double alpha_inf) {
  if (!(alpha0 > 1.0))
    throw EvalError("exponent lower bound must satisfy alpha0 > 1, got " + std::to_string(alpha0));
  if (!(alpha_inf >= alpha0))
    throw EvalError("exponent bounds must satisfy alpha0 <= alpha_inf");
  if (!std::isfinite(alpha_inf)) throw EvalError("exponent upper bound must be finite");
}

// int_0^r s (1 + s)^(alpha - 2) ds.
double potential_scalar(double r, double alpha) {
  if (r < 0.25) {
    // Power series sum_k binom(alpha-2, k) r^(k+2) / (k+2); converges
    // geometrically for r < 1 and avoids the cancellation of the closed form.
    double coef = 1.0;  // binom(alpha-2, k), starting at k = 0
    double rpow = r * r;
    double acc = 0.0;
    for (int k = 0; k < 80; ++k) {
      const double term = coef * rpow / static_cast<double>(k + 2);
      acc += term;
      if (std::abs(term) <= 1e-18 * std::abs(acc)) break;
      coef *= (alpha - 2.0 - static_cast<double>(k)) / static_cast<double>(k + 1);
      rpow *= r;
    }
    return acc;
  }
  const double t = 1.0 + r;
  return (std::pow(t, alpha) - 1.0) / alpha - (std::pow(t, alpha - 1.0) - 1.0) / (alpha - 1.0);
}

}  // namespace

ExponentValue::ExponentValue(double a, double a0, double ainf) : alpha(a), alpha0(a0), alpha_inf(ainf) {
  require_exponent_range(a0, ainf);
  if (!(a >= a0 && a <= ainf))
    throw EvalError("exponent value " + std::to_string(a) + " outside declared bounds [" +
                    std::to_string(a0) + ", " + std::to_string(ainf) + "]");
}

TensorConstants TensorConstants::canonical(double alpha0, double alpha_inf) {
  require_exponent_range(alpha0, alpha_inf);
  TensorConstants c;
  c.alpha0 = alpha0;
  c.alpha_inf = alpha_inf;
  c.growth_factor = std::max(3.0 - alpha0, alpha_inf - 1.0);
  c.ellipticity_factor = std::min(alpha0 - 1.0, 1.0);
  c.monotonicity_factor = std::min(alpha0 - 1.0, 1.0);
  return c;
}

SymMatrix stress(const SymMatrix& eta, double alpha) {
  const double r = eta.frobenius();
  return eta.scaled(std::pow(1.0 + r, alpha - 2.0));
}

double potential(const SymMatrix& eta, double alpha) {
  return potential_scalar(eta.frobenius(), alpha);
}

StressJacobian::StressJacobian(int dim) : dim_(dim) {
  if (dim != 2 && dim != 3) throw ShapeError("StressJacobian: dim must be 2 or 3");
  a_.fill(0.0);
}

SymMatrix StressJacobian::apply(const SymMatrix& zeta) const {
  if (zeta.dim() != dim_) throw ShapeError("StressJacobian::apply: mismatched dimensions");
  SymMatrix out(dim_);
  for (int k = 0; k < dim_; ++k)
    for (int l = k; l < dim_; ++l) {
      double s = 0.0;
      for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j) s += (*this)(k, l, i, j) * zeta(i, j);
      out.set(k, l, s);
    }
  return out;
}

StressJacobian stress_jacobian(const SymMatrix& eta, double alpha) {
  const int n = eta.dim();
  const double r = eta.frobenius();
  const double b = std::pow(1.0 + r, alpha - 2.0);
  const double a = (r == 0.0) ? 0.0 : (alpha - 2.0) * std::pow(1.0 + r, alpha - 3.0) / r;
  StressJacobian J(n);
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double v = a * eta(i, j) * eta(k, l);
          if (i == k && j == l) v += b;
          J.set(k, l, i, j, v);
        }
  return J;
}

double growth_margin(const SymMatrix& eta, const ExponentValue& alpha, const TensorConstants& c,
                     double* scale) {
  const int n = eta.dim();
  const double bound = c.growth_factor * std::pow(1.0 + eta.frobenius(), alpha.alpha - 2.0);
  if (scale) *scale = std::abs(bound);
  const StressJacobian J = stress_jacobian(eta, alpha.alpha);
  double margin = std::numeric_limits<double>::infinity();
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) margin = std::min(margin, bound - std::abs(J(k, l, i, j)));
  return margin;
}

double ellipticity_margin(const SymMatrix& eta, const SymMatrix& zeta, const ExponentValue& alpha,
                          const TensorConstants& c, double* scale) {
  const StressJacobian J = stress_jacobian(eta, alpha.alpha);
  const double lhs = J.apply(zeta).contract(zeta);
  const double znorm = zeta.frobenius();
  const double bound =
      c.ellipticity_factor * std::pow(1.0 + eta.frobenius(), alpha.alpha - 2.0) * znorm * znorm;
  if (scale) *scale = std::abs(bound);
  return lhs - bound;
}

double coercivity_margin(const SymMatrix& eta, const ExponentValue& alpha, const TensorConstants& c,
                         double* scale) {
  const double lhs = stress(eta, alpha.alpha).contract(eta);
  const double r = eta.frobenius();
  const double bound = (alpha.alpha < 2.0)
                           ? c.monotonicity_factor * std::pow(1.0 + r, alpha.alpha - 2.0) * r * r
                           : r * r;
  if (scale) *scale = std::abs(bound);
  return lhs - bound;
}

double continuity_gap(const SymMatrix& eta, const ExponentValue& alpha, double* scale) {
  const double r = eta.frobenius();
  const double rhs = std::pow(1.0 + r, alpha.alpha - 2.0) * r;
  if (scale) *scale = std::abs(rhs);
  return std::abs(stress(eta, alpha.alpha).frobenius() - rhs);
}

double monotonicity_margin(const SymMatrix& eta, const SymMatrix& zeta, const ExponentValue& alpha,
                           const TensorConstants& c, double* scale) {
  const SymMatrix d = eta - zeta;
  const double lhs = (stress(eta, alpha.alpha) - stress(zeta, alpha.alpha)).contract(d);
  const double dn = d.frobenius();
  const double bound =
      (alpha.alpha < 2.0)
          ? c.monotonicity_factor *
                std::pow(1.0 + eta.frobenius() + zeta.frobenius(), alpha.alpha - 2.0) * dn * dn
          : dn * dn;
  if (scale) *scale = std::abs(bound);
  return lhs - bound;
}

}  // namespace rheo
