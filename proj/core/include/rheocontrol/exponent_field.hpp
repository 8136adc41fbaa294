#pragma once

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rheocontrol/expression.hpp"
#include "rheocontrol/grid.hpp"

namespace rheo {

enum class ExponentKind { Constant, Expression, Grid };

// Spatially varying rheology exponent alpha(x) on a rectangular domain,
// with certified global bounds 1 < alpha0 <= alpha(x) <= alpha_inf.
// Three backings:
//   - constant value,
//   - whitelisted analytic expression in x1, x2 (see Expression),
//   - bilinear interpolation of nodal samples on a uniform grid.
//
// eval() is bounds-checked twice: the point must lie in the closed domain,
// and the value must stay inside [alpha0, alpha_inf].  Expression values
// are allowed to overshoot the declared bounds by a 1e-9 relative slack
// (to absorb roundoff of the analytic evaluation) and are clamped; larger
// excursions raise EvalError.
class ExponentField {
public:
  static ExponentField constant(double alpha, const Domain& dom);
  static ExponentField expression(const std::string& expr, double alpha0, double alpha_inf,
                                  const Domain& dom);
  // Nodal samples, row-major with i fastest: value(i,j) at
  // (i*Lx/m, j*Ly/k), i = 0..m, j = 0..k.
  static ExponentField gridded(std::vector<double> samples, int m, int k, const Domain& dom);

  double eval(double x1, double x2) const;

  ExponentKind kind() const { return kind_; }
  double alpha0() const { return alpha0_; }
  double alpha_inf() const { return alpha_inf_; }
  const Domain& domain() const { return dom_; }

  // Declared smoothness index in (0, 1] and optional ceiling for the
  // measured Hoelder seminorm (checked by diagnostics, not by eval).
  double holder_gamma = 1.0;
  std::optional<double> holder_budget;

private:
  ExponentField(ExponentKind kind, double a0, double ainf, const Domain& dom)
      : kind_(kind), alpha0_(a0), alpha_inf_(ainf), dom_(dom) {}

  ExponentKind kind_;
  double alpha0_;
  double alpha_inf_;
  Domain dom_;

  double constant_ = 0.0;
  std::shared_ptr<const Expression> expr_;
  std::vector<double> samples_;
  int m_ = 0, k_ = 0;
};

using Point2 = std::array<double, 2>;

// Largest difference quotient max_{p != q} |alpha(p) - alpha(q)| / |p - q|^gamma
// over all pairs from the given sample points.  gamma must lie in (0, 1];
// coincident points are rejected (the quotient would be infinite).
double holder_seminorm(const ExponentField& field, double gamma, const std::vector<Point2>& points);

// Uniform (m+1) x (m+1) point lattice over the closed domain, a convenient
// sample set for holder_seminorm.
std::vector<Point2> lattice_points(const Domain& dom, int m);

}  // namespace rheo
