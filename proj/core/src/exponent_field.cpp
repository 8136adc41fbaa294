#include "rheocontrol/exponent_field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rheo {

namespace {

void require_bounds(double a0, double ainf) {
  if (!(a0 > 1.0))
    throw EvalError("exponent field: lower bound must satisfy alpha0 > 1, got " +
                    std::to_string(a0));
  if (!(ainf >= a0)) throw EvalError("exponent field: alpha0 must not exceed alpha_inf");
  if (!std::isfinite(ainf)) throw EvalError("exponent field: alpha_inf must be finite");
}

}  // namespace

ExponentField ExponentField::constant(double alpha, const Domain& dom) {
  require_bounds(alpha, alpha);
  ExponentField f(ExponentKind::Constant, alpha, alpha, dom);
  f.constant_ = alpha;
  return f;
}

ExponentField ExponentField::expression(const std::string& expr, double alpha0, double alpha_inf,
                                        const Domain& dom) {
  require_bounds(alpha0, alpha_inf);
  ExponentField f(ExponentKind::Expression, alpha0, alpha_inf, dom);
  f.expr_ = std::make_shared<const Expression>(Expression::parse(expr));
  return f;
}

ExponentField ExponentField::gridded(std::vector<double> samples, int m, int k, const Domain& dom) {
  if (m < 1 || k < 1) throw ConfigError("exponent field: sample grid needs at least 2x2 nodes");
  if (static_cast<int>(samples.size()) != (m + 1) * (k + 1))
    throw ConfigError("exponent field: expected " + std::to_string((m + 1) * (k + 1)) +
                      " samples, got " + std::to_string(samples.size()));
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (double s : samples) {
    if (!std::isfinite(s)) throw ConfigError("exponent field: non-finite sample value");
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  require_bounds(lo, hi);
  ExponentField f(ExponentKind::Grid, lo, hi, dom);
  f.samples_ = std::move(samples);
  f.m_ = m;
  f.k_ = k;
  return f;
}

double ExponentField::eval(double x1, double x2) const {
  if (!dom_.contains(x1, x2))
    throw EvalError("exponent field: point (" + std::to_string(x1) + ", " + std::to_string(x2) +
                    ") outside domain [0," + std::to_string(dom_.Lx) + "]x[0," +
                    std::to_string(dom_.Ly) + "]");
  double a;
  switch (kind_) {
    case ExponentKind::Constant: a = constant_; break;
    case ExponentKind::Expression: a = expr_->eval(x1, x2); break;
    case ExponentKind::Grid: {
      // Bilinear interpolation; values stay inside the sample hull, so no
      // clamping is ever needed on this path.
      const double sx = x1 / dom_.Lx * m_;
      const double sy = x2 / dom_.Ly * k_;
      const int i = std::min(static_cast<int>(sx), m_ - 1);
      const int j = std::min(static_cast<int>(sy), k_ - 1);
      const double tx = sx - i;
      const double ty = sy - j;
      const auto at = [&](int a_, int b_) { return samples_[static_cast<std::size_t>(b_ * (m_ + 1) + a_)]; };
      a = (1 - tx) * (1 - ty) * at(i, j) + tx * (1 - ty) * at(i + 1, j) +
          (1 - tx) * ty * at(i, j + 1) + tx * ty * at(i + 1, j + 1);
      break;
    }
    default: throw EvalError("exponent field: unknown kind");
  }
  const double slack = 1e-9 * std::max(1.0, std::max(std::abs(alpha0_), std::abs(alpha_inf_)));
  if (a < alpha0_ - slack || a > alpha_inf_ + slack)
    throw EvalError("exponent field: value " + std::to_string(a) + " at (" + std::to_string(x1) +
                    ", " + std::to_string(x2) + ") violates declared bounds [" +
                    std::to_string(alpha0_) + ", " + std::to_string(alpha_inf_) + "]");
  return std::clamp(a, alpha0_, alpha_inf_);
}

double holder_seminorm(const ExponentField& field, double gamma, const std::vector<Point2>& points) {
  if (!(gamma > 0.0 && gamma <= 1.0))
    throw EvalError("holder_seminorm: gamma must lie in (0, 1], got " + std::to_string(gamma));
  if (points.size() < 2) throw EvalError("holder_seminorm: need at least two points");
  std::vector<double> vals(points.size());
  for (std::size_t n = 0; n < points.size(); ++n) vals[n] = field.eval(points[n][0], points[n][1]);
  double best = 0.0;
  for (std::size_t p = 0; p < points.size(); ++p)
    for (std::size_t q = p + 1; q < points.size(); ++q) {
      const double dx = points[p][0] - points[q][0];
      const double dy = points[p][1] - points[q][1];
      const double dist = std::sqrt(dx * dx + dy * dy);
      if (dist == 0.0)
        throw EvalError("holder_seminorm: coincident sample points at indices " +
                        std::to_string(p) + " and " + std::to_string(q));
      best = std::max(best, std::abs(vals[p] - vals[q]) / std::pow(dist, gamma));
    }
  return best;
}

std::vector<Point2> lattice_points(const Domain& dom, int m) {
  if (m < 1) throw EvalError("lattice_points: need m >= 1");
  std::vector<Point2> pts;
  pts.reserve(static_cast<std::size_t>((m + 1) * (m + 1)));
  for (int j = 0; j <= m; ++j)
    for (int i = 0; i <= m; ++i)
      pts.push_back({dom.Lx * i / static_cast<double>(m), dom.Ly * j / static_cast<double>(m)});
  return pts;
}

}  // namespace rheo
