#include "rheocontrol/manufactured.hpp"

#include <cmath>

#include "rheocontrol/errors.hpp"

namespace {
#include "forcing_gen.inc"
}  // namespace

namespace rheo {

namespace {

const std::vector<std::string> kNames = {"zero", "newtonian", "shear_thinning", "variable_thin",
                                         "variable_thick"};

// Below this squared strain magnitude the variable-viscosity forcing
// formulas lose their conditioning (they differentiate |Dy|); the exact
// limit value is the Newtonian-form expression.
constexpr double kDegenerate = 1e-24;

}  // namespace

ManufacturedCase ManufacturedCase::preset(ManufacturedKind kind) {
  return ManufacturedCase(kind, kNames[static_cast<std::size_t>(kind)]);
}

ManufacturedCase ManufacturedCase::preset(const std::string& name) {
  for (std::size_t n = 0; n < kNames.size(); ++n)
    if (kNames[n] == name) return preset(static_cast<ManufacturedKind>(n));
  throw ConfigError("unknown manufactured case '" + name +
                    "' (try zero, newtonian, shear_thinning, variable_thin, variable_thick)");
}

const std::vector<std::string>& ManufacturedCase::preset_names() { return kNames; }

ExponentField ManufacturedCase::exponent() const {
  const Domain unit{1.0, 1.0};
  switch (kind_) {
    case ManufacturedKind::Zero:
    case ManufacturedKind::Newtonian:
      return ExponentField::constant(2.0, unit);
    case ManufacturedKind::ShearThinning:
      return ExponentField::constant(1.5, unit);
    case ManufacturedKind::VariableThin:
      return ExponentField::expression("2 - 0.5*sin(pi*x1)", 1.5, 2.0, unit);
    case ManufacturedKind::VariableThick:
      return ExponentField::expression("2 + 0.5*sin(pi*x1)", 2.0, 2.5, unit);
  }
  throw ConfigError("manufactured case: bad kind");
}

void ManufacturedCase::velocity(double x1, double x2, double* v1, double* v2) const {
  if (kind_ == ManufacturedKind::Zero) {
    *v1 = 0.0;
    *v2 = 0.0;
    return;
  }
  double r[8];
  gen::base::eval(x1, x2, r);
  *v1 = r[0];
  *v2 = r[1];
}

double ManufacturedCase::pressure(double x1, double x2) const {
  if (kind_ == ManufacturedKind::Zero) return 0.0;
  double r[8];
  gen::base::eval(x1, x2, r);
  return r[2];
}

void ManufacturedCase::forcing(double x1, double x2, double* f1, double* f2) const {
  if (kind_ == ManufacturedKind::Zero) {
    *f1 = 0.0;
    *f2 = 0.0;
    return;
  }
  double r[3];
  switch (kind_) {
    case ManufacturedKind::Newtonian:
      gen::newtonian::force(x1, x2, r);
      break;
    case ManufacturedKind::ShearThinning:
      gen::shear_thinning::force(x1, x2, r);
      break;
    case ManufacturedKind::VariableThin:
      gen::varexp::force(x1, x2, r);
      break;
    case ManufacturedKind::VariableThick:
      gen::varexp_thick::force(x1, x2, r);
      break;
    default:
      throw ConfigError("manufactured case: bad kind");
  }
  if (r[2] < kDegenerate) {
    double b[8];
    gen::base::eval(x1, x2, b);
    *f1 = b[6];
    *f2 = b[7];
    return;
  }
  *f1 = r[0];
  *f2 = r[1];
}

Manufactured manufacture(const ManufacturedCase& c, const MacGrid& g) {
  if (g.Lx() != 1.0 || g.Ly() != 1.0)
    throw ConfigError("manufactured cases are defined on the unit square only");

  Manufactured m{StaggeredField(g), StaggeredField(g), PressureField(g)};
  double a = 0.0, b = 0.0;
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i <= g.nx(); ++i) {
      c.forcing(g.ux(i), g.uy(j), &a, &b);
      m.u_field.u(i, j) = a;
      c.velocity(g.ux(i), g.uy(j), &a, &b);
      m.y_exact.u(i, j) = a;
    }
  for (int j = 0; j <= g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      c.forcing(g.vx(i), g.vy(j), &a, &b);
      m.u_field.v(i, j) = b;
      c.velocity(g.vx(i), g.vy(j), &a, &b);
      m.y_exact.v(i, j) = b;
    }
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) m.p_exact.at(i, j) = c.pressure(g.cx(i), g.cy(j));
  return m;
}

}  // namespace rheo
