#pragma once

#include <string>
#include <vector>

#include "rheocontrol/exponent_field.hpp"
#include "rheocontrol/fields.hpp"
#include "rheocontrol/grid.hpp"

namespace rheo {

enum class ManufacturedKind { Zero, Newtonian, ShearThinning, VariableThin, VariableThick };

// Closed-form flow/forcing pairs on the unit square, built from the quartic
// stream function psi = 32 x1^2 (1-x1)^2 x2^2 (1-x2)^2:
//   y* = (d psi / d x2, -d psi / d x1)   (divergence-free, zero trace),
//   p* = cos(pi x1) cos(pi x2)           (zero mean),
//   u* = -div S(D y*) + (y* . grad) y* + grad p*.
// The forcing formulas are generated offline by computer algebra
// (tools/codegen/forcing_gen.py) and spot-checked in the test suite against
// an independent high-precision numerical-differentiation oracle
// (tools/codegen/forcing_oracle.py).
class ManufacturedCase {
public:
  static ManufacturedCase preset(ManufacturedKind kind);
  static ManufacturedCase preset(const std::string& name);
  static const std::vector<std::string>& preset_names();

  ManufacturedKind kind() const { return kind_; }
  const std::string& name() const { return name_; }

  // The rheology exponent this case is built for (unit-square domain):
  //   newtonian: 2, shear_thinning: 1.5,
  //   variable_thin: 2 - 0.5 sin(pi x1), variable_thick: 2 + 0.5 sin(pi x1).
  ExponentField exponent() const;

  // Pointwise exact values.
  void velocity(double x1, double x2, double* v1, double* v2) const;
  double pressure(double x1, double x2) const;
  void forcing(double x1, double x2, double* f1, double* f2) const;

private:
  ManufacturedCase(ManufacturedKind kind, std::string name)
      : kind_(kind), name_(std::move(name)) {}

  ManufacturedKind kind_;
  std::string name_;
};

// Exact solution and forcing sampled onto a unit-square grid.
struct Manufactured {
  StaggeredField u_field;
  StaggeredField y_exact;
  PressureField p_exact;
};

Manufactured manufacture(const ManufacturedCase& c, const MacGrid& g);

}  // namespace rheo
