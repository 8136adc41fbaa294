#pragma once

#include <cstdint>
#include <string>

#include "rheocontrol/control_optimizer.hpp"
#include "rheocontrol/exponent_field.hpp"
#include "rheocontrol/grid.hpp"
#include "rheocontrol/state_solver.hpp"

namespace rheo {

// Validated run configuration.  Parsed from a JSON document with a fixed
// schema: every block below is optional in the file, every field has the
// default shown here, and any key the schema does not name is rejected with
// an error naming it.  echo() serialises the effective configuration in a
// canonical form (fixed key order, shortest round-trip numbers), so two
// configs are equal exactly when their echoes are byte-identical.
struct RunConfig {
  struct DomainBlock {
    double lx = 1.0;
    double ly = 1.0;
  } domain;

  struct GridBlock {
    int nx = 32;
    int ny = 32;
  } grid;

  // kind "constant" uses value; kind "expression" uses formula with declared
  // bounds [alpha0, alpha_inf]; kind "gridded" loads nodal samples from a CSV
  // file (header i,j,value) with the declared bounds.
  struct ExponentBlock {
    std::string kind = "constant";
    double value = 2.0;
    std::string formula;
    double alpha0 = 1.5;
    double alpha_inf = 2.5;
    std::string path;
  } exponent;

  struct SolverBlock {
    double picard_tol = 1e-9;
    int picard_max_iter = 200;
    double linear_tol = 1e-11;
    double under_relaxation = 1.0;
    double smallness_q = 4.0;
    double smallness_threshold = 1.0;
    bool use_newton = false;
    int newton_burn_in = 2;
  } solver;

  // Forcing for plain `solve` runs: "zero", a manufactured preset name, or
  // "csv" loading u from u_path/v_path.
  struct ForceBlock {
    std::string kind = "zero";
    std::string u_path;
    std::string v_path;
  } force;

  // Control problem: the target is either a forward solve from a smooth
  // seeded control ("recoverable") or a manufactured-case velocity.
  struct ControlBlock {
    std::string target = "recoverable";
    std::string target_case = "newtonian";
    double reg_nu = 1e-2;
    int max_iter = 100;
    double grad_tol = 1e-8;
    int lbfgs_memory = 8;
  } control;

  struct VerifyBlock {
    long samples = 100000;
    long jacobian_samples = 1000;
    double alpha0 = 1.1;
    double alpha_inf = 4.0;
    std::string mms_case = "newtonian";
    int mms_base = 16;
    int mms_levels = 4;
  } verify;

  struct OutputBlock {
    std::string directory = "out";
    bool write_fields = true;
    std::string format = "csv";  // csv | vtk | both
  } output;

  std::uint64_t seed = 12345;

  // Canonical serialisation of the effective configuration (two-space
  // indent, trailing newline).
  std::string echo() const;

  // Range and cross-field validation; parse_config runs this, direct
  // builders of RunConfig should too.
  void validate() const;

  // Factories for the domain objects this configuration describes.
  MacGrid make_grid() const;
  ExponentField make_exponent() const;
  SolverConfig make_solver() const;
};

// Parse and validate a configuration document; unknown keys anywhere in the
// tree are errors.  parse_config reads a file, parse_config_text a string.
RunConfig parse_config(const std::string& path);
RunConfig parse_config_text(const std::string& text);

}  // namespace rheo
