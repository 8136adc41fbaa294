#include "rheocontrol/dispatch.hpp"

#include <filesystem>
#include <fstream>

#include "json.hpp"

#include "rheocontrol/control_optimizer.hpp"
#include "rheocontrol/errors.hpp"
#include "rheocontrol/field_io.hpp"
#include "rheocontrol/manufactured.hpp"
#include "rheocontrol/operators.hpp"
#include "rheocontrol/poincare_korn.hpp"
#include "rheocontrol/verification.hpp"

namespace rheo {

namespace {

using Json = nlohmann::ordered_json;

std::string error_kind(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return "config";
  if (dynamic_cast<const EvalError*>(&e)) return "eval";
  if (dynamic_cast<const ShapeError*>(&e)) return "shape";
  if (dynamic_cast<const LinearSolveError*>(&e)) return "linear_solve";
  if (dynamic_cast<const PicardDivergenceError*>(&e)) return "no_convergence";
  if (dynamic_cast<const LineSearchError*>(&e)) return "line_search";
  if (dynamic_cast<const IoError*>(&e)) return "io";
  if (dynamic_cast<const InvariantViolation*>(&e)) return "invariant";
  return "internal";
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("dispatch: cannot write '" + path + "'");
  out << text;
  if (!out) throw IoError("dispatch: write to '" + path + "' failed");
}

void write_report(const std::string& dir, const std::string& name, const Json& j) {
  write_text(dir + "/" + name, j.dump(2) + "\n");
}

void export_solution_fields(const RunConfig& cfg, const std::string& dir,
                            const StaggeredField& y, const PressureField& p,
                            const std::string& stem) {
  if (!cfg.output.write_fields) return;
  const bool csv = cfg.output.format == "csv" || cfg.output.format == "both";
  const bool vtk = cfg.output.format == "vtk" || cfg.output.format == "both";
  if (csv) {
    export_velocity_csv(y, dir + "/" + stem + "_u.csv", dir + "/" + stem + "_v.csv");
    export_pressure_csv(p, dir + "/" + stem + "_pressure.csv");
  }
  if (vtk) {
    export_velocity_vtk(y, dir + "/" + stem + ".vtk", "velocity");
    export_pressure_vtk(p, dir + "/" + stem + "_pressure.vtk", "pressure");
  }
}

Json report_head(const char* command, const DispatchOptions& opt) {
  Json j;
  j["command"] = command;
  j["seed"] = opt.seed;
  j["threads"] = opt.threads;
  return j;
}

Json solution_block(const StateSolution& sol) {
  Json j;
  j["iterations"] = sol.iterations;
  j["relative_residual"] = sol.residual_norm;
  j["step_norm"] = sol.step_norm;
  j["divergence_max"] = sol.divergence_max;
  j["velocity_norm"] = norm2(sol.y);
  j["pressure_norm"] = norm2(sol.p);
  j["strain_norm"] = sol.energy_lhs;
  j["strain_bound"] = sol.energy_rhs_bound;
  j["energy_identity_gap"] = sol.energy_identity_gap;
  j["gauge_multiplier"] = sol.gauge_multiplier;
  j["clamping_events"] = sol.clamping_events;
  j["used_under_relaxation"] = sol.used_under_relaxation;
  j["smallness_warning"] = sol.smallness_warning;
  return j;
}

int run_solve(const RunConfig& cfg, const DispatchOptions& opt, std::ostream& log) {
  const MacGrid g = cfg.make_grid();
  const ExponentField field = cfg.make_exponent();
  const SolverConfig scfg = cfg.make_solver();

  StaggeredField u(g);
  bool has_exact = false;
  StaggeredField y_exact(g);
  if (cfg.force.kind == "csv") {
    u = import_velocity_csv(g, cfg.force.u_path, cfg.force.v_path);
  } else if (cfg.force.kind != "zero") {
    const Manufactured m = manufacture(ManufacturedCase::preset(cfg.force.kind), g);
    u = m.u_field;
    y_exact = m.y_exact;
    has_exact = true;
  }

  const StateSolution sol = solve_state(u, field, scfg);

  Json j = report_head("solve", opt);
  j["force"] = cfg.force.kind;
  j["solution"] = solution_block(sol);
  if (has_exact) {
    StaggeredField diff = sol.y;
    diff -= y_exact;
    j["manufactured"]["case"] = cfg.force.kind;
    j["manufactured"]["error_l2"] = norm2(diff);
    j["manufactured"]["error_h1"] = norm2(sym_gradient(diff));
  }
  export_solution_fields(cfg, opt.out_dir, sol.y, sol.p, "state");
  write_report(opt.out_dir, "solve_report.json", j);
  log << "solve: converged in " << sol.iterations << " iterations, relative residual "
      << format_full(sol.residual_norm) << "\n";
  return 0;
}

int run_optimize(const RunConfig& cfg, const DispatchOptions& opt, std::ostream& log) {
  const MacGrid g = cfg.make_grid();
  const ExponentField field = cfg.make_exponent();
  const SolverConfig scfg = cfg.make_solver();

  StaggeredField y_d(g);
  if (cfg.control.target == "recoverable") {
    const StaggeredField u_dagger = recoverable_control(g, opt.seed);
    y_d = solve_state(u_dagger, field, scfg).y;
  } else {
    y_d = manufacture(ManufacturedCase::preset(cfg.control.target_case), g).y_exact;
  }

  const ControlProblem prob(y_d, cfg.control.reg_nu, field, scfg);
  OptimizeOptions oo;
  oo.max_iter = cfg.control.max_iter;
  oo.grad_tol = cfg.control.grad_tol;
  oo.lbfgs_memory = cfg.control.lbfgs_memory;

  const StaggeredField u0(g);
  const OptimizeResult res = optimize(u0, prob, oo);

  // Tracking part of the objective at each iterate, via J - (nu/2)||u||^2.
  const auto tracking = [&](const TraceRecord& r) {
    return r.J - 0.5 * cfg.control.reg_nu * r.u_norm * r.u_norm;
  };
  const TraceRecord& first = res.trace.records.front();
  const TraceRecord& last = res.trace.records.back();
  bool monotone = true;
  for (std::size_t k = 1; k < res.trace.records.size(); ++k)
    monotone = monotone && res.trace.records[k].J <= res.trace.records[k - 1].J;

  std::string csv = "k,J,u_norm,grad_norm,step\n";
  for (const TraceRecord& r : res.trace.records)
    csv += std::to_string(r.k) + "," + format_full(r.J) + "," + format_full(r.u_norm) + "," +
           format_full(r.grad_norm) + "," + format_full(r.step) + "\n";
  write_text(opt.out_dir + "/trace.csv", csv);

  Json j = report_head("optimize", opt);
  j["target"] = cfg.control.target;
  j["reg_nu"] = cfg.control.reg_nu;
  j["iterations"] = last.k;
  j["status"] = res.trace.status == OptimizeStatus::GradientConverged ? "gradient_converged"
                                                                      : "max_iterations";
  j["objective_initial"] = first.J;
  j["objective_final"] = last.J;
  j["objective_monotone"] = monotone;
  j["gradient_norm_final"] = last.grad_norm;
  j["control_norm_final"] = last.u_norm;
  j["tracking_initial"] = tracking(first);
  j["tracking_final"] = tracking(last);
  j["tracking_reduction"] =
      tracking(first) > 0.0 ? 1.0 - tracking(last) / tracking(first) : 0.0;
  j["state_solves"] = res.trace.state_solves;
  j["solution"] = solution_block(res.solution);

  export_solution_fields(cfg, opt.out_dir, res.solution.y, res.solution.p, "state");
  if (cfg.output.write_fields &&
      (cfg.output.format == "csv" || cfg.output.format == "both"))
    export_velocity_csv(res.u, opt.out_dir + "/control_u.csv", opt.out_dir + "/control_v.csv");
  write_report(opt.out_dir, "optimize_report.json", j);
  log << "optimize: " << j["status"].get<std::string>() << " after " << last.k
      << " iterations, objective " << format_full(last.J) << "\n";
  return 0;
}

Json worst_block(const WorstSample& w) {
  Json j;
  j["margin"] = w.margin;
  j["scale"] = w.scale;
  j["violations"] = w.violations;
  j["alpha"] = w.alpha;
  j["dim"] = w.dim;
  j["eta_norm"] = w.eta_norm;
  j["zeta_norm"] = w.zeta_norm;
  j["sample_index"] = w.index;
  return j;
}

int run_tensor_campaigns(const RunConfig& cfg, const DispatchOptions& opt, std::ostream& log,
                         long samples, long jacobian_samples, const char* command,
                         const std::string& report_name) {
  const TensorConstants c = TensorConstants::canonical(cfg.verify.alpha0, cfg.verify.alpha_inf);
  const CampaignResult camp = inequality_campaign(c, samples, opt.seed);
  const JacobianCheckResult jac = jacobian_fd_campaign(jacobian_samples, opt.seed);
  const double jac_tol = 1e-6;
  const bool passed = camp.passed() && jac.passed(jac_tol);

  Json j = report_head(command, opt);
  j["constants"]["alpha0"] = c.alpha0;
  j["constants"]["alpha_inf"] = c.alpha_inf;
  j["constants"]["growth_factor"] = c.growth_factor;
  j["constants"]["ellipticity_factor"] = c.ellipticity_factor;
  j["constants"]["monotonicity_factor"] = c.monotonicity_factor;
  j["samples"] = camp.samples;
  j["rel_tol"] = camp.rel_tol;
  j["families"]["growth"] = worst_block(camp.growth);
  j["families"]["ellipticity"] = worst_block(camp.ellipticity);
  j["families"]["coercivity"] = worst_block(camp.coercivity);
  j["families"]["monotonicity"] = worst_block(camp.monotonicity);
  j["families"]["continuity"] = worst_block(camp.continuity);
  j["jacobian"]["samples"] = jac.samples;
  j["jacobian"]["worst_relative_error"] = jac.worst_jacobian_rel;
  j["jacobian"]["worst_potential_error"] = jac.worst_potential_rel;
  j["jacobian"]["worst_alpha"] = jac.worst_alpha;
  j["jacobian"]["tolerance"] = jac_tol;
  j["passed"] = passed;
  write_report(opt.out_dir, report_name, j);
  log << command << ": " << (passed ? "all margins within tolerance" : "violations found")
      << "\n";
  return passed ? 0 : 1;
}

int run_verify_mms(const RunConfig& cfg, const DispatchOptions& opt, std::ostream& log) {
  const ManufacturedCase mc = ManufacturedCase::preset(cfg.verify.mms_case);
  std::vector<MacGrid> grids;
  for (int k = 0, n = cfg.verify.mms_base; k < cfg.verify.mms_levels; ++k, n *= 2)
    grids.emplace_back(n, n, cfg.domain.lx, cfg.domain.ly);
  const std::vector<ConvergenceRow> rows = convergence_study(mc, grids, cfg.make_solver());

  const bool zero_case = cfg.verify.mms_case == "zero";
  bool passed = true;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (zero_case)
      passed = passed && rows[k].error_l2 <= 1e-12 && rows[k].error_h1 <= 1e-12;
    else if (k > 0)
      passed = passed && rows[k].error_l2 < rows[k - 1].error_l2 &&
               rows[k].error_h1 < rows[k - 1].error_h1;
  }

  std::string csv = "n,h,error_l2,error_h1,order_l2,order_h1\n";
  Json table = Json::array();
  for (const ConvergenceRow& r : rows) {
    csv += std::to_string(r.n) + "," + format_full(r.h) + "," + format_full(r.error_l2) + "," +
           format_full(r.error_h1) + "," + format_full(r.order_l2) + "," +
           format_full(r.order_h1) + "\n";
    Json row;
    row["n"] = r.n;
    row["h"] = r.h;
    row["error_l2"] = r.error_l2;
    row["error_h1"] = r.error_h1;
    // JSON has no NaN literal; the first row carries no observed order.
    if (r.order_l2 == r.order_l2) row["order_l2"] = r.order_l2;
    if (r.order_h1 == r.order_h1) row["order_h1"] = r.order_h1;
    table.push_back(row);
  }
  write_text(opt.out_dir + "/convergence.csv", csv);

  Json j = report_head("verify mms", opt);
  j["case"] = cfg.verify.mms_case;
  j["levels"] = cfg.verify.mms_levels;
  j["rows"] = table;
  j["passed"] = passed;
  write_report(opt.out_dir, "verify_mms_report.json", j);
  log << "verify mms: " << (passed ? "errors decrease along the chain" : "chain check failed")
      << "\n";
  return passed ? 0 : 1;
}

int run_verify_constants(const RunConfig& cfg, const DispatchOptions& opt, std::ostream& log) {
  const MacGrid g = cfg.make_grid();
  const ExponentField field = cfg.make_exponent();
  const EmbeddingConstants emb = estimate_poincare_korn(g, 32, opt.seed);

  const std::vector<Point2> pts = lattice_points(field.domain(), 24);
  const double seminorm = holder_seminorm(field, field.holder_gamma, pts);

  bool passed = emb.c1 > 0.0 && emb.c2 > 0.0 && emb.c2 <= 1.0 + 1e-12;
  if (field.holder_budget) passed = passed && seminorm <= *field.holder_budget;

  Json j = report_head("verify constants", opt);
  j["grid"]["nx"] = g.nx();
  j["grid"]["ny"] = g.ny();
  j["embedding"]["c1"] = emb.c1;
  j["embedding"]["c2"] = emb.c2;
  j["embedding"]["trials"] = emb.trials;
  j["exponent"]["alpha0"] = field.alpha0();
  j["exponent"]["alpha_inf"] = field.alpha_inf();
  j["exponent"]["holder_gamma"] = field.holder_gamma;
  j["exponent"]["holder_seminorm"] = seminorm;
  if (field.holder_budget) j["exponent"]["holder_budget"] = *field.holder_budget;
  j["passed"] = passed;
  write_report(opt.out_dir, "verify_constants_report.json", j);
  log << "verify constants: c1 " << format_full(emb.c1) << ", c2 " << format_full(emb.c2)
      << "\n";
  return passed ? 0 : 1;
}

}  // namespace

Command parse_command(const std::string& name) {
  if (name == "solve") return Command::Solve;
  if (name == "optimize") return Command::Optimize;
  if (name == "verify tensor") return Command::VerifyTensor;
  if (name == "verify mms") return Command::VerifyMms;
  if (name == "verify constants") return Command::VerifyConstants;
  if (name == "tensor-check") return Command::TensorCheck;
  throw ConfigError("dispatch: unknown command '" + name + "'");
}

int dispatch(Command cmd, const RunConfig& cfg, const DispatchOptions& opt, std::ostream& log) {
  log << cfg.echo();
  try {
    std::filesystem::create_directories(opt.out_dir);
    switch (cmd) {
      case Command::Solve:
        return run_solve(cfg, opt, log);
      case Command::Optimize:
        return run_optimize(cfg, opt, log);
      case Command::VerifyTensor:
        return run_tensor_campaigns(cfg, opt, log, cfg.verify.samples,
                                    cfg.verify.jacobian_samples, "verify tensor",
                                    "verify_tensor_report.json");
      case Command::VerifyMms:
        return run_verify_mms(cfg, opt, log);
      case Command::VerifyConstants:
        return run_verify_constants(cfg, opt, log);
      case Command::TensorCheck:
        return run_tensor_campaigns(cfg, opt, log, std::min(cfg.verify.samples, 2000L),
                                    std::min(cfg.verify.jacobian_samples, 200L), "tensor-check",
                                    "tensor_check_report.json");
    }
    throw InvariantViolation("dispatch: unhandled command");
  } catch (const std::exception& e) {
    Json err;
    err["error"]["type"] = error_kind(e);
    err["error"]["message"] = e.what();
    const std::string text = err.dump(2) + "\n";
    try {
      write_text(opt.out_dir + "/error.json", text);
    } catch (...) {
      // the error report below still reaches the log
    }
    log << text;
    return 2;
  }
}

}  // namespace rheo
