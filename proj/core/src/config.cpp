#include "rheocontrol/config.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "rheocontrol/errors.hpp"
#include "rheocontrol/field_io.hpp"
#include "rheocontrol/manufactured.hpp"

namespace rheo {

namespace {

using Json = nlohmann::ordered_json;

// Strict reader over one JSON object: typed getters mark keys as consumed,
// done() rejects anything left over, naming its dotted path.
class ObjectReader {
 public:
  ObjectReader(const Json& node, std::string path) : n_(node), path_(std::move(path)) {
    if (!n_.is_object())
      throw ConfigError("config: '" + (path_.empty() ? std::string("<root>") : path_) +
                        "' must be a JSON object");
  }

  bool has(const char* key) const { return n_.contains(key); }

  const Json& child(const char* key) {
    seen_.insert(key);
    return n_.at(key);
  }

  double num(const char* key, double def) {
    const Json* v = find(key);
    if (!v) return def;
    if (!v->is_number()) throw type_error(key, "a number");
    return v->get<double>();
  }

  long integer(const char* key, long def) {
    const Json* v = find(key);
    if (!v) return def;
    if (!v->is_number_integer() && !v->is_number_unsigned()) throw type_error(key, "an integer");
    return v->get<long>();
  }

  std::uint64_t uinteger(const char* key, std::uint64_t def) {
    const Json* v = find(key);
    if (!v) return def;
    if (!v->is_number_unsigned() && !(v->is_number_integer() && v->get<long long>() >= 0))
      throw type_error(key, "a nonnegative integer");
    return v->get<std::uint64_t>();
  }

  bool boolean(const char* key, bool def) {
    const Json* v = find(key);
    if (!v) return def;
    if (!v->is_boolean()) throw type_error(key, "a boolean");
    return v->get<bool>();
  }

  std::string str(const char* key, std::string def) {
    const Json* v = find(key);
    if (!v) return def;
    if (!v->is_string()) throw type_error(key, "a string");
    return v->get<std::string>();
  }

  void done() const {
    for (const auto& item : n_.items())
      if (!seen_.count(item.key()))
        throw ConfigError("config: unknown key '" + dotted(item.key()) + "'");
  }

 private:
  const Json* find(const char* key) {
    seen_.insert(key);
    auto it = n_.find(key);
    return it == n_.end() ? nullptr : &*it;
  }

  std::string dotted(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  ConfigError type_error(const char* key, const char* what) const {
    return ConfigError("config: '" + dotted(key) + "' must be " + what);
  }

  const Json& n_;
  std::string path_;
  std::set<std::string> seen_;
};

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError("config: " + message);
}

bool is_preset(const std::string& name) {
  const auto names = ManufacturedCase::preset_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

std::string preset_list() {
  std::string s;
  for (const auto& n : ManufacturedCase::preset_names()) {
    if (!s.empty()) s += ", ";
    s += n;
  }
  return s;
}

}  // namespace

void RunConfig::validate() const {
  require(domain.lx > 0.0 && domain.ly > 0.0, "domain.lx and domain.ly must be positive");
  require(grid.nx >= 2 && grid.ny >= 2, "grid.nx and grid.ny must be at least 2");

  require(exponent.kind == "constant" || exponent.kind == "expression" ||
              exponent.kind == "gridded",
          "exponent.kind must be one of constant, expression, gridded");
  if (exponent.kind == "constant") {
    require(exponent.value > 1.0,
            "exponent.value must be > 1: the stress law is defined only for exponents "
            "with a lower bound above 1");
  } else {
    require(exponent.alpha0 > 1.0,
            "exponent.alpha0 must be > 1: the stress law is defined only for exponents "
            "with a lower bound above 1");
    require(exponent.alpha_inf >= exponent.alpha0,
            "exponent.alpha_inf must be >= exponent.alpha0");
  }
  if (exponent.kind == "expression")
    require(!exponent.formula.empty(), "exponent.formula must be set for kind expression");
  if (exponent.kind == "gridded") {
    require(!exponent.path.empty(), "exponent.path must be set for kind gridded");
    require(std::filesystem::exists(exponent.path),
            "exponent.path '" + exponent.path + "' does not exist");
  }

  make_solver().validate();

  require(force.kind == "zero" || force.kind == "csv" || is_preset(force.kind),
          "force.kind must be zero, csv, or one of: " + preset_list());
  if (force.kind == "csv") {
    require(!force.u_path.empty() && !force.v_path.empty(),
            "force.u_path and force.v_path must be set for kind csv");
    require(std::filesystem::exists(force.u_path),
            "force.u_path '" + force.u_path + "' does not exist");
    require(std::filesystem::exists(force.v_path),
            "force.v_path '" + force.v_path + "' does not exist");
  }
  if (is_preset(force.kind))
    require(domain.lx == 1.0 && domain.ly == 1.0,
            "manufactured forcing requires the unit square domain");

  require(control.target == "recoverable" || control.target == "manufactured",
          "control.target must be recoverable or manufactured");
  require(is_preset(control.target_case),
          "control.target_case must be one of: " + preset_list());
  require(control.reg_nu > 0.0, "control.reg_nu must be positive");
  require(control.max_iter >= 1, "control.max_iter must be at least 1");
  require(control.grad_tol > 0.0, "control.grad_tol must be positive");
  require(control.lbfgs_memory >= 1, "control.lbfgs_memory must be at least 1");

  require(verify.samples >= 1, "verify.samples must be at least 1");
  require(verify.jacobian_samples >= 1, "verify.jacobian_samples must be at least 1");
  require(verify.alpha0 > 1.0,
          "verify.alpha0 must be > 1: the stress law is defined only for exponents "
          "with a lower bound above 1");
  require(verify.alpha_inf >= verify.alpha0, "verify.alpha_inf must be >= verify.alpha0");
  require(is_preset(verify.mms_case), "verify.mms_case must be one of: " + preset_list());
  require(verify.mms_base >= 4, "verify.mms_base must be at least 4");
  require(verify.mms_levels >= 3, "verify.mms_levels must be at least 3 (a refinement chain)");

  require(!output.directory.empty(), "output.directory must not be empty");
  require(output.format == "csv" || output.format == "vtk" || output.format == "both",
          "output.format must be csv, vtk, or both");
}

MacGrid RunConfig::make_grid() const { return MacGrid(grid.nx, grid.ny, domain.lx, domain.ly); }

ExponentField RunConfig::make_exponent() const {
  const Domain dom{domain.lx, domain.ly};
  if (exponent.kind == "constant") return ExponentField::constant(exponent.value, dom);
  if (exponent.kind == "expression")
    return ExponentField::expression(exponent.formula, exponent.alpha0, exponent.alpha_inf, dom);
  int ni = 0, nj = 0;
  std::vector<double> samples = read_indexed_csv(exponent.path, &ni, &nj);
  return ExponentField::gridded(std::move(samples), ni - 1, nj - 1, dom);
}

SolverConfig RunConfig::make_solver() const {
  SolverConfig cfg;
  cfg.picard_tol = solver.picard_tol;
  cfg.picard_max_iter = static_cast<int>(solver.picard_max_iter);
  cfg.linear_tol = solver.linear_tol;
  cfg.under_relaxation = solver.under_relaxation;
  cfg.smallness_q = solver.smallness_q;
  cfg.smallness_threshold = solver.smallness_threshold;
  cfg.use_newton = solver.use_newton;
  cfg.newton_burn_in = solver.newton_burn_in;
  return cfg;
}

std::string RunConfig::echo() const {
  Json j;
  j["domain"]["lx"] = domain.lx;
  j["domain"]["ly"] = domain.ly;
  j["grid"]["nx"] = grid.nx;
  j["grid"]["ny"] = grid.ny;
  j["exponent"]["kind"] = exponent.kind;
  j["exponent"]["value"] = exponent.value;
  j["exponent"]["formula"] = exponent.formula;
  j["exponent"]["alpha0"] = exponent.alpha0;
  j["exponent"]["alpha_inf"] = exponent.alpha_inf;
  j["exponent"]["path"] = exponent.path;
  j["solver"]["picard_tol"] = solver.picard_tol;
  j["solver"]["picard_max_iter"] = solver.picard_max_iter;
  j["solver"]["linear_tol"] = solver.linear_tol;
  j["solver"]["under_relaxation"] = solver.under_relaxation;
  j["solver"]["smallness_q"] = solver.smallness_q;
  j["solver"]["smallness_threshold"] = solver.smallness_threshold;
  j["solver"]["use_newton"] = solver.use_newton;
  j["solver"]["newton_burn_in"] = solver.newton_burn_in;
  j["force"]["kind"] = force.kind;
  j["force"]["u_path"] = force.u_path;
  j["force"]["v_path"] = force.v_path;
  j["control"]["target"] = control.target;
  j["control"]["target_case"] = control.target_case;
  j["control"]["reg_nu"] = control.reg_nu;
  j["control"]["max_iter"] = control.max_iter;
  j["control"]["grad_tol"] = control.grad_tol;
  j["control"]["lbfgs_memory"] = control.lbfgs_memory;
  j["verify"]["samples"] = verify.samples;
  j["verify"]["jacobian_samples"] = verify.jacobian_samples;
  j["verify"]["alpha0"] = verify.alpha0;
  j["verify"]["alpha_inf"] = verify.alpha_inf;
  j["verify"]["mms_case"] = verify.mms_case;
  j["verify"]["mms_base"] = verify.mms_base;
  j["verify"]["mms_levels"] = verify.mms_levels;
  j["output"]["directory"] = output.directory;
  j["output"]["write_fields"] = output.write_fields;
  j["output"]["format"] = output.format;
  j["seed"] = seed;
  return j.dump(2) + "\n";
}

RunConfig parse_config_text(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }

  RunConfig cfg;
  ObjectReader root(doc, "");

  if (root.has("domain")) {
    ObjectReader b(root.child("domain"), "domain");
    cfg.domain.lx = b.num("lx", cfg.domain.lx);
    cfg.domain.ly = b.num("ly", cfg.domain.ly);
    b.done();
  }
  if (root.has("grid")) {
    ObjectReader b(root.child("grid"), "grid");
    cfg.grid.nx = static_cast<int>(b.integer("nx", cfg.grid.nx));
    cfg.grid.ny = static_cast<int>(b.integer("ny", cfg.grid.ny));
    b.done();
  }
  if (root.has("exponent")) {
    ObjectReader b(root.child("exponent"), "exponent");
    cfg.exponent.kind = b.str("kind", cfg.exponent.kind);
    cfg.exponent.value = b.num("value", cfg.exponent.value);
    cfg.exponent.formula = b.str("formula", cfg.exponent.formula);
    cfg.exponent.alpha0 = b.num("alpha0", cfg.exponent.alpha0);
    cfg.exponent.alpha_inf = b.num("alpha_inf", cfg.exponent.alpha_inf);
    cfg.exponent.path = b.str("path", cfg.exponent.path);
    b.done();
  }
  if (root.has("solver")) {
    ObjectReader b(root.child("solver"), "solver");
    cfg.solver.picard_tol = b.num("picard_tol", cfg.solver.picard_tol);
    cfg.solver.picard_max_iter =
        static_cast<int>(b.integer("picard_max_iter", cfg.solver.picard_max_iter));
    cfg.solver.linear_tol = b.num("linear_tol", cfg.solver.linear_tol);
    cfg.solver.under_relaxation = b.num("under_relaxation", cfg.solver.under_relaxation);
    cfg.solver.smallness_q = b.num("smallness_q", cfg.solver.smallness_q);
    cfg.solver.smallness_threshold =
        b.num("smallness_threshold", cfg.solver.smallness_threshold);
    cfg.solver.use_newton = b.boolean("use_newton", cfg.solver.use_newton);
    cfg.solver.newton_burn_in =
        static_cast<int>(b.integer("newton_burn_in", cfg.solver.newton_burn_in));
    b.done();
  }
  if (root.has("force")) {
    ObjectReader b(root.child("force"), "force");
    cfg.force.kind = b.str("kind", cfg.force.kind);
    cfg.force.u_path = b.str("u_path", cfg.force.u_path);
    cfg.force.v_path = b.str("v_path", cfg.force.v_path);
    b.done();
  }
  if (root.has("control")) {
    ObjectReader b(root.child("control"), "control");
    cfg.control.target = b.str("target", cfg.control.target);
    cfg.control.target_case = b.str("target_case", cfg.control.target_case);
    cfg.control.reg_nu = b.num("reg_nu", cfg.control.reg_nu);
    cfg.control.max_iter = static_cast<int>(b.integer("max_iter", cfg.control.max_iter));
    cfg.control.grad_tol = b.num("grad_tol", cfg.control.grad_tol);
    cfg.control.lbfgs_memory =
        static_cast<int>(b.integer("lbfgs_memory", cfg.control.lbfgs_memory));
    b.done();
  }
  if (root.has("verify")) {
    ObjectReader b(root.child("verify"), "verify");
    cfg.verify.samples = b.integer("samples", cfg.verify.samples);
    cfg.verify.jacobian_samples = b.integer("jacobian_samples", cfg.verify.jacobian_samples);
    cfg.verify.alpha0 = b.num("alpha0", cfg.verify.alpha0);
    cfg.verify.alpha_inf = b.num("alpha_inf", cfg.verify.alpha_inf);
    cfg.verify.mms_case = b.str("mms_case", cfg.verify.mms_case);
    cfg.verify.mms_base = static_cast<int>(b.integer("mms_base", cfg.verify.mms_base));
    cfg.verify.mms_levels = static_cast<int>(b.integer("mms_levels", cfg.verify.mms_levels));
    b.done();
  }
  if (root.has("output")) {
    ObjectReader b(root.child("output"), "output");
    cfg.output.directory = b.str("directory", cfg.output.directory);
    cfg.output.write_fields = b.boolean("write_fields", cfg.output.write_fields);
    cfg.output.format = b.str("format", cfg.output.format);
    b.done();
  }
  cfg.seed = root.uinteger("seed", cfg.seed);
  root.done();

  cfg.validate();
  return cfg;
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("config: cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

}  // namespace rheo
