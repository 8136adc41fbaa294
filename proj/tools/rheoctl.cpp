// rheoctl: command line front end for the rheocontrol library.
//
//   rheoctl solve    --config cfg.json [--out DIR] [--seed N] [--threads N]
//   rheoctl optimize --config cfg.json ...
//   rheoctl verify {tensor|mms|constants} --config cfg.json ...
//   rheoctl tensor-check --config cfg.json ...
//
// Exit codes: 0 success, 1 verification reported failure, 2 run aborted
// (the JSON error lands in <out>/error.json and on stdout), 3 bad usage.

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "rheocontrol/dispatch.hpp"
#include "rheocontrol/errors.hpp"

namespace {

struct CliArgs {
  std::string config_path;
  std::string out_dir;
  bool out_set = false;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int threads = 1;
};

void add_common(CLI::App* cmd, CliArgs* args) {
  cmd->add_option("--config", args->config_path, "Path to the JSON run configuration")
      ->required();
  cmd->add_option("--out", args->out_dir, "Output directory (default: from config)")
      ->each([args](const std::string&) { args->out_set = true; });
  cmd->add_option("--seed", args->seed, "Random seed (default: from config)")
      ->each([args](const std::string&) { args->seed_set = true; });
  cmd->add_option("--threads", args->threads, "Worker threads; 1 is the deterministic mode")
      ->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal control of generalized Newtonian channel flow on staggered grids"};
  app.require_subcommand(1);

  CliArgs args;
  CLI::App* solve = app.add_subcommand("solve", "Run one forward flow solve");
  CLI::App* optimize = app.add_subcommand("optimize", "Minimize the tracking objective");
  CLI::App* verify = app.add_subcommand("verify", "Run a verification campaign");
  verify->require_subcommand(1);
  CLI::App* vt = verify->add_subcommand("tensor", "Stress-law inequality campaign");
  CLI::App* vm = verify->add_subcommand("mms", "Manufactured-solution convergence study");
  CLI::App* vc = verify->add_subcommand("constants", "Embedding-constant estimates");
  CLI::App* check = app.add_subcommand("tensor-check", "Fast stress-law smoke check");
  for (CLI::App* c : {solve, optimize, vt, vm, vc, check}) add_common(c, &args);

  CLI11_PARSE(app, argc, argv);

  try {
    const rheo::RunConfig cfg = rheo::parse_config(args.config_path);

    rheo::Command cmd;
    if (solve->parsed())
      cmd = rheo::Command::Solve;
    else if (optimize->parsed())
      cmd = rheo::Command::Optimize;
    else if (check->parsed())
      cmd = rheo::Command::TensorCheck;
    else if (vt->parsed())
      cmd = rheo::Command::VerifyTensor;
    else if (vm->parsed())
      cmd = rheo::Command::VerifyMms;
    else
      cmd = rheo::Command::VerifyConstants;

    rheo::DispatchOptions opt;
    opt.out_dir = args.out_set ? args.out_dir : cfg.output.directory;
    opt.seed = args.seed_set ? args.seed : cfg.seed;
    opt.threads = args.threads;
    return rheo::dispatch(cmd, cfg, opt, std::cout);
  } catch (const std::exception& e) {
    // Configuration failed before dispatch could produce its own report.
    nlohmann::ordered_json err;
    err["error"]["type"] = dynamic_cast<const rheo::IoError*>(&e) ? "io" : "config";
    err["error"]["message"] = e.what();
    std::cout << err.dump(2) << "\n";
    return 2;
  }
}
