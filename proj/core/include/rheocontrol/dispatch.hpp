#pragma once

#include <cstdint>
#include <ostream>
#include <string>

#include "rheocontrol/config.hpp"

namespace rheo {

enum class Command {
  Solve,
  Optimize,
  VerifyTensor,
  VerifyMms,
  VerifyConstants,
  TensorCheck,
};

// Accepts "solve", "optimize", "verify tensor", "verify mms",
// "verify constants", "tensor-check"; anything else is a ConfigError.
Command parse_command(const std::string& name);

struct DispatchOptions {
  std::string out_dir = "out";
  std::uint64_t seed = 12345;
  int threads = 1;
};

// Runs one command against a validated configuration.  Writes a JSON report
// (and any field exports) into out_dir, streams the human-readable run log
// — starting with the canonical config echo — to `log`, and returns the
// process exit code: 0 on success, 1 when a verification reports failure,
// 2 when the run aborts.  Aborts also leave a machine-readable
// error.json in out_dir and print it as the last log line.
int dispatch(Command cmd, const RunConfig& cfg, const DispatchOptions& opt, std::ostream& log);

}  // namespace rheo
