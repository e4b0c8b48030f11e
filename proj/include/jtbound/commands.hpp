#ifndef JTBOUND_COMMANDS_HPP_
#define JTBOUND_COMMANDS_HPP_

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "jtbound/subtree.hpp"
#include "jtbound/verify.hpp"

namespace jtb {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitParse = 2,
  kExitInvalidModel = 3,
  kExitCapacity = 4,
  kExitViolation = 5,
  kExitDegenerate = 6,
};

enum class ReportFormat { structured, human };

struct RunConfig {
  std::string command;  // solve | bounds | verify | gen
  std::string model_path;
  std::vector<std::string> families;  // gen uses the first; verify all of them
  std::uint64_t seed = 1;
  double tol = kInequalityTol;
  std::uint64_t max_states = OracleLimits{}.max_states;
  int max_vertices = EnumerationLimits{}.max_vertices;
  std::string out_path;  // empty: the given stream
  ReportFormat format = ReportFormat::human;
  bool allow_zeros = false;
  EnumerationMode enumerate = EnumerationMode::spanning_only;
  Strategy strategy = Strategy::exhaustive;
  std::size_t instances = 100;
  std::optional<FaultInjection> inject_fault;
};

// Each command writes its report to `out` and returns an exit code; library
// errors propagate.
int cmd_solve(const RunConfig& config, std::ostream& out);
int cmd_bounds(const RunConfig& config, std::ostream& out);
int cmd_verify(const RunConfig& config, std::ostream& out);
int cmd_gen(const RunConfig& config, std::ostream& out);

// Dispatches on config.command, redirects to out_path when set, and maps
// errors to exit codes with a one-line message on `err`.
int run_command(const RunConfig& config, std::ostream& out, std::ostream& err);

int exit_code_for(const std::exception& e);

}  // namespace jtb

#endif  // JTBOUND_COMMANDS_HPP_
