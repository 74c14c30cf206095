#pragma once

#include <exception>
#include <ostream>
#include <string>

#include "erange/cli/config.hpp"
#include "erange/cli/output.hpp"

namespace erange::cli {

enum class Command { phase_shift, effective_range, scan, levinson, bound_states, validate };

Command parse_command(const std::string& name);
std::string to_string(Command c);

/// A finished computation: the table to emit and the exit status it implies (0 or 1).
struct Outcome {
  Table table;
  int status = 0;
};

Outcome cmd_phase_shift(const RunConfig& config);
Outcome cmd_effective_range(const RunConfig& config);
Outcome cmd_scan(const RunConfig& config);
Outcome cmd_levinson(const RunConfig& config);
Outcome cmd_bound_states(const RunConfig& config);
Outcome cmd_validate(const RunConfig& config);

/// 2 for configuration and precondition failures, 1 for numeric failures.
int exit_code_for(const std::exception& e);

/// Validates the config, checks the output path, runs the command and writes the table.
/// Never throws; errors go to err as one line and select the exit code.
int run(Command command, const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace erange::cli
