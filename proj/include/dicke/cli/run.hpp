#pragma once

#include <ostream>

#include "dicke/cli/config.hpp"
#include "json.hpp"

namespace dicke::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kInfeasible = 2 };

/// Parses argv and dispatches a subcommand. Tables go to --out (or `out`),
/// diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Executes an already parsed configuration.
int execute(const RunConfig& cfg, std::ostream& out, std::ostream& err);

nlohmann::ordered_json config_json(const RunConfig& cfg);

}  // namespace dicke::cli
