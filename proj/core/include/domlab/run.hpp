#pragma once

#include <string>

#include "json.hpp"

#include "domlab/config.hpp"

namespace domlab {

using Json = nlohmann::ordered_json;

// Executes one command and returns the report document.  Throws
// ValidationError / NumericalError; the CLI maps these to exit codes.
Json run_command(const RunConfig& config);

// Canonical serialization used for report files; stable across runs.
std::string report_to_string(const Json& report);

// Report with the wall clock field cleared, for byte comparisons.
Json strip_wall_clock(Json report);

// Full command line interface.  Returns the process exit code:
// 0 success, 2 validation failure, 3 numerical failure.
int run_cli(int argc, char** argv);

}  // namespace domlab
