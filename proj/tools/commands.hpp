#pragma once

#include "CLI11.hpp"

#include <iosfwd>
#include <string>

namespace tomobell::cli {

/// Registers every subcommand on `app`.  Each subcommand's callback runs the computation
/// and writes results to the configured outputs (stdout when an output path is "-").
void register_commands(CLI::App& app, std::ostream& out);

/// Parses argv and runs the selected command.
/// Returns 0 on success, 2 for configuration or domain errors, 3 for accuracy,
/// convergence or normalization failures, 1 for anything else.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace tomobell::cli
