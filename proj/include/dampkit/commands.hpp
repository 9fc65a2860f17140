#pragma once

// The six CLI commands. Each writes its files under the output directory and
// returns a JSON report; library errors propagate as exceptions.

#include <string>
#include <vector>

#include "dampkit/config.hpp"

namespace dampkit {

struct CommandResult {
    bool passed = true;  // false only when validate finds failing checks
    Json report;
    std::vector<std::string> files;
};

CommandResult cmd_convert(const RunConfig& c);
CommandResult cmd_propagate(const RunConfig& c);
CommandResult cmd_lindblad(const RunConfig& c);
CommandResult cmd_divisibility(const RunConfig& c);
CommandResult cmd_scan(const RunConfig& c);
CommandResult cmd_validate(const RunConfig& c);

// Dispatch on c.command. Throws InvalidArgument for unknown commands.
CommandResult run_command(const RunConfig& c);

const std::vector<std::string>& command_names();

} // namespace dampkit
