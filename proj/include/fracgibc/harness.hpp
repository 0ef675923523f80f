#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fracgibc/config.hpp"

namespace fracgibc {

/// The study commands exposed by the CLI.
const std::vector<std::string>& command_names();

/// Run one command against a parsed config, writing artifact files and a
/// manifest line into out_dir. Throws ConfigError / InvalidInput for bad
/// inputs and NumericalFailure when a numerical invariant fails.
void run_command(const std::string& command, const StudyConfig& config,
                 const std::string& out_dir, std::uint64_t seed);

}  // namespace fracgibc
