#pragma once

#include <filesystem>
#include <ostream>

#include "dezin/config.hpp"

namespace dezin {

enum ExitCode : int { exit_ok = 0, exit_failure = 1, exit_no_solution = 2, exit_config = 3 };

/// Runs one pipeline and writes its files into out_dir (created if missing).
/// Progress lines go to log unless quiet.
int run(const RunConfig& cfg, RunMode mode, const std::filesystem::path& out_dir, std::ostream& log,
        bool quiet = false);

/// dezin-solve <forward|inverse|analyze|ml|selftest> --config <path> [--out <dir>] [--modes K] [--quiet]
int cli_main(int argc, char** argv);

}  // namespace dezin
