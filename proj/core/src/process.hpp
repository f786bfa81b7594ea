#pragma once

#include <string>
#include <utility>
#include <vector>

namespace maintviz::detail {

struct ProcessResult {
  int exit_code = -1;
  std::string out;
};

/// Runs argv[0] from PATH with stdout captured and stderr discarded.
/// `env` entries override or extend the inherited environment.
/// Throws IoFailure when the process cannot be started.
ProcessResult run_process(
    const std::vector<std::string>& argv,
    const std::vector<std::pair<std::string, std::string>>& env = {});

}  // namespace maintviz::detail
