#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "corelab/report.hpp"

namespace corelab {

struct CommandOptions {
  Tolerance tol;
  std::uint64_t seed = 1234;
  int depth = 4;
  std::vector<int> m;  // empty = flag not given
  bool json = false;
  bool check = false;
};

struct CommandResult {
  Report report;
  int exit_code = 0;  // 0 ok, 2 failed expectations
};

CommandResult cmd_validate(const std::string& file, const CommandOptions& opt);
CommandResult cmd_structure(const std::string& file, const CommandOptions& opt);
CommandResult cmd_equiv(const std::string& file_a, const std::string& file_b,
                        const CommandOptions& opt);
CommandResult cmd_dilate(const std::string& file, const CommandOptions& opt);
// Composite validate + structure (+ dilation summary for 1-graph inputs).
CommandResult cmd_report(const std::string& file, const CommandOptions& opt);

// Exit codes: 0 success, 1 parse/usage error, 2 analysis/expectation failure.
int run_cli(int argc, const char* const* argv);

}  // namespace corelab
