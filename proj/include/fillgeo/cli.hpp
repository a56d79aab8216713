#pragma once

#include <string>
#include <vector>

namespace fillgeo::cli {

// 0: success, 1: checked false or invalid input, 2: usage, file or internal
// error.
struct CommandOutcome {
  int exit_code = 0;
  std::string output;  // stdout
  std::string error;   // stderr
};

// args[0] is the program name.
CommandOutcome run(const std::vector<std::string>& args);

// Worker count used when --jobs is absent: FILLGEO_JOBS if set and
// positive, else 0 (OpenMP default).
int default_jobs();

}  // namespace fillgeo::cli
