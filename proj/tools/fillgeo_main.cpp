#include <iostream>
#include <string>
#include <vector>

#include "fillgeo/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv, argv + argc);
  const auto outcome = fillgeo::cli::run(args);
  std::cout << outcome.output << std::flush;
  if (!outcome.error.empty()) std::cerr << outcome.error;
  return outcome.exit_code;
}
