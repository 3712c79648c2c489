#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <unistd.h>

#include "topofilter/cli.hpp"

int main(int argc, char** argv) {
  topofilter::cli::Environment env;
  env.color = std::getenv("NO_COLOR") == nullptr && isatty(STDERR_FILENO);
  std::vector<std::string> args(argv + 1, argv + argc);
  return topofilter::cli::run(args, std::cout, std::cerr, env);
}
