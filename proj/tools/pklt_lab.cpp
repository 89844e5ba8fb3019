#include "pklt/cli.hpp"

#include <cstdlib>
#include <iostream>
#include <unistd.h>

int main(int argc, char** argv) {
  pklt::cli::Environment env;
  env.out_is_tty = isatty(STDOUT_FILENO) != 0;
  env.no_color = std::getenv("NO_COLOR") != nullptr;
  std::vector<std::string> args(argv + 1, argv + argc);
  return pklt::cli::run_command(args, std::cout, std::cerr, env);
}
