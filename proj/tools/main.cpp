#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) {
  int code = zakbench::cli::kExitOk;
  auto config = zakbench::cli::parse_args(argc, argv, code, std::cout, std::cerr);
  if (!config) return code;
  return zakbench::cli::run(*config, std::cerr);
}
