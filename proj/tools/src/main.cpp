#include <iostream>
#include <string>
#include <vector>

#include "conjbound_cli/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return conjbound::cli::run(args, std::cout, std::cerr);
}
