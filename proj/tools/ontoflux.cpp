#include <iostream>
#include <string>
#include <vector>

#include "ontoflux/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return ontoflux::run_cli(args, std::cout, std::cerr);
}
