#include <iostream>
#include <vector>

#include "grasslin/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return grasslin::run_cli(args, std::cout, std::cerr);
}
