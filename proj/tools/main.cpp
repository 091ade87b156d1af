#include <iostream>
#include <vector>

#include "clearbench/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return clearbench::run_cli(args, std::cout, std::cerr);
}
