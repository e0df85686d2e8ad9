#include <iostream>
#include <string>
#include <vector>

#include "ifslab/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return ifslab::run_cli(args, std::cout, std::cerr);
}
