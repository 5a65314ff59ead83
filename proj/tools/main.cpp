#include <iostream>
#include <string>
#include <vector>

#include "hfsign/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return hfsign::run_cli(args, std::cout, std::cerr);
}
