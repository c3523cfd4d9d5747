#include <iostream>
#include <string>
#include <vector>

#include "jpit/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return jpit::run_cli(args, std::cout, std::cerr);
}
