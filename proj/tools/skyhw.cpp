#include <iostream>

#include "skyhw/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return skyhw::run_cli(args, std::cout, std::cerr);
}
