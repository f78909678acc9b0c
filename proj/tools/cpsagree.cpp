#include <iostream>
#include <string>
#include <vector>

#include "cpsagree/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return cpsagree::cli::run_command(args, std::cout, std::cerr);
}
