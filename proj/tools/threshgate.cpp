#include <iostream>
#include <string>
#include <vector>

#include "threshgate/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return threshgate::cli::run(args, std::cout, std::cerr);
}
