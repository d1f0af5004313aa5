#include <iostream>
#include <string>
#include <vector>

#include "hillq/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return hillq::cli::run(args, std::cout, std::cerr);
}
