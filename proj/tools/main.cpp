#include <iostream>
#include <string>
#include <vector>

#include "colombeau/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return colombeau::cli::run(args, std::cout, std::cerr);
}
