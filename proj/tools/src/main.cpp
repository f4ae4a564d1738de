#include <iostream>
#include <string>
#include <vector>

#include "ngls_cli/run.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return ngls::cli::run(args, std::cout, std::cerr);
}
