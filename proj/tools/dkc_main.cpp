#include <iostream>
#include <string>
#include <vector>

#include "dkc/cli/app.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return dkc::cli::run_cli(args, std::cout, std::cerr);
}
