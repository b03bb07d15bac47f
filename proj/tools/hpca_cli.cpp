#include <iostream>
#include <string>
#include <vector>

#include "hpca/cli.h"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return hpca::cli::run(args, std::cout, std::cerr);
}
